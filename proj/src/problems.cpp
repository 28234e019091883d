#include "corrkit/problems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

#include "corrkit/amplifier.hpp"
#include "corrkit/errors.hpp"
#include "corrkit/prng.hpp"

namespace corrkit::problems {

LightBulbInstance gen_lightbulb(std::int64_t n, std::int64_t d, double rho,
                                std::uint64_t seed) {
  if (n < 2) throw ParameterError("gen_lightbulb: n must be >= 2");
  if (!(rho > 0 && rho <= 1)) throw ParameterError("gen_lightbulb: rho must be in (0,1]");
  const double flips_real = static_cast<double>(d) * (1.0 - rho) / 2.0;
  const std::int64_t flips = static_cast<std::int64_t>(std::floor(flips_real));
  if (flips < 0 || flips > d)
    throw ParameterError("gen_lightbulb: infeasible rho,d combination");

  LightBulbInstance inst;
  inst.rho = rho;
  inst.seed = seed;
  SplitMix64 rng(seed);
  inst.vectors.reserve(n);
  for (std::int64_t i = 0; i < n; ++i)
    inst.vectors.push_back(SignVector::random(d, rng));

  // planted pair at seeded-random positions, away from any fixed bucket edge
  const std::int64_t a = static_cast<std::int64_t>(rng.below(n));
  std::int64_t b = static_cast<std::int64_t>(rng.below(n - 1));
  if (b >= a) ++b;
  inst.vectors[b] = inst.vectors[a];
  // flip `flips` distinct coordinates: partial Fisher-Yates over positions
  std::vector<std::int64_t> pos(d);
  std::iota(pos.begin(), pos.end(), 0);
  for (std::int64_t i = 0; i < flips; ++i) {
    const std::int64_t j = i + static_cast<std::int64_t>(rng.below(d - i));
    std::swap(pos[i], pos[j]);
    inst.vectors[b].flip(pos[i]);
  }
  inst.planted_a = std::min(a, b);
  inst.planted_b = std::max(a, b);
  return inst;
}

std::vector<SplitRound> split_single_set(std::int64_t n) {
  if (n < 2) throw ParameterError("split_single_set: n must be >= 2");
  int rounds = 0;
  while ((std::int64_t(1) << rounds) < n) ++rounds;
  std::vector<SplitRound> out(rounds);
  for (int r = 0; r < rounds; ++r)
    for (std::int64_t i = 0; i < n; ++i) {
      if ((i >> r) & 1)
        out[r].x_idx.push_back(i);
      else
        out[r].y_idx.push_back(i);
    }
  return out;
}

LightBulbResult solve_lightbulb(const LightBulbInstance& inst,
                                const LightBulbOptions& opt) {
  const std::int64_t n = static_cast<std::int64_t>(inst.vectors.size());
  detector::RunOptions run = opt.run;
  run.tau = opt.tau_override ? *opt.tau_override : std::pow(inst.rho, opt.kappa);
  if (!(run.tau < inst.rho))
    throw ParameterError("solve_lightbulb: need tau < rho (supply tau_override)");

  // amplify once, reuse across rounds
  std::vector<SignVector> amplified;
  const std::vector<SignVector>* amp = &inst.vectors;
  if (run.mode == detector::AmpMode::toy || run.mode == detector::AmpMode::explicit_amp) {
    if (!run.schedule) throw ParameterError("solve_lightbulb: amplifier mode needs a schedule");
    amplified.reserve(inst.vectors.size());
    for (const auto& v : inst.vectors)
      amplified.push_back(amplifier::amplify(v, *run.schedule, run.memory_cap_log2));
    amp = &amplified;
  } else if (run.mode == detector::AmpMode::tensor_sample) {
    amplified = detector::tensor_sample_map(inst.vectors, run.ts_dim, run.ts_p, run.ts_seed);
    amp = &amplified;
  }

  LightBulbResult best;
  const auto rounds = split_single_set(n);
  best.rounds = static_cast<std::int64_t>(rounds.size());
  for (const auto& round : rounds) {
    std::vector<SignVector> ax, ay, ox, oy;
    for (auto i : round.x_idx) {
      ax.push_back((*amp)[i]);
      ox.push_back(inst.vectors[i]);
    }
    for (auto i : round.y_idx) {
      ay.push_back((*amp)[i]);
      oy.push_back(inst.vectors[i]);
    }
    auto rep = detector::detect_amplified(ax, ay, ox, oy, inst.rho, run, "round");
    best.flagged_tiles += rep.flagged_tiles;
    for (const auto& pr : rep.outliers) {
      const std::int64_t a = round.x_idx[pr.x_index];
      const std::int64_t b = round.y_idx[pr.y_index];
      const std::int64_t lo = std::min(a, b), hi = std::max(a, b);
      const std::int64_t mag = std::abs(pr.inner);
      if (!best.found || mag > std::abs(best.inner) ||
          (mag == std::abs(best.inner) &&
           std::make_pair(lo, hi) < std::make_pair(best.a, best.b))) {
        best.found = true;
        best.a = lo;
        best.b = hi;
        best.inner = pr.inner;
      }
    }
  }
  return best;
}

ParityInstance gen_parity(std::int64_t v, std::int64_t k, const std::vector<int>& support,
                          double eta, std::int64_t d, std::uint64_t seed) {
  if (v < 1 || v > 64) throw ParameterError("gen_parity: v must be in [1,64]");
  if (static_cast<std::int64_t>(support.size()) != k)
    throw ParameterError("gen_parity: |S| != k");
  if (k > v) throw ParameterError("gen_parity: k must be <= v");
  std::set<int> uniq(support.begin(), support.end());
  if (static_cast<std::int64_t>(uniq.size()) != k || (k > 0 && (*uniq.begin() < 0 ||
      *uniq.rbegin() >= v)))
    throw ParameterError("gen_parity: support must be k distinct variables in [0,v)");
  if (!(eta >= 0 && eta < 1)) throw ParameterError("gen_parity: eta must be in [0,1)");
  if (d < 1) throw ParameterError("gen_parity: d must be >= 1");

  ParityInstance inst;
  inst.v = v;
  inst.k = k;
  inst.support.assign(uniq.begin(), uniq.end());
  inst.eta = eta;
  inst.d = d;
  inst.seed = seed;
  inst.columns.assign(v, SignVector(d));
  inst.labels = SignVector(d);

  SplitMix64 rng(seed);
  for (std::int64_t i = 0; i < d; ++i) {
    // one example per step: v sign bits from one word, then the noise draw
    const std::uint64_t bits = rng.next();
    int prod = 1;
    for (std::int64_t l = 0; l < v; ++l) {
      const int sign = (bits >> l) & 1 ? +1 : -1;
      inst.columns[l].set(i, sign);
    }
    for (int l : inst.support) prod *= (bits >> l) & 1 ? +1 : -1;
    const int z = rng.uniform01() < eta ? -1 : +1;
    inst.labels.set(i, z * prod);
  }
  return inst;
}

std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (n > 64) throw CapacityError("binomial: n above 64 not supported");
  // Pascal table; every C(n,k) with n <= 64 fits in 64 bits
  static const auto table = [] {
    std::array<std::array<std::uint64_t, 65>, 65> t{};
    for (int i = 0; i <= 64; ++i) {
      t[i][0] = 1;
      for (int j = 1; j <= i; ++j)
        t[i][j] = t[i - 1][j - 1] + (j <= i - 1 ? t[i - 1][j] : 0);
    }
    return t;
  }();
  return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

std::uint64_t subset_rank_colex(const std::vector<int>& subset) {
  std::vector<int> s = subset;
  std::sort(s.begin(), s.end());
  std::uint64_t rank = 0;
  for (std::size_t t = 0; t < s.size(); ++t)
    rank += binomial(s[t], static_cast<std::int64_t>(t) + 1);
  return rank;
}

std::vector<int> subset_unrank_colex(std::uint64_t rank, std::int64_t v, std::int64_t j) {
  std::vector<int> out(static_cast<std::size_t>(j));
  std::int64_t c = v - 1;
  for (std::int64_t t = j; t >= 1; --t) {
    while (c >= t - 1 && binomial(c, t) > rank) --c;
    out[static_cast<std::size_t>(t - 1)] = static_cast<int>(c);
    rank -= binomial(c, t);
    --c;
  }
  return out;
}

ParityCollections build_parity_collections(const ParityInstance& inst) {
  if (inst.v < inst.k) throw ParameterError("build_parity_collections: v >= k required");
  ParityCollections out;
  out.j1 = inst.k / 2;
  out.j2 = inst.k - out.j1;
  const std::uint64_t nx = binomial(inst.v, out.j1);
  const std::uint64_t ny = binomial(inst.v, out.j2);
  out.X.reserve(nx);
  out.Y.reserve(ny);
  auto product_over = [&](const std::vector<int>& subset) {
    SignVector acc(inst.d);
    for (std::int64_t i = 0; i < inst.d; ++i) acc.set(i, +1);  // x^empty = 1
    for (int l : subset) acc = acc.hadamard(inst.columns[l]);
    return acc;
  };
  for (std::uint64_t r = 0; r < nx; ++r)
    out.X.push_back(product_over(subset_unrank_colex(r, inst.v, out.j1)));
  for (std::uint64_t r = 0; r < ny; ++r)
    out.Y.push_back(product_over(subset_unrank_colex(r, inst.v, out.j2)).hadamard(inst.labels));
  return out;
}

ParityResult solve_parity(const ParityInstance& inst, const ParityOptions& opt) {
  ParityResult res;
  const double bias = std::abs(1.0 - 2.0 * inst.eta);
  res.rho = opt.rho_override ? *opt.rho_override : std::pow(bias, opt.xi);
  res.tau = opt.tau_override ? *opt.tau_override : std::pow(res.rho, opt.xi);
  if (!(res.tau < res.rho))
    throw ParameterError("solve_parity: need tau < rho");

  ParityCollections coll = build_parity_collections(inst);
  detector::RunOptions run = opt.run;
  run.tau = res.tau;
  auto rep = detector::detect_outliers(coll.X, coll.Y, res.rho, run);

  // map reported pairs to size-k candidates and score them on the examples
  std::uint64_t best_rank = 0;
  bool have = false;
  std::vector<int> best_subset;
  std::int64_t best_score = -1;
  std::set<std::uint64_t> seen;
  for (const auto& pr : rep.outliers) {
    auto j1 = subset_unrank_colex(static_cast<std::uint64_t>(pr.x_index), inst.v, coll.j1);
    auto j2 = subset_unrank_colex(static_cast<std::uint64_t>(pr.y_index), inst.v, coll.j2);
    std::vector<int> cand;
    std::set_symmetric_difference(j1.begin(), j1.end(), j2.begin(), j2.end(),
                                  std::back_inserter(cand));
    if (static_cast<std::int64_t>(cand.size()) != inst.k) continue;
    const std::uint64_t rank = subset_rank_colex(cand);
    if (!seen.insert(rank).second) continue;
    SignVector prod(inst.d);
    for (std::int64_t i = 0; i < inst.d; ++i) prod.set(i, +1);
    for (int l : cand) prod = prod.hadamard(inst.columns[l]);
    const std::int64_t score = std::abs(prod.inner(inst.labels));
    if (!have || score > best_score || (score == best_score && rank < best_rank)) {
      have = true;
      best_score = score;
      best_rank = rank;
      best_subset = cand;
    }
  }
  if (have) {
    res.found = true;
    res.support = best_subset;
    res.score = best_score;
  }
  return res;
}

}  // namespace corrkit::problems

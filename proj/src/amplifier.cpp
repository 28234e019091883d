#include "corrkit/amplifier.hpp"

#include <cmath>
#include <utility>

#include "corrkit/bounds.hpp"
#include "corrkit/errors.hpp"
#include "corrkit/spectral.hpp"

namespace corrkit::amplifier {

namespace {

constexpr std::int64_t kHardBitCap = std::int64_t(1) << 28;  // absolute allocation guard

// smallest k with 2^k >= bound (bound > 0), robust at representable boundaries
std::int64_t ceil_log2_double(double bound) {
  std::int64_t k = static_cast<std::int64_t>(std::ceil(std::log2(bound)));
  while (std::ldexp(1.0, static_cast<int>(k)) < bound) ++k;
  while (k > 0 && std::ldexp(1.0, static_cast<int>(k - 1)) >= bound) --k;
  return k;
}

// out(j) = x(j mod d) for j < out_dim
SignVector cyclic_extend(const SignVector& x, std::int64_t out_dim) {
  const std::int64_t d = x.dim();
  if (out_dim == d) return x;
  SignVector out(out_dim);
  if (d % 64 == 0) {
    const std::size_t nw = static_cast<std::size_t>(d / 64);
    auto& w = out.words();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = x.words()[i % nw];
  } else {
    for (std::int64_t j = 0; j < out_dim; ++j) out.set(j, x.get(j % d));
  }
  out.clear_pad();
  return out;
}

double measured_or_known_lambda(const rotgraph::GraphPtr& g, bool* measured) {
  using rotgraph::Kind;
  if (g->kind() == Kind::complete_loops) {
    *measured = true;  // adjacency is rank-one all-ones
    return 0.0;
  }
  if (g->kind() == Kind::complete_no_loops) {
    *measured = true;  // J - I spectrum
    return 1.0 / static_cast<double>(g->vertex_count() - 1);
  }
  if (g->vertex_count() * g->degree() <= pow2(22)) {
    *measured = true;
    return rotgraph::second_eigenvalue(g).lambda_hat;
  }
  *measured = false;
  return 1.0;  // unknown; caller substitutes a construction bound
}

Level make_toy_level(const ToyLevelSpec& spec, const BigInt& d_in, double tau_i,
                     double gamma0) {
  Level lv;
  lv.tau_i = tau_i;
  lv.d_in = d_in;
  switch (spec.kind) {
    case ToyGraphKind::complete_loops:
    case ToyGraphKind::complete_no_loops: {
      if (spec.copies < 1) throw ParameterError("toy level: copies must be >= 1");
      BigInt D = d_in * spec.copies;
      if (D > pow2(40)) throw CapacityError("toy level: graph too large");
      const std::uint64_t n = static_cast<std::uint64_t>(D);
      lv.graph = spec.kind == ToyGraphKind::complete_loops
                     ? rotgraph::complete_with_loops(n)
                     : rotgraph::complete_no_loops(n);
      break;
    }
    case ToyGraphKind::base_rvw: {
      lv.graph = rotgraph::base_graph(gf2k::find_irreducible(spec.b), spec.d_poly);
      if (lv.graph->vertex_count() < d_in || lv.graph->vertex_count() % d_in != 0)
        throw ParameterError("toy level: base graph vertex count " +
                             lv.graph->vertex_count().str() +
                             " is not a multiple of the level dimension " + d_in.str());
      break;
    }
  }
  lv.D_i = lv.graph->vertex_count();
  lv.Delta_i = lv.graph->degree();
  lv.d_out = lv.D_i * lv.Delta_i;
  lv.lambda_hat = measured_or_known_lambda(lv.graph, &lv.lambda_measured);
  lv.degree_bound_ok =
      2.0 * lv.lambda_hat <= (1.0 - 1.0 / gamma0) * tau_i * tau_i;
  return lv;
}

}  // namespace

bool AmplifierSchedule::toy_verified() const {
  for (const Level& lv : levels)
    if (!lv.lambda_measured || !lv.degree_bound_ok) return false;
  return !levels.empty();
}

AmplifierSchedule derive_schedule(const AmplifierParams& p) {
  if (p.d < 1) throw ParameterError("derive_schedule: d must be >= 1");
  if (p.ell < 1) throw ParameterError("derive_schedule: ell must be >= 1");
  if (!(p.tau > 0.0 && p.tau < 1.0))
    throw ParameterError("derive_schedule: tau must lie in (0,1)");
  if (!(p.gamma > 1.0)) throw ParameterError("derive_schedule: gamma must exceed 1");

  AmplifierSchedule s;
  s.params = p;
  s.gamma0 = std::sqrt(p.gamma);
  s.tau0 = p.tau / p.gamma;

  if (p.mode == Mode::theoretical) {
    if (p.K < 1) throw ParameterError("derive_schedule: K must be >= 1");
    // explicit output-dimension requirement, checked exactly
    bounds::DimQuery q;
    q.d = p.d;
    q.tau = BigRat(p.tau);
    q.gamma = BigRat(p.gamma);
    q.ell = p.ell;
    q.p = std::int64_t(1) << p.ell;
    const std::int64_t k_min = bounds::explicit_dim(q).K;
    if (p.K < k_min)
      throw ParameterError(
          "derive_schedule: 2^K below the explicit output-dimension bound "
          "2^" + std::to_string(k_min));
    s.K = p.K;
    // minimal k with 2^k >= 2d (1-gamma^-1/2)^-1 gamma / tau
    const double k_bound =
        2.0 * static_cast<double>(p.d) / (1.0 - 1.0 / s.gamma0) * p.gamma / p.tau;
    s.k = std::max<std::int64_t>(1, ceil_log2_double(k_bound));

    double tau_i = s.tau0;
    std::int64_t e_in = s.k;  // d_i = 2^e_in
    for (int i = 0; i < p.ell; ++i) {
      Level lv;
      lv.tau_i = tau_i;
      lv.d_in = pow2(e_in);
      const double need = 32.0 / ((1.0 - 1.0 / s.gamma0) * tau_i * tau_i);
      lv.b_i = std::max<std::int64_t>(10, ceil_log2_double(need));
      if (lv.b_i > 64)
        throw CapacityError(
            "derive_schedule: level " + std::to_string(i) + " needs b_i = " +
            std::to_string(lv.b_i) + " > 64, beyond the GF(2^b) backend");
      lv.t_i = std::max<std::int64_t>(1, (e_in + 16 * lv.b_i - 1) / (16 * lv.b_i));
      lv.D_i = pow2(16 * lv.b_i * lv.t_i);
      lv.Delta_i = pow2(4 * lv.b_i);
      lv.d_out = lv.D_i * lv.Delta_i;
      lv.graph = rotgraph::rvw_family(static_cast<int>(lv.b_i), lv.t_i);
      lv.lambda_hat = 16.0 * std::ldexp(1.0, static_cast<int>(-lv.b_i));
      lv.lambda_measured = false;
      lv.degree_bound_ok = 2.0 * lv.lambda_hat <= (1.0 - 1.0 / s.gamma0) * tau_i * tau_i;
      e_in = 16 * lv.b_i * lv.t_i + 4 * lv.b_i;
      tau_i = tau_i * tau_i / s.gamma0;
      s.levels.push_back(std::move(lv));
    }
    s.d_ell = pow2(e_in);
    if (e_in > s.K)
      throw ParameterError("derive_schedule: d_ell exceeds 2^K (internal)");
    return s;
  }

  // toy mode
  if (static_cast<int>(p.toy_levels.size()) != p.ell)
    throw ParameterError("derive_schedule: toy mode needs one level spec per level");
  s.k = p.toy_k ? *p.toy_k : ceil_log2_double(static_cast<double>(p.d));
  if (s.k < 0 || s.k > 40) throw ParameterError("derive_schedule: toy k out of range");
  if (pow2(s.k) < p.d)
    throw ParameterError("derive_schedule: 2^k smaller than the input dimension");

  BigInt d_i = pow2(s.k);
  double tau_i = s.tau0;
  for (int i = 0; i < p.ell; ++i) {
    Level lv = make_toy_level(p.toy_levels[i], d_i, tau_i, s.gamma0);
    d_i = lv.d_out;
    tau_i = tau_i * tau_i / s.gamma0;
    s.levels.push_back(std::move(lv));
  }
  s.d_ell = d_i;
  const std::int64_t k_min = ceil_log2(BigRat(s.d_ell));
  s.K = p.K > 0 ? p.K : k_min;
  if (s.K < k_min)
    throw ParameterError("derive_schedule: 2^K smaller than the final dimension");
  return s;
}

SignVector copy_truncate(const SignVector& x, std::int64_t k) {
  if (k < 0 || k > 40) throw ParameterError("copy_truncate: k out of range");
  const std::int64_t target = std::int64_t(1) << k;
  if (target < x.dim())
    throw ParameterError("copy_truncate: 2^k must be at least the input dimension");
  return cyclic_extend(x, target);
}

SignVector approx_square(const SignVector& x, const rotgraph::GraphPtr& g) {
  if (BigInt(x.dim()) != g->vertex_count())
    throw ParameterError("approx_square: vector dimension " + std::to_string(x.dim()) +
                         " does not match vertex count of " + g->describe());
  const BigInt out_big = g->vertex_count() * g->degree();
  if (out_big > kHardBitCap)
    throw CapacityError("approx_square: output dimension exceeds the materialization cap");
  const std::int64_t D = x.dim();
  const std::int64_t delta = static_cast<std::int64_t>(g->degree());
  SignVector out(D * delta);

  if (g->kind() == rotgraph::Kind::complete_loops && D % 64 == 0) {
    // block u of the output is x itself, sign-flipped when x(u) = -1
    const std::size_t nw = static_cast<std::size_t>(D / 64);
    auto& ow = out.words();
    for (std::int64_t u = 0; u < D; ++u) {
      const bool pos = x.get(u) > 0;
      const std::size_t base = static_cast<std::size_t>(u) * nw;
      for (std::size_t w = 0; w < nw; ++w)
        ow[base + w] = pos ? x.words()[w] : ~x.words()[w];
    }
    return out;
  }

  for (std::int64_t u = 0; u < D; ++u) {
    const int xu = x.get(u);
    for (std::int64_t i = 0; i < delta; ++i) {
      const std::uint64_t v = g->rot_vertex64(static_cast<std::uint64_t>(u),
                                              static_cast<std::uint64_t>(i));
      out.set(u * delta + i, xu * x.get(static_cast<std::int64_t>(v)));
    }
  }
  return out;
}

SignVector amplify(const SignVector& x, const AmplifierSchedule& s,
                   std::int64_t memory_cap_log2) {
  if (x.dim() != s.params.d)
    throw ParameterError("amplify: input dimension does not match the schedule");
  const BigInt cap = pow2(memory_cap_log2);
  if (pow2(s.K) > cap)
    throw CapacityError(
        "amplify: 2^K exceeds the materialization cap; use amplify_coord");
  for (const Level& lv : s.levels)
    if (lv.D_i > cap || lv.d_out > cap)
      throw CapacityError(
          "amplify: intermediate dimension exceeds the materialization cap; use "
          "amplify_coord");

  SignVector cur = copy_truncate(x, s.k);
  for (const Level& lv : s.levels) {
    cur = cyclic_extend(cur, static_cast<std::int64_t>(lv.D_i));
    cur = approx_square(cur, lv.graph);
  }
  return cyclic_extend(cur, std::int64_t(1) << s.K);
}

namespace {

int coord_rec(const SignVector& x, const AmplifierSchedule& s, int level,
              const BigInt& idx, CoordStats* stats) {
  if (level == 0) {
    if (stats) ++stats->input_touches;
    // hat x(t) = x(t mod d)
    const std::int64_t t = static_cast<std::int64_t>(idx % s.params.d);
    return x.get(t);
  }
  const Level& lv = s.levels[static_cast<std::size_t>(level - 1)];
  const BigInt u = idx / lv.Delta_i;
  const BigInt lab = idx % lv.Delta_i;
  rotgraph::RotPoint r = lv.graph->rot(u, lab);
  if (stats) ++stats->rot_evals[static_cast<std::size_t>(level - 1)];
  const int a = coord_rec(x, s, level - 1, u % lv.d_in, stats);
  const int b = coord_rec(x, s, level - 1, r.vertex % lv.d_in, stats);
  return a * b;
}

}  // namespace

int amplify_coord(const SignVector& x, const AmplifierSchedule& s, const BigInt& j,
                  CoordStats* stats) {
  if (x.dim() != s.params.d)
    throw ParameterError("amplify_coord: input dimension does not match the schedule");
  if (j < 0 || j >= pow2(s.K))
    throw ParameterError("amplify_coord: index out of range");
  if (stats) {
    stats->input_touches = 0;
    stats->rot_evals.assign(s.levels.size(), 0);
  }
  return coord_rec(x, s, static_cast<int>(s.levels.size()), j % s.d_ell, stats);
}

BigRat amplified_inner_product(const SignVector& x, const SignVector& y,
                               const AmplifierSchedule& s,
                               std::int64_t memory_cap_log2) {
  if (x.dim() != s.params.d || y.dim() != s.params.d)
    throw ParameterError("amplified_inner_product: dimension mismatch");
  const BigInt cap = pow2(memory_cap_log2);
  SignVector cur = copy_truncate(x.hadamard(y), s.k);
  for (std::size_t i = 0; i + 1 < s.levels.size(); ++i) {
    const Level& lv = s.levels[i];
    if (lv.d_out > cap)
      throw CapacityError("amplified_inner_product: intermediate level too large");
    cur = approx_square(cyclic_extend(cur, static_cast<std::int64_t>(lv.D_i)), lv.graph);
  }
  const Level& last = s.levels.back();
  const BigInt copies = last.D_i / BigInt(cur.dim());
  BigInt S;
  switch (last.graph->kind()) {
    case rotgraph::Kind::complete_loops: {
      const BigInt t = copies * cur.sum();
      S = t * t;  // sum over all ordered pairs (u,v), loops included
      break;
    }
    case rotgraph::Kind::complete_no_loops: {
      const BigInt t = copies * cur.sum();
      S = t * t - last.D_i;  // diagonal terms z(u)^2 = 1 removed
      break;
    }
    default: {
      if (last.d_out > cap)
        throw CapacityError("amplified_inner_product: final level too large");
      SignVector z =
          approx_square(cyclic_extend(cur, static_cast<std::int64_t>(last.D_i)), last.graph);
      S = z.sum();
    }
  }
  return BigRat(S, last.d_out);
}

}  // namespace corrkit::amplifier

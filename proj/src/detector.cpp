#include "corrkit/detector.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "corrkit/errors.hpp"
#include "corrkit/parallel.hpp"
#include "corrkit/prng.hpp"

namespace corrkit::detector {

namespace {

constexpr std::int64_t kOverflowGuard = std::int64_t(1) << 62;

void overflow_guard(const std::int32_t* a, const std::int32_t* b, std::int64_t m1,
                    std::int64_t m2, std::int64_t dim) {
  std::int64_t max_a = 0, max_b = 0;
  for (std::int64_t i = 0; i < m1 * dim; ++i)
    max_a = std::max<std::int64_t>(max_a, std::abs(std::int64_t(a[i])));
  for (std::int64_t i = 0; i < dim * m2; ++i)
    max_b = std::max<std::int64_t>(max_b, std::abs(std::int64_t(b[i])));
  const unsigned __int128 worst =
      static_cast<unsigned __int128>(max_a) * static_cast<unsigned __int128>(max_b) *
      static_cast<unsigned __int128>(dim);
  if (worst >= static_cast<unsigned __int128>(kOverflowGuard))
    throw CapacityError("gemm: entry bound s^2 * D reaches 2^62");
}

}  // namespace

DetectorParams derive_params(std::int64_t n, std::int64_t d, double rho, double tau,
                             const DetectorConstants& c, bool enforce) {
  DetectorParams out;
  auto violate = [&](const std::string& what) { out.violations.push_back(what); };

  if (!(c.epsilon > 0 && c.epsilon < 1)) violate("constant range 0 < epsilon < 1");
  if (!(c.tau_max > 0 && c.tau_max < 1)) violate("constant range 0 < tau_max < 1");
  if (!(c.delta > 0 && c.delta < c.alpha)) violate("constant range 0 < delta < alpha");
  if (!(c.C > 60)) violate("constant range C > 60");
  if (!(c.alpha > 0.3 && c.alpha <= 1)) violate("constant range 0.3 < alpha <= 1");
  if (!(n >= 2)) violate("n >= 2");
  if (!(d >= 1)) violate("d >= 1");
  if (!(tau > 0 && tau < rho && rho < 1)) violate("0 < tau < rho < 1");

  const double log2_n = std::log2(static_cast<double>(n));
  out.sigma = 0.99 * c.epsilon * (c.alpha - c.delta) / (4.0 * c.C + 1.0);
  out.s = static_cast<std::int64_t>(std::floor(std::exp2(out.sigma * log2_n)));
  out.zeta = out.sigma / 4.0;
  out.log2_gamma = -c.epsilon * std::log2(c.tau_max) / 100000.0;
  out.gamma = std::exp2(out.log2_gamma);
  out.c1 = out.gamma;  // tau_max^(-eps/100000)
  out.c2 = (1.0 - 0.99 * c.epsilon / (4.0 * c.C + 1.0)) * (c.alpha - c.delta) / c.C;

  // assumption 1: d <= n^delta
  if (!(std::log2(static_cast<double>(d)) <= c.delta * log2_n))
    violate("assumption 1: d <= n^delta");
  // assumption 2: c1 n^-c2 <= tau <= tau_max
  if (!(tau <= c.tau_max)) violate("assumption 2: tau <= tau_max");
  if (!(std::log2(tau) >= out.log2_gamma - out.c2 * log2_n))
    violate("assumption 2: c1 * n^-c2 <= tau");
  // assumption 3: log_tau rho <= 1 - eps
  if (tau > 0 && tau < 1 && rho > 0 && rho < 1) {
    if (!(std::log2(rho) / std::log2(tau) <= 1.0 - c.epsilon))
      violate("assumption 3: log_tau rho <= 1 - epsilon");
  }

  // p: the unique positive-integer power of two in (A, 2A], where
  // A = ((1-sigma) alpha - delta) log n / (2 C log(gamma/tau))
  const double log2_ratio = out.log2_gamma - std::log2(tau);
  const double a_lo = ((1.0 - out.sigma) * c.alpha - c.delta) * log2_n /
                      (2.0 * c.C * log2_ratio);
  out.p_window_lo = a_lo;
  out.p_window_hi = 2.0 * a_lo;
  if (a_lo > 0.5) {
    std::int64_t j = static_cast<std::int64_t>(std::floor(std::log2(a_lo))) + 1;
    while (std::ldexp(1.0, static_cast<int>(j)) <= a_lo) ++j;
    while (j > 0 && std::ldexp(1.0, static_cast<int>(j - 1)) > a_lo) --j;
    if (j >= 1) out.p = std::int64_t(1) << j;
  }
  if (out.p == 0)
    violate("assumption 2: empty p window (no positive-integer power of two)");

  if (out.p > 0) {
    // D: the power of two with (1/2) d (gamma/tau)^(Cp) < D <= d (gamma/tau)^(Cp)
    const double log2_x =
        std::log2(static_cast<double>(d)) + c.C * static_cast<double>(out.p) * log2_ratio;
    out.log2_D = std::floor(log2_x);
    // required for the rectangular multiplication step: D <= 2 (n/s)^alpha
    const double log2_ns = log2_n - std::log2(static_cast<double>(out.s));
    if (!(out.log2_D <= 1.0 + c.alpha * log2_ns))
      violate("derived: D <= 2 (n/s)^alpha");
    out.log2_threshold = 2.0 * out.sigma * log2_n +
                         static_cast<double>(out.p) * (std::log2(tau) + out.log2_gamma) +
                         out.log2_D;
  }

  if (enforce && !out.violations.empty()) {
    std::string msg = "derive_params: violated:";
    for (const auto& v : out.violations) msg += " [" + v + "]";
    throw ParameterError(msg);
  }
  return out;
}

Aggregates bucket_aggregate(const std::vector<SignVector>& vectors, std::int64_t s) {
  if (s < 1) throw ParameterError("bucket_aggregate: s must be >= 1");
  Aggregates out;
  out.bucket_size = s;
  out.dim = vectors.empty() ? 0 : vectors.front().dim();
  const std::int64_t n = static_cast<std::int64_t>(vectors.size());
  out.count = (n + s - 1) / s;
  out.data.assign(static_cast<std::size_t>(out.count * out.dim), 0);
  for (std::int64_t g = 0; g < out.count; ++g) {
    const std::int64_t lo = g * s, hi = std::min(n, lo + s);
    out.ranges.emplace_back(lo, hi);
    std::int32_t* row = out.data.data() + g * out.dim;
    for (std::int64_t v = lo; v < hi; ++v) {
      if (vectors[v].dim() != out.dim)
        throw ParameterError("bucket_aggregate: mixed dimensions");
      const auto& words = vectors[v].words();
      for (std::int64_t j = 0; j < out.dim; ++j)
        row[j] += static_cast<std::int32_t>(((words[j >> 6] >> (j & 63)) & 1) * 2) - 1;
    }
  }
  return out;
}

void gemm_naive(const std::int32_t* a, const std::int32_t* b, std::int64_t m1,
                std::int64_t m2, std::int64_t dim, std::int64_t* c) {
  overflow_guard(a, b, m1, m2, dim);
  for (std::int64_t i = 0; i < m1; ++i)
    for (std::int64_t j = 0; j < m2; ++j) {
      std::int64_t acc = 0;
      for (std::int64_t k = 0; k < dim; ++k)
        acc += std::int64_t(a[i * dim + k]) * std::int64_t(b[k * m2 + j]);
      c[i * m2 + j] = acc;
    }
}

void gemm_blocked(const std::int32_t* a, const std::int32_t* b, std::int64_t m1,
                  std::int64_t m2, std::int64_t dim, std::int64_t* c, int threads) {
  overflow_guard(a, b, m1, m2, dim);
  constexpr std::int64_t kBlock = 256;
  std::fill(c, c + m1 * m2, 0);
  parallel_for(0, m1, threads, [&](std::int64_t i) {
    std::int64_t* crow = c + i * m2;
    for (std::int64_t k0 = 0; k0 < dim; k0 += kBlock) {
      const std::int64_t k1 = std::min(dim, k0 + kBlock);
      for (std::int64_t k = k0; k < k1; ++k) {
        const std::int64_t aik = a[i * dim + k];
        if (aik == 0) continue;
        const std::int32_t* brow = b + k * m2;
        for (std::int64_t j = 0; j < m2; ++j) crow[j] += aik * std::int64_t(brow[j]);
      }
    }
  });
}

std::int64_t outlier_threshold_abs(double rho, std::int64_t d) {
  const long double v = static_cast<long double>(rho) * static_cast<long double>(d);
  std::int64_t t = static_cast<std::int64_t>(ceill(v));
  while (static_cast<long double>(t) < v) ++t;
  while (t > 0 && static_cast<long double>(t - 1) >= v) --t;
  return t;
}

std::vector<OutlierPair> brute_force_pairs(const std::vector<SignVector>& X,
                                           const std::vector<SignVector>& Y,
                                           std::int64_t threshold_abs) {
  std::vector<OutlierPair> out;
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < Y.size(); ++j) {
      const std::int64_t ip = X[i].inner(Y[j]);
      if (std::abs(ip) >= threshold_abs)
        out.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(j), ip});
    }
  return out;
}

std::vector<SignVector> tensor_sample_map(const std::vector<SignVector>& v,
                                          std::int64_t out_dim, std::int64_t p,
                                          std::uint64_t seed) {
  if (out_dim < 1) throw ParameterError("tensor_sample_map: output dimension >= 1");
  if (p < 1) throw ParameterError("tensor_sample_map: p >= 1");
  if (v.empty()) return {};
  const std::int64_t d = v.front().dim();
  SplitMix64 rng(seed);
  std::vector<std::int32_t> sample(static_cast<std::size_t>(out_dim * p));
  for (auto& idx : sample) idx = static_cast<std::int32_t>(rng.below(d));
  std::vector<SignVector> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    SignVector fx(out_dim);
    for (std::int64_t j = 0; j < out_dim; ++j) {
      int prod = 1;
      for (std::int64_t t = 0; t < p; ++t) prod *= x.get(sample[j * p + t]);
      fx.set(j, prod);
    }
    out.push_back(std::move(fx));
  }
  return out;
}

namespace {

std::vector<SignVector> apply_mode(const std::vector<SignVector>& v, const RunOptions& opt) {
  switch (opt.mode) {
    case AmpMode::identity:
      return v;
    case AmpMode::toy:
    case AmpMode::explicit_amp: {
      if (!opt.schedule)
        throw ParameterError("detect_outliers: amplifier mode needs a schedule");
      std::vector<SignVector> out(v.size());
      for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = amplifier::amplify(v[i], *opt.schedule, opt.memory_cap_log2);
      return out;
    }
    case AmpMode::tensor_sample:
      return tensor_sample_map(v, opt.ts_dim, opt.ts_p, opt.ts_seed);
  }
  throw ParameterError("detect_outliers: unknown amplifier mode");
}

std::string mode_name(AmpMode m) {
  switch (m) {
    case AmpMode::identity: return "identity";
    case AmpMode::toy: return "toy-amplifier";
    case AmpMode::explicit_amp: return "explicit-amplifier";
    case AmpMode::tensor_sample: return "tensor-sample";
  }
  return "?";
}

}  // namespace

double detection_threshold(double n2sigma, double tau, double gamma, std::int64_t p,
                           std::int64_t dim) {
  long double thr = static_cast<long double>(n2sigma);
  thr *= powl(static_cast<long double>(tau) * static_cast<long double>(gamma),
              static_cast<long double>(p));
  thr *= static_cast<long double>(dim);
  // upward-directed: inflate past the worst accumulated rounding, including
  // the final narrowing back to double
  thr *= 1.0L + 16.0L * static_cast<long double>(DBL_EPSILON);
  return static_cast<double>(thr);
}

DetectionReport detect_amplified(const std::vector<SignVector>& amp_x,
                                 const std::vector<SignVector>& amp_y,
                                 const std::vector<SignVector>& X,
                                 const std::vector<SignVector>& Y, double rho,
                                 const RunOptions& opt, const std::string& mode) {
  if (amp_x.size() != X.size() || amp_y.size() != Y.size())
    throw ParameterError("detect_amplified: amplified/original size mismatch");
  if (X.empty() || Y.empty()) throw ParameterError("detect_amplified: empty input");
  const std::int64_t dim = amp_x.front().dim();
  const std::int64_t d0 = X.front().dim();
  for (const auto& v : amp_x)
    if (v.dim() != dim) throw ParameterError("detect_amplified: mixed amplified dimensions");
  for (const auto& v : amp_y)
    if (v.dim() != dim) throw ParameterError("detect_amplified: mixed amplified dimensions");

  DetectionReport rep;
  rep.s = opt.s;
  rep.mode = mode;
  rep.ts_seed = opt.mode == AmpMode::tensor_sample ? opt.ts_seed : 0;
  rep.amplified_dim = dim;
  rep.rho_threshold_abs = outlier_threshold_abs(rho, d0);
  const double n2sigma = opt.n2sigma ? *opt.n2sigma
                                     : static_cast<double>(opt.s) * static_cast<double>(opt.s);
  rep.threshold = detection_threshold(n2sigma, opt.tau, opt.gamma, opt.p, dim);

  // step 2: bucket and aggregate. Size-1 buckets are the +-1 vectors
  // themselves, so the aggregate arrays are skipped and step 3 runs on
  // bit-packed popcounts instead of the integer gemm.
  Aggregates ax, ay;
  if (opt.s == 1) {
    ax.bucket_size = ay.bucket_size = 1;
    ax.dim = ay.dim = dim;
    ax.count = static_cast<std::int64_t>(amp_x.size());
    ay.count = static_cast<std::int64_t>(amp_y.size());
    for (std::int64_t i = 0; i < ax.count; ++i) ax.ranges.emplace_back(i, i + 1);
    for (std::int64_t j = 0; j < ay.count; ++j) ay.ranges.emplace_back(j, j + 1);
  } else {
    ax = bucket_aggregate(amp_x, opt.s);
    ay = bucket_aggregate(amp_y, opt.s);
  }
  rep.tiles_total = ax.count * ay.count;

  // step 3: all bucket-pair inner products
  std::vector<std::int64_t> z(static_cast<std::size_t>(ax.count * ay.count));
  if (opt.s == 1) {
    parallel_for(0, ax.count, opt.threads, [&](std::int64_t i) {
      for (std::int64_t j = 0; j < ay.count; ++j)
        z[i * ay.count + j] = amp_x[i].inner(amp_y[j]);
    });
  } else {
    std::vector<std::int32_t> bt(static_cast<std::size_t>(ay.count * dim));
    for (std::int64_t j = 0; j < ay.count; ++j)  // transpose to dim x count
      for (std::int64_t k = 0; k < dim; ++k)
        bt[k * ay.count + j] = ay.data[j * dim + k];
    gemm_blocked(ax.data.data(), bt.data(), ax.count, ay.count, dim, z.data(),
                 opt.threads);
  }

  // step 4: scan tiles, brute-force the flagged ones in the original dimension
  const std::int64_t tiles = ax.count * ay.count;
  std::vector<std::vector<OutlierPair>> per_tile(static_cast<std::size_t>(tiles));
  std::vector<std::uint8_t> flagged(static_cast<std::size_t>(tiles), 0);
  std::vector<std::int64_t> scanned(static_cast<std::size_t>(tiles), 0);
  parallel_for(0, tiles, opt.threads, [&](std::int64_t t) {
    // the detection inequality, on absolute value so that sign-flipped
    // outliers surface in the odd-p passthrough modes as well
    if (!(std::abs(static_cast<double>(z[t])) > rep.threshold)) return;
    flagged[t] = 1;
    const std::int64_t bi = t / ay.count, bj = t % ay.count;
    const auto [xlo, xhi] = ax.ranges[bi];
    const auto [ylo, yhi] = ay.ranges[bj];
    for (std::int64_t xi = xlo; xi < xhi; ++xi)
      for (std::int64_t yj = ylo; yj < yhi; ++yj) {
        ++scanned[t];
        const std::int64_t ip = X[xi].inner(Y[yj]);
        if (std::abs(ip) >= rep.rho_threshold_abs) per_tile[t].push_back({xi, yj, ip});
      }
  });
  for (std::int64_t t = 0; t < tiles; ++t) {
    rep.flagged_tiles += flagged[t];
    rep.pairs_scanned += scanned[t];
    for (const auto& pr : per_tile[t]) rep.outliers.push_back(pr);
  }
  std::sort(rep.outliers.begin(), rep.outliers.end(), [](const auto& a, const auto& b) {
    return a.x_index != b.x_index ? a.x_index < b.x_index : a.y_index < b.y_index;
  });
  return rep;
}

DetectionReport detect_outliers(const std::vector<SignVector>& X,
                                const std::vector<SignVector>& Y, double rho,
                                const RunOptions& opt) {
  std::vector<SignVector> amp_x = apply_mode(X, opt);
  std::vector<SignVector> amp_y = apply_mode(Y, opt);
  return detect_amplified(amp_x, amp_y, X, Y, rho, opt, mode_name(opt.mode));
}

}  // namespace corrkit::detector

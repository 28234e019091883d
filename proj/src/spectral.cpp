#include "corrkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "corrkit/errors.hpp"
#include "corrkit/prng.hpp"

namespace corrkit::rotgraph {

namespace {

constexpr std::int64_t kDenseCap = std::int64_t(1) << 22;
constexpr std::int64_t kIterationCap = 100000;

void project_out_uniform(std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

SpectralEstimate second_eigenvalue(const GraphPtr& g, double tol) {
  if (g->vertex_count() * g->degree() > kDenseCap)
    throw CapacityError("second_eigenvalue: D*Delta exceeds 2^22 for " + g->describe());
  const std::uint64_t D = static_cast<std::uint64_t>(g->vertex_count());
  const std::uint64_t delta = static_cast<std::uint64_t>(g->degree());

  if (D == 1) return {0.0, 0, 0.0};

  // one destination per edge slot (u,i)
  std::vector<std::uint32_t> dst(D * delta);
  for (std::uint64_t u = 0; u < D; ++u)
    for (std::uint64_t i = 0; i < delta; ++i)
      dst[u * delta + i] = static_cast<std::uint32_t>(g->rot_vertex64(u, i));

  const double inv_delta = 1.0 / static_cast<double>(delta);
  auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::uint64_t u = 0; u < D; ++u) {
      const double zu = in[u];
      if (zu == 0.0) continue;
      const std::uint32_t* row = &dst[u * delta];
      for (std::uint64_t i = 0; i < delta; ++i) out[row[i]] += zu;
    }
    for (double& x : out) x *= inv_delta;
    project_out_uniform(out);
  };

  SplitMix64 rng(0x5EEDull ^ D);
  std::vector<double> z(D), w(D), bz(D);
  for (auto& x : z) x = rng.uniform01() - 0.5;
  project_out_uniform(z);
  double nz = norm(z);
  if (nz == 0.0) return {0.0, 0, 0.0};
  for (auto& x : z) x /= nz;

  double theta = 0.0, residual = 0.0;
  for (std::int64_t it = 1; it <= kIterationCap; ++it) {
    apply(z, w);
    apply(w, bz);  // bz = B^2 z, eigenvalues lambda^2 >= 0
    theta = 0.0;
    for (std::uint64_t u = 0; u < D; ++u) theta += z[u] * bz[u];
    double r2 = 0.0;
    for (std::uint64_t u = 0; u < D; ++u) {
      const double e = bz[u] - theta * z[u];
      r2 += e * e;
    }
    residual = std::sqrt(r2);
    const double lam = std::sqrt(theta > 0.0 ? theta : 0.0);
    if (residual <= std::max(tol * lam, tol * tol))
      return {lam, it, residual};
    const double nb = norm(bz);
    if (nb < 1e-300) return {0.0, it, residual};  // operator annihilates the complement
    for (std::uint64_t u = 0; u < D; ++u) z[u] = bz[u] / nb;
  }
  throw ConvergenceError("second_eigenvalue: no convergence for " + g->describe() +
                         " after 100000 iterations, residual " + std::to_string(residual));
}

}  // namespace corrkit::rotgraph

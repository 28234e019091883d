#include "corrkit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "corrkit/errors.hpp"

namespace corrkit::bounds {

namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

BigRat rat_pow(BigRat base, std::int64_t e) {
  BigRat r = 1;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

BigInt ceil_rat(const BigRat& r) {
  const BigInt num = numerator(r), den = denominator(r);
  if (num <= 0) return num / den;  // not used on that side here
  return (num + den - 1) / den;
}

void check_common(const DimQuery& q) {
  if (q.d < 1) throw ParameterError("bounds: d must be >= 1");
  if (!(q.tau > 0 && q.tau < 1)) throw ParameterError("bounds: tau must lie in (0,1)");
  if (!(q.gamma > 1)) throw ParameterError("bounds: gamma must exceed 1");
}

struct RatInterval {
  BigRat lo, hi;
  bool point = false;
};

// sqrt(g) for rational g > 0 within 2^-prec, exact when g is a perfect square
RatInterval sqrt_interval(const BigRat& g, int prec) {
  const BigInt n = numerator(g), m = denominator(g);
  const BigInt scaled = n * m * pow2(2 * prec);
  const BigInt t = isqrt(scaled);
  RatInterval out;
  if (t * t == scaled) {
    out.lo = out.hi = BigRat(t, m * pow2(prec));
    out.point = true;
  } else {
    out.lo = BigRat(t, m * pow2(prec));
    out.hi = BigRat(t + 1, m * pow2(prec));
  }
  return out;
}

}  // namespace

BigInt existence_dim(const DimQuery& q) {
  check_common(q);
  if (q.p < 1) throw ParameterError("bounds: p must be >= 1");
  const BigRat gp = rat_pow(q.gamma, q.p);
  const BigRat denom = (gp - 1) * (gp - 1);
  const BigRat value = BigRat(3) * BigRat(q.d) * rat_pow(q.gamma / q.tau, 2 * q.p) / denom;
  return ceil_rat(value);
}

ExplicitDim explicit_dim(const DimQuery& q) {
  check_common(q);
  if (!q.ell || *q.ell < 1)
    throw ParameterError("bounds: explicit bound needs ell >= 1 (p = 2^ell even)");
  const int ell = *q.ell;
  const std::int64_t p = std::int64_t(1) << ell;
  const BigRat b_ratio = q.gamma / q.tau;

  // rational parts of both right-hand sides
  const BigRat main_rat = BigRat(q.d) * rat_pow(b_ratio, 60 * p);
  const BigRat sharp_rat = BigRat(q.d) * b_ratio * rat_pow(q.gamma, 60 * p) /
                           rat_pow(q.tau, 40 * p) * rat_pow(q.tau, 20) /
                           rat_pow(q.gamma, 30) / 256;

  ExplicitDim out;
  for (int prec = 64;; prec *= 2) {
    if (prec > (1 << 20))
      throw ConvergenceError("explicit_dim: interval refinement failed to separate");
    const RatInterval s = sqrt_interval(q.gamma, prec);
    if (s.lo <= 1) continue;  // too coarse to certify gamma^(1/2) > 1
    // A = 2^10 / (1 - gamma^-1/2); decreasing in gamma^-1/2's upper bound
    const BigRat a_lo = BigRat(1024) / (1 - BigRat(1) / s.lo);
    const BigRat a_hi = BigRat(1024) / (1 - BigRat(1) / s.hi);
    const std::int64_t exp_a = 20 * ell + 1;
    const BigRat main_lo = main_rat * rat_pow(a_lo, exp_a);
    const BigRat main_hi = main_rat * rat_pow(a_hi, exp_a);
    const BigRat sharp_lo = sharp_rat * rat_pow(a_lo, exp_a);
    const BigRat sharp_hi = sharp_rat * rat_pow(a_hi, exp_a);
    const std::int64_t k1 = ceil_log2(main_lo), k2 = ceil_log2(main_hi);
    const std::int64_t s1 = ceil_log2(sharp_lo), s2 = ceil_log2(sharp_hi);
    if (s.point || (k1 == k2 && s1 == s2)) {
      out.K = k2;
      out.K_sharp = s2;
      return out;
    }
  }
}

LowerDim lower_dim(const DimQuery& q) {
  check_common(q);
  if (q.p < 1) throw ParameterError("bounds: p must be >= 1");
  LowerDim out;
  const BigRat gt = q.gamma * q.tau;
  if (!(rat_pow(gt, q.p) <= BigRat(1, 100))) {
    out.violated = "(gamma*tau)^p <= 1/100";
    return out;
  }
  // p <= (log e) tau^2 d / (8 log(1/(gamma tau))) = tau^2 d / (8 ln(1/(gamma tau)))
  const double gt_d = static_cast<double>(gt);
  const double tau_d = static_cast<double>(q.tau);
  const double cap = tau_d * tau_d * static_cast<double>(q.d) / (8.0 * std::log(1.0 / gt_d));
  if (static_cast<double>(q.p) > cap) {
    out.violated = "p <= (log e) tau^2 d / (8 log(1/(gamma tau)))";
    return out;
  }
  out.applicable = true;
  out.bound = ceil_rat(rat_pow(1 / gt, q.p) / 5);
  return out;
}

double hoeffding_tail(double count, double deviation, double range_width) {
  if (!(deviation > 0)) throw ParameterError("hoeffding_tail: deviation must be positive");
  if (!(range_width > 0)) throw ParameterError("hoeffding_tail: range width must be positive");
  if (!(count >= 1)) throw ParameterError("hoeffding_tail: need at least one variable");
  const double v = std::exp(-2.0 * deviation * deviation / (count * range_width * range_width));
  // exp underflows to 0 for extreme deviations; the smallest positive double
  // is still a valid upper bound and keeps the value in (0,1]
  return std::max(v, std::numeric_limits<double>::denorm_min());
}

}  // namespace corrkit::bounds

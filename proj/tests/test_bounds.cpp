#include <doctest.h>

#include <cmath>

#include "corrkit/bounds.hpp"
#include "corrkit/errors.hpp"

using namespace corrkit;
using namespace corrkit::bounds;

namespace {

DimQuery make(std::int64_t d, std::int64_t p, const BigRat& tau, const BigRat& gamma,
              std::optional<int> ell = std::nullopt) {
  DimQuery q;
  q.d = d;
  q.p = p;
  q.tau = tau;
  q.gamma = gamma;
  q.ell = ell;
  return q;
}

}  // namespace

TEST_CASE("existence_dim worked value: d=100, p=2, tau=1/2, gamma=2") {
  // 3 * 100 * (2^2-1)^-2 * (2/(1/2))^4 = 300 * 256 / 9 = 8533.33..., ceil 8534
  const BigInt got = existence_dim(make(100, 2, BigRat(1, 2), BigRat(2)));
  CHECK(got == 8534);
  // independent recomputation straight from the pieces
  const BigRat direct = BigRat(300) * BigRat(256) / BigRat(9);
  const BigInt want = (boost::multiprecision::numerator(direct) +
                       boost::multiprecision::denominator(direct) - 1) /
                      boost::multiprecision::denominator(direct);
  CHECK(got == want);
}

TEST_CASE("existence_dim: doubling p multiplies by (gamma/tau)^(2p) and more") {
  // the (gamma/tau)^(2p) factor squares exactly when p doubles
  const BigRat tau(1, 4), gamma(3, 2);
  const BigRat ratio = gamma / tau;
  BigRat f1 = 1, f2 = 1;
  for (int i = 0; i < 2 * 4; ++i) f1 *= ratio;
  for (int i = 0; i < 2 * 8; ++i) f2 *= ratio;
  CHECK(f2 == f1 * f1);
}

TEST_CASE("explicit_dim worked value: d=2, tau=1/2, gamma=4, ell=1 gives 2^592") {
  const auto got = explicit_dim(make(2, 2, BigRat(1, 2), BigRat(4), 1));
  // logarithmic accounting: 1 + 21*11 + 120*3 = 592
  CHECK(got.K == 592);
  CHECK(got.K_sharp <= got.K);  // the sharper bound never exceeds the main one
}

TEST_CASE("explicit_dim rejects ell = 0") {
  CHECK_THROWS_AS(explicit_dim(make(2, 1, BigRat(1, 2), BigRat(4), 0)), ParameterError);
  CHECK_THROWS_AS(explicit_dim(make(2, 1, BigRat(1, 2), BigRat(4))), ParameterError);
}

TEST_CASE("explicit_dim handles irrational gamma^(1/2) by interval refinement") {
  // gamma = 2: sqrt irrational; result must be stable and consistent with a
  // floating-point cross-check to well under one binade
  const auto got = explicit_dim(make(10, 2, BigRat(1, 10), BigRat(2), 1));
  const double log2_a = 10.0 - std::log2(1.0 - 1.0 / std::sqrt(2.0));
  const double log2_rhs = std::log2(10.0) + 21.0 * log2_a + 120.0 * std::log2(20.0);
  CHECK(std::abs(static_cast<double>(got.K) - std::ceil(log2_rhs)) <= 1.0);
  CHECK(explicit_dim(make(10, 2, BigRat(1, 10), BigRat(2), 1)).K == got.K);
}

TEST_CASE("lower_dim worked value and guard cases") {
  // tau=0.05, gamma=2, p=2, d=20000: (gamma tau)^2 = 0.01 <= 1/100,
  // p-cap ~ 2.71 >= 2, bound = ceil(100/5) = 20
  const auto got = lower_dim(make(20000, 2, BigRat(1, 20), BigRat(2)));
  CHECK(got.applicable);
  CHECK(got.bound == 20);

  // (gamma tau)^p = 0.02 > 1/100: condition 1 named
  const auto na = lower_dim(make(20000, 1, BigRat(1, 100), BigRat(2)));
  CHECK_FALSE(na.applicable);
  CHECK(na.violated.find("1/100") != std::string::npos);

  // p too large for the rank argument: condition 2 named
  const auto na2 = lower_dim(make(100, 8, BigRat(1, 20), BigRat(2)));
  CHECK_FALSE(na2.applicable);
  CHECK(na2.violated.find("log") != std::string::npos);
}

TEST_CASE("dominance: explicit >= existence >= lower across the grid") {
  const BigRat gammas[] = {BigRat(11, 10), BigRat(5, 4),  BigRat(3, 2),
                         BigRat(2),      BigRat(3),     BigRat(4)};
  const BigRat taus[] = {BigRat(1, 20), BigRat(1, 10), BigRat(3, 10), BigRat(1, 2),
                         BigRat(7, 10), BigRat(9, 10)};
  int points = 0, lower_applicable = 0;
  for (const auto& g : gammas)
    for (const auto& t : taus)
      for (int ell : {1, 2, 3}) {
        const std::int64_t p = std::int64_t(1) << ell;
        // d large enough that the lower bound's p-cap admits small p
        auto q = make(20000, p, t, g, ell);
        const BigInt exist = existence_dim(q);
        const auto expl = explicit_dim(q);
        // 2^K >= existence bound: constructive never beats nonconstructive
        CHECK(pow2(expl.K) >= exist);
        const auto low = lower_dim(q);
        if (low.applicable) {
          ++lower_applicable;
          CHECK(exist >= low.bound);
        }
        ++points;
      }
  CHECK(points == 108);
  CHECK(lower_applicable >= 5);
}

TEST_CASE("hoeffding_tail worked values") {
  // D=100, width=2, c=20: exp(-2*400/(100*4)) = e^-2
  CHECK(hoeffding_tail(100, 20, 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  // c -> 0+ drives the bound to 1
  CHECK(hoeffding_tail(100, 1e-9, 2) == doctest::Approx(1.0));
  // doubling c multiplies the exponent magnitude by 4
  const double e1 = -std::log(hoeffding_tail(50, 10, 2));
  const double e2 = -std::log(hoeffding_tail(50, 20, 2));
  CHECK(e2 == doctest::Approx(4.0 * e1).epsilon(1e-9));
  CHECK(hoeffding_tail(100, 1000, 2) > 0.0);
  CHECK(hoeffding_tail(100, 1000, 2) <= 1.0);
  CHECK_THROWS_AS(hoeffding_tail(100, 0, 2), ParameterError);
}

TEST_CASE("dimension values are exact integers, never floats") {
  // a case where naive double arithmetic would be off: large exponents
  auto q = make(1000, 16, BigRat(1, 30), BigRat(101, 100), 4);
  const BigInt e1 = existence_dim(q);
  const BigInt e2 = existence_dim(q);
  CHECK(e1 == e2);
  CHECK(e1 > 0);
  // ceiling is genuine: value-1 must be strictly below the real bound
  const BigRat gp = [&] {
    BigRat r = 1;
    for (int i = 0; i < 16; ++i) r *= q.gamma;
    return r;
  }();
  BigRat ratio_pow = 1;
  for (int i = 0; i < 32; ++i) ratio_pow *= q.gamma / q.tau;
  const BigRat value = BigRat(3) * BigRat(q.d) * ratio_pow / ((gp - 1) * (gp - 1));
  CHECK(BigRat(e1) >= value);
  CHECK(BigRat(e1 - 1) < value);
}

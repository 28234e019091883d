#include <doctest.h>

#include <cmath>
#include <vector>

#include "corrkit/amplifier.hpp"
#include "corrkit/bounds.hpp"
#include "corrkit/errors.hpp"
#include "corrkit/spectral.hpp"
#include "helpers.hpp"

using namespace corrkit;
using namespace corrkit::amplifier;

namespace {

AmplifierParams toy_params(std::int64_t d, int ell, double tau, double gamma,
                           std::vector<ToyLevelSpec> levels,
                           std::optional<std::int64_t> k = std::nullopt) {
  AmplifierParams p;
  p.d = d;
  p.ell = ell;
  p.tau = tau;
  p.gamma = gamma;
  p.mode = Mode::toy;
  p.toy_levels = std::move(levels);
  p.toy_k = k;
  return p;
}

ToyLevelSpec loops(std::int64_t copies = 1) {
  ToyLevelSpec s;
  s.kind = ToyGraphKind::complete_loops;
  s.copies = copies;
  return s;
}

ToyLevelSpec rvw_level(int b, std::uint64_t d_poly) {
  ToyLevelSpec s;
  s.kind = ToyGraphKind::base_rvw;
  s.b = b;
  s.d_poly = d_poly;
  return s;
}

// exact relative inner product as a rational
BigRat rel_inner(const SignVector& x, const SignVector& y) {
  return BigRat(x.inner(y), x.dim());
}

BigRat rat_pow(BigRat b, int e) {
  BigRat r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

TEST_CASE("copy_truncate: definitional examples") {
  SignVector x(3);
  x.set(0, +1); x.set(1, -1); x.set(2, +1);
  SignVector out = copy_truncate(x, 3);
  const int want[] = {+1, -1, +1, +1, -1, +1, +1, -1};
  for (int j = 0; j < 8; ++j) CHECK(out.get(j) == want[j]);

  SplitMix64 rng(3);
  SignVector y = SignVector::random(16, rng);
  CHECK(copy_truncate(y, 4) == y);  // exact fit
  CHECK_THROWS_AS(copy_truncate(y, 3), ParameterError);
}

TEST_CASE("copy_truncate: relative inner products distort by at most gamma0") {
  // 2^k >= 2 d tau0^-1 (1-gamma0^-1)^-1 with tau0 = 1/2, gamma0 = 2 -> 8d
  const std::int64_t d = 60;
  const std::int64_t k = 9;  // 512 >= 480
  const BigRat tau0(1, 2), gamma0(2);
  SplitMix64 rng(0xC0FFEE);
  int tested = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    SignVector x = SignVector::random(d, rng);
    const std::int64_t flips = static_cast<std::int64_t>(rng.below(d / 4 + 1));
    SignVector y = testutil::flipped_copy(x, flips, rng);
    if (rng.coin()) {  // exercise the negative side as well
      for (std::int64_t j = 0; j < d; ++j) y.flip(j);
    }
    const BigRat nu = rel_inner(x, y);
    if (abs(nu) < tau0) continue;
    ++tested;
    const BigRat nu_hat = BigRat(copy_truncate(x, k).inner(copy_truncate(y, k)), std::int64_t(1) << k);
    CHECK(abs(nu_hat) >= abs(nu) / gamma0);
    CHECK(abs(nu_hat) <= abs(nu) * gamma0);
    CHECK((nu > 0) == (nu_hat > 0));
  }
  CHECK(tested >= 500);
}

TEST_CASE("approx_square: complete graph with self-loops is the exact tensor square") {
  // lambda = 0: <x^G, y^G> * D / Delta = <x,y>^2; e.g. x=(+,-), y=(+,+) -> 0
  SignVector x(2), y(2);
  x.set(0, +1); x.set(1, -1);
  y.set(0, +1); y.set(1, +1);
  auto g = rotgraph::complete_with_loops(2);
  SignVector xg = approx_square(x, g), yg = approx_square(y, g);
  CHECK(xg.dim() == 4);  // Delta * D
  CHECK(xg.inner(yg) * 2 == 2 * x.inner(y) * x.inner(y));

  SplitMix64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    SignVector a = SignVector::random(64, rng), b = SignVector::random(64, rng);
    auto k = rotgraph::complete_with_loops(64);
    const std::int64_t ip = a.inner(b);
    CHECK(approx_square(a, k).inner(approx_square(b, k)) == ip * ip);
  }
}

TEST_CASE("approx_square: additive control 2 lambda_hat through measured toy graphs") {
  struct Case { rotgraph::GraphPtr g; };
  std::vector<rotgraph::GraphPtr> graphs = {
      rotgraph::cycle(3),
      rotgraph::cycle(4),
      rotgraph::cycle(6),
      rotgraph::complete_no_loops(9),
      rotgraph::hypercube(3),
      rotgraph::base_graph(gf2k::find_irreducible(2), 1),
      rotgraph::base_graph(gf2k::find_irreducible(2), 2),
      rotgraph::square(rotgraph::cycle(5)),
  };
  SplitMix64 rng(0xAB);
  for (const auto& g : graphs) {
    const double lam = rotgraph::second_eigenvalue(g).lambda_hat;
    const std::int64_t D = static_cast<std::int64_t>(g->vertex_count());
    const std::int64_t delta = static_cast<std::int64_t>(g->degree());
    for (int trial = 0; trial < 125; ++trial) {
      SignVector x = SignVector::random(D, rng), y = SignVector::random(D, rng);
      const std::int64_t ip = x.inner(y);
      const std::int64_t ip2 = approx_square(x, g).inner(approx_square(y, g));
      // |nu' - nu^2| <= 2 lambda_hat, in integers: |ip2 D - Delta ip^2| <= 2 lam Delta D^2
      const double lhs = std::abs(static_cast<double>(ip2 * D - delta * ip * ip));
      const double rhs = 2.0 * lam * static_cast<double>(delta) * static_cast<double>(D) *
                         static_cast<double>(D);
      CHECK(lhs <= rhs + 1e-6 * static_cast<double>(delta * D * D));
    }
  }
}

TEST_CASE("level thresholds follow the squaring recurrence tau_(i+1) = tau_i^2 / gamma0") {
  // direct evaluation at tau_0 = 1/2, gamma_0 = 2: tau_1 = 1/8, tau_2 = 1/128
  double tau_i = 0.5;
  const double gamma0 = 2.0;
  tau_i = tau_i * tau_i / gamma0;
  CHECK(tau_i == doctest::Approx(1.0 / 8));
  tau_i = tau_i * tau_i / gamma0;
  CHECK(tau_i == doctest::Approx(1.0 / 128));

  // schedules apply the same recurrence from tau0 = tau/gamma
  auto s = derive_schedule(toy_params(16, 3, 0.5, 4.0, {loops(), loops(), loops()}));
  CHECK(s.gamma0 == doctest::Approx(2.0));
  CHECK(s.tau0 == doctest::Approx(0.125));
  CHECK(s.levels[0].tau_i == doctest::Approx(0.125));
  CHECK(s.levels[1].tau_i == doctest::Approx(0.125 * 0.125 / 2));
  const double t1 = 0.125 * 0.125 / 2;
  CHECK(s.levels[2].tau_i == doctest::Approx(t1 * t1 / 2));
}

TEST_CASE("theoretical schedule: the worked explicit instance d=2, tau=1/2, gamma=4, ell=1") {
  AmplifierParams p;
  p.d = 2;
  p.ell = 1;
  p.tau = 0.5;
  p.gamma = 4.0;
  p.mode = Mode::theoretical;
  p.K = 592;
  auto s = derive_schedule(p);
  CHECK(s.k == 6);  // 2^k >= 2*2*2*8 = 64
  REQUIRE(s.levels.size() == 1);
  CHECK(s.levels[0].b_i == 12);  // ceil log2(32 * 2 * 64) = 12
  CHECK(s.levels[0].t_i == 1);
  CHECK(s.levels[0].D_i == pow2(192));
  CHECK(s.levels[0].Delta_i == pow2(48));
  CHECK(s.d_ell == pow2(240));
  CHECK(s.levels[0].degree_bound_ok);

  p.K = 591;  // below the output-dimension bound
  CHECK_THROWS_AS(derive_schedule(p), ParameterError);

  // dimension ledger: d_out = Delta_i D_i <= Delta_i^5 d_in
  auto& lv = s.levels[0];
  CHECK(lv.d_out == lv.Delta_i * lv.D_i);
  BigInt cap = lv.Delta_i * lv.Delta_i * lv.Delta_i * lv.Delta_i * lv.Delta_i * lv.d_in;
  CHECK(lv.d_out <= cap);
}

TEST_CASE("theoretical schedule: degree floor selects b_i = 10") {
  AmplifierParams p;
  p.d = 4;
  p.ell = 1;
  p.tau = 0.7;
  p.gamma = 2.25;  // gamma0 = 1.5, tau0 = 0.7/2.25 = 0.3111
  p.mode = Mode::theoretical;
  bounds::DimQuery q;
  q.d = p.d;
  q.tau = BigRat(p.tau);
  q.gamma = BigRat(p.gamma);
  q.ell = 1;
  p.K = bounds::explicit_dim(q).K;
  auto s = derive_schedule(p);
  CHECK(s.levels[0].b_i == 10);  // 32*3/tau0^2 = 992 < 1024
}

TEST_CASE("theoretical amplify_coord works on 2^592-dimensional outputs") {
  AmplifierParams p;
  p.d = 2;
  p.ell = 1;
  p.tau = 0.5;
  p.gamma = 4.0;
  p.mode = Mode::theoretical;
  p.K = 592;
  auto s = derive_schedule(p);

  SignVector x(2);
  x.set(0, +1);
  x.set(1, -1);
  CHECK_THROWS_AS(amplify(x, s), CapacityError);  // directs callers to amplify_coord

  SplitMix64 rng(42);
  CoordStats stats;
  for (int t = 0; t < 25; ++t) {
    BigInt j = 0;
    for (int w = 0; w < 10; ++w) j |= BigInt(rng.next()) << (64 * w);
    j %= pow2(592);
    const int v1 = amplify_coord(x, s, j, &stats);
    CHECK((v1 == 1 || v1 == -1));
    CHECK(stats.input_touches <= 2);  // 2^ell
    CHECK(stats.rot_evals[0] <= 1);   // 2^(ell-1-0)
    CHECK(amplify_coord(x, s, j) == v1);  // deterministic
  }
  CHECK_THROWS_AS(amplify_coord(x, s, pow2(592)), ParameterError);
}

TEST_CASE("amplify: identities on complete-graph schedules") {
  auto s = derive_schedule(toy_params(16, 1, 0.5, 1.2, {loops()}));
  CHECK(s.d_ell == 256);
  CHECK(s.K == 8);
  SplitMix64 rng(9);
  for (int t = 0; t < 30; ++t) {
    SignVector x = SignVector::random(16, rng), y = SignVector::random(16, rng);
    SignVector fx = amplify(x, s), fy = amplify(y, s);
    CHECK(fx.dim() == 256);
    // <f(x),f(y)> / 2^K = (<x,y>/2^k)^2 exactly when lambda = 0
    CHECK(BigRat(fx.inner(fy), 256) == rat_pow(BigRat(x.inner(y), 16), 2));
    CHECK(fx.inner(fx) == 256);  // x = y: every coordinate is +-1 squared
    // exact agreement with the non-materialized pair path
    CHECK(amplified_inner_product(x, y, s) == BigRat(fx.inner(fy), 256));
  }
}

TEST_CASE("amplify: final padding by index mod d_ell") {
  auto params = toy_params(16, 1, 0.5, 1.2, {loops()});
  params.K = 10;  // pad 256 -> 1024: every coordinate appears 4 times
  auto s = derive_schedule(params);
  SplitMix64 rng(11);
  SignVector x = SignVector::random(16, rng), y = SignVector::random(16, rng);
  SignVector fx = amplify(x, s);
  CHECK(fx.dim() == 1024);
  for (std::int64_t j = 0; j < 1024; ++j) CHECK(fx.get(j) == fx.get(j % 256));
  // relative inner products are unchanged by exact padding
  CHECK(BigRat(fx.inner(amplify(y, s)), 1024) == amplified_inner_product(x, y, s));
}

TEST_CASE("amplify_coord agrees with materialized amplify everywhere (2^K = 2^16)") {
  auto s = derive_schedule(toy_params(16, 2, 0.5, 1.2, {loops(), loops()}));
  CHECK(s.d_ell == pow2(16));
  SplitMix64 rng(13);
  SignVector x = SignVector::random(16, rng);
  SignVector fx = amplify(x, s);
  CoordStats stats;
  for (std::int64_t j = 0; j < (1 << 16); ++j) {
    CHECK(amplify_coord(x, s, BigInt(j), &stats) == fx.get(j));
    CHECK(stats.input_touches <= 4);
    CHECK(stats.rot_evals[0] <= 2);
    CHECK(stats.rot_evals[1] <= 1);
  }
}

TEST_CASE("amplify_coord: coordinate 0 of a complete-loops schedule is +1") {
  // coordinate 0 is x0(0) * x0(Rot(0,0).vertex) = x(0)^2
  auto s = derive_schedule(toy_params(8, 1, 0.5, 1.2, {loops()}));
  SplitMix64 rng(17);
  for (int t = 0; t < 10; ++t) {
    SignVector x = SignVector::random(8, rng);
    CHECK(amplify_coord(x, s, BigInt(0)) == 1);
    // coordinate (u=0, lab=1): x(0) * x(1)
    CHECK(amplify_coord(x, s, BigInt(1)) == x.get(0) * x.get(1));
  }
}

TEST_CASE("squaring window bounds on ell=2 toy schedules") {
  // nu_0^(2^ell) gamma0^-(2^ell - 1) <= nu_ell <= nu_0^(2^ell) gamma0^(2^ell - 1)
  // whenever |nu_0| >= tau0, on an exact-squaring schedule (trivially) and on
  // a measured base-graph schedule below
  auto s = derive_schedule(toy_params(256, 2, 0.5, 1.44, {loops(), loops()}));
  SplitMix64 rng(19);
  const BigRat gamma0 = BigRat(12, 10);
  int tested = 0;
  for (int t = 0; t < 200; ++t) {
    SignVector x = SignVector::random(256, rng);
    SignVector y = testutil::flipped_copy(x, rng.below(129), rng);
    const BigRat nu0 = rel_inner(x, y);
    if (abs(nu0) < BigRat(static_cast<std::int64_t>(s.tau0 * 1000000) + 1, 1000000)) continue;
    ++tested;
    const BigRat nu2 = amplified_inner_product(x, y, s);
    const BigRat nu0_4 = rat_pow(nu0, 4);
    CHECK(nu2 >= nu0_4 / rat_pow(gamma0, 3));
    CHECK(nu2 <= nu0_4 * rat_pow(gamma0, 3));
    CHECK(nu2 > 0);
  }
  CHECK(tested >= 100);
}

TEST_CASE("definition conformance: measured base-graph level, ell = 1") {
  // level 0: affine base over GF(32), D = Delta = 1024, measured lambda <= 1/32;
  // tau = 0.875, gamma = 1.5625 make the measured degree bound hold
  auto s = derive_schedule(toy_params(1024, 1, 0.875, 1.5625, {rvw_level(5, 1)}));
  REQUIRE(s.toy_verified());
  CHECK(s.levels[0].lambda_hat <= 1.0 / 32 + 1e-9);

  const BigRat tau = BigRat(0.875), gamma = BigRat(1.5625);
  SplitMix64 rng(23);
  int below = 0, above = 0;
  for (int t = 0; t < 300; ++t) {
    SignVector x = SignVector::random(1024, rng);
    // alternate full-range and near-copy flips so both branches get exercised
    const std::int64_t flips = t % 2 == 0 ? rng.below(80) : rng.below(1025);
    SignVector y = testutil::flipped_copy(x, flips, rng);
    const BigRat nu = rel_inner(x, y);
    const BigRat phi = amplified_inner_product(x, y, s);
    if (abs(nu) < tau) {
      ++below;
      CHECK(abs(phi) <= rat_pow(tau * gamma, 2));
    } else {
      ++above;
      CHECK(phi >= rat_pow(nu / gamma, 2));
      CHECK(phi <= rat_pow(nu * gamma, 2));
      CHECK(phi > 0);
    }
  }
  CHECK(below >= 100);
  CHECK(above >= 20);
}

TEST_CASE("pair path agrees with materialization on mixed schedules") {
  // exercises the closed-form quadratic forms (complete graphs) and the
  // generic last level (base graph) against fully materialized vectors
  std::vector<AmplifierParams> cases = {
      toy_params(16, 2, 0.5, 1.2, {rvw_level(2, 1), loops()}),
      toy_params(16, 1, 0.5, 1.2, {rvw_level(2, 1)}),
      toy_params(64, 2, 0.5, 1.2, {loops(), loops()}),
  };
  SplitMix64 rng(31);
  for (const auto& pc : cases) {
    auto s = derive_schedule(pc);
    for (int t = 0; t < 10; ++t) {
      SignVector x = SignVector::random(pc.d, rng), y = SignVector::random(pc.d, rng);
      SignVector fx = amplify(x, s), fy = amplify(y, s);
      CHECK(amplified_inner_product(x, y, s) ==
            BigRat(fx.inner(fy), std::int64_t(1) << s.K));
    }
  }

  // complete-without-loops last level: compare against a hand-materialized
  // squaring (the final dimension is not a power of two, so no padding here)
  ToyLevelSpec noloops;
  noloops.kind = ToyGraphKind::complete_no_loops;
  auto s = derive_schedule(toy_params(16, 1, 0.5, 1.2, {noloops}));
  CHECK(s.d_ell == 16 * 15);
  for (int t = 0; t < 10; ++t) {
    SignVector x = SignVector::random(16, rng), y = SignVector::random(16, rng);
    SignVector xg = approx_square(x, s.levels[0].graph);
    SignVector yg = approx_square(y, s.levels[0].graph);
    CHECK(amplified_inner_product(x, y, s) == BigRat(xg.inner(yg), 240));
  }
}

TEST_CASE("theoretical two-level schedules evaluate coordinates at any size") {
  AmplifierParams p;
  p.d = 8;
  p.ell = 2;
  p.tau = 0.4;
  p.gamma = 4.0;
  p.mode = Mode::theoretical;
  bounds::DimQuery q;
  q.d = p.d;
  q.tau = BigRat(p.tau);
  q.gamma = BigRat(p.gamma);
  q.ell = p.ell;
  p.K = bounds::explicit_dim(q).K;
  auto s = derive_schedule(p);
  REQUIRE(s.levels.size() == 2);
  CHECK(s.levels[1].b_i >= s.levels[0].b_i);  // thresholds shrink, degrees grow
  for (const auto& lv : s.levels) CHECK(lv.degree_bound_ok);

  SplitMix64 rng(47);
  SignVector x = SignVector::random(8, rng);
  amplifier::CoordStats stats;
  for (int t = 0; t < 10; ++t) {
    BigInt j = 0;
    for (int w = 0; w * 64 < s.K + 64; ++w) j |= BigInt(rng.next()) << (64 * w);
    j %= pow2(s.K);
    const int v = amplify_coord(x, s, j, &stats);
    CHECK((v == 1 || v == -1));
    CHECK(stats.input_touches <= 4);
    CHECK(stats.rot_evals[0] <= 2);
    CHECK(stats.rot_evals[1] <= 1);
    CHECK(amplify_coord(x, s, j) == v);
  }
}

TEST_CASE("toy schedule validation") {
  // base graph vertex count must be a multiple of the level dimension
  CHECK_THROWS_AS(derive_schedule(toy_params(24, 1, 0.5, 1.2, {rvw_level(2, 1)}, 5)),
                  ParameterError);
  // level count mismatch
  CHECK_THROWS_AS(derive_schedule(toy_params(16, 2, 0.5, 1.2, {loops()})), ParameterError);
  // K below the final dimension
  auto p = toy_params(16, 1, 0.5, 1.2, {loops()});
  p.K = 7;  // d_ell = 256 needs K >= 8
  CHECK_THROWS_AS(derive_schedule(p), ParameterError);
}

TEST_CASE("amplify is deterministic") {
  auto s = derive_schedule(toy_params(32, 1, 0.5, 1.2, {loops()}));
  SplitMix64 rng(29);
  SignVector x = SignVector::random(32, rng);
  CHECK(amplify(x, s) == amplify(x, s));
}

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "tnc/traffic.hpp"

using namespace tnc;

namespace {

// 1 - sum_{k<n} e^{-y} y^k / k!
double erlang_cdf(int n, double y) {
  if (y <= 0.0) return 0.0;
  double term = std::exp(-y), sum = term;
  for (int k = 1; k < n; ++k) {
    term *= y / k;
    sum += term;
  }
  return 1.0 - sum;
}

}  // namespace

TEST_CASE("poisson i.a.t model") {
  auto m = poisson_iat_sac(1.0, 1, 0.05);
  CHECK(m.kind == TrafficKind::IAT);
  CHECK(m.lambda()(4) == doctest::Approx(4.0));
  CHECK(m.bound(0.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(m.bound(1.0) == 0.0);
  CHECK(m.bound(50.0) == 0.0);

  const double mu = 2.0;
  auto big = poisson_iat_sac(mu, 40, 0.05);
  CHECK(big.bound.bound_class() == BoundClass::GBar);
  double prev = 1.0;
  for (int i = 0; i < 500; ++i) {
    double x = 0.05 * i;
    double oracle = 0.0;
    for (int n = 1; n <= 40; ++n) oracle = std::max(oracle, erlang_cdf(n, mu * (n / mu - x)));
    CHECK(std::abs(big.bound(x) - oracle) < 1e-9);
    CHECK(big.bound(x) <= prev);
    prev = big.bound(x);
  }
  CHECK_THROWS(poisson_iat_sac(0.0, 10, 0.1));
}

TEST_CASE("M/D/1 and gSBB v.w.d models") {
  auto m = md1_vwd_sac(1.0, 0.5);
  CHECK(m.lambda()(3) == doctest::Approx(1.5));
  CHECK(m.bound(0.0) == doctest::Approx(0.5));
  CHECK_THROWS(md1_vwd_sac(1.0, 1.0));

  auto g = gsbb_vwd_sac(2.0, BoundingFunction::exponential(1.0, 1.0));
  CHECK(g.lambda()(5) == doctest::Approx(2.5));
  for (double y : {0.0, 0.3, 1.0, 4.0}) CHECK(g.bound(y) == doctest::Approx(std::exp(-2.0 * y)));
  CHECK(gsbb_vwd_sac(2.0, BoundingFunction::step_at_zero()).bound.is_step());

  auto s = superposed_poisson_vwd({0.2, 0.3}, 1.5);
  auto ref = BoundingFunction::md1_wait(0.5, 1.5);
  for (double y : {0.0, 1.0, 5.0}) CHECK(s.bound(y) == doctest::Approx(ref(y)));
  CHECK(s.lambda()(2) == doctest::Approx(3.0));
}

TEST_CASE("v.w.d and i.a.t conversions") {
  Grid grid{0.01, 2001};
  auto m = TrafficModel::vwd(IndexCurve::linear(1.0), BoundingFunction::exponential(1.0, 1.0));
  auto i = vwd_to_iat(m);
  CHECK(i.kind == TrafficKind::IAT);
  CHECK(i.lambda()(7) == 7.0);
  CHECK(i.bound(0.7) == m.bound(0.7));
  CHECK_THROWS(vwd_to_iat(i));

  auto v = iat_to_vwd(i, 0.5, grid);
  CHECK(v.kind == TrafficKind::VWD);
  for (int n = 0; n < 30; ++n) CHECK(v.lambda()(n) == doctest::Approx(0.5 * n));
  for (std::size_t k = 0; k < grid.count; k += 37) {
    double x = grid.x(k);
    CHECK(std::abs(v.bound(x) - std::min(1.0, 3.0 * std::exp(-x))) < 1e-9);
    CHECK(v.bound(x) >= i.bound(x));
  }

  auto flat = iat_to_vwd(i, 1.0, grid);
  CHECK(flat.lambda()(100) == 0.0);
  CHECK_THROWS(iat_to_vwd(i, 1.5, grid));

  auto st = iat_to_vwd(TrafficModel::iat(IndexCurve::linear(1.0), BoundingFunction::step_at_zero()), 0.5, grid);
  CHECK(st.bound.is_step());

  // bumpy curve: output stays below the input and monotone
  auto bumpy = TrafficModel::iat(IndexCurve({0.0, 3.0, 3.1, 3.2, 6.0, 6.1}, 1.2), BoundingFunction::exponential(1.0, 2.0));
  auto bv = iat_to_vwd(bumpy, 1.0, grid);
  for (int n = 0; n < 20; ++n) {
    CHECK(bv.lambda()(n) <= std::max(bumpy.lambda()(n) - 1.0 * n, 0.0) + 1e-12);
    CHECK(bv.lambda()(n + 1) >= bv.lambda()(n));
  }
}

TEST_CASE("v.b.c to v.w.d on linear curves is exact") {
  Grid grid{0.05, 401};
  auto f = BoundingFunction::md1_wait(0.8, 1.0);
  for (double rho : {0.5, 1.0, 2.0}) {
    auto m = vbc_to_vwd(TrafficModel::vbc(TimeCurve::linear(rho), f), grid);
    for (int n = 0; n <= 50; ++n) CHECK(m.lambda()(n) == doctest::Approx(n / rho).epsilon(1e-14));
    for (std::size_t k = 0; k < grid.count; ++k) {
      double y = grid.x(k);
      CHECK(std::abs(m.bound(y) - f(rho * y)) < 1e-12);
    }
    auto g = gsbb_vwd_sac(rho, f);
    for (std::size_t k = 0; k < grid.count; k += 7) CHECK(std::abs(m.bound(grid.x(k)) - g.bound(grid.x(k))) < 1e-12);
  }
  auto s = vbc_to_vwd(TrafficModel::vbc(TimeCurve::linear(1.0), BoundingFunction::step_at_zero()), grid);
  CHECK(s.bound.is_step());
  CHECK_THROWS(vbc_to_vwd(TrafficModel::vwd(IndexCurve::linear(1.0), f), grid));
}

TEST_CASE("staircase arrival curve inverts to integer epochs") {
  Grid grid{0.1, 101};
  TimeCurve stairs({0.0}, {0.0}, 1.0, Interp::Step);
  auto m = vbc_to_vwd(TrafficModel::vbc(stairs, BoundingFunction::exponential(1.0, 1.0)), grid);
  for (int n = 0; n <= 40; ++n) CHECK(m.lambda()(n) == doctest::Approx(static_cast<double>(n)));
}

TEST_CASE("v.w.d to v.b.c") {
  const double rho = 2.0;
  auto h = BoundingFunction::exponential(1.0, 1.5);
  auto vwd = gsbb_vwd_sac(rho, h);
  const auto& hv = vwd.bound;
  auto m = vwd_to_vbc(vwd);
  CHECK(m.kind == TrafficKind::VBC);
  const auto& alpha = m.alpha();
  for (double t : {0.0, 0.2, 0.5, 0.74, 1.0, 3.3, 10.25}) CHECK(alpha(t) == std::floor(rho * t));

  // brute force z(y) = sup_u alpha(u+y) - alpha(u) + 1 and the largest y with z(y) <= x
  auto z = [&](double y) {
    double best = 0.0;
    for (int i = 0; i <= 4096; ++i) {
      double u = i / 1024.0;
      best = std::max(best, std::floor(rho * (u + y)) - std::floor(rho * u) + 1.0);
    }
    return best;
  };
  for (double x : {0.5, 1.0, 1.5, 2.0, 3.7, 6.0, 10.0}) {
    double ystar = -1.0;
    for (int i = 0; i <= 8 * 1024; ++i) {
      double y = i / 1024.0;
      if (z(y) <= x) ystar = y;
    }
    double expect = ystar < 0.0 ? 1.0 : hv(ystar);
    CHECK(std::abs(m.bound(x) - expect) < 1e-12);
  }

  auto st = vwd_to_vbc(TrafficModel::vwd(IndexCurve::linear(0.5), BoundingFunction::step_at_zero()));
  CHECK(st.bound(0.0) == 1.0);
  CHECK(st.bound(0.99) == 1.0);
  CHECK(st.bound(1.0) == 0.0);
  CHECK(st.bound(50.0) == 0.0);
}

TEST_CASE("v.w.d / v.b.c round trip") {
  Grid grid{0.05, 201};
  for (double rho : {0.5, 1.0, 2.0}) {
    auto orig = gsbb_vwd_sac(rho, BoundingFunction::exponential(1.0, 1.0));
    auto back = vbc_to_vwd(vwd_to_vbc(orig), grid);
    for (int n = 0; n <= 60; ++n) CHECK(back.lambda()(n) == doctest::Approx(orig.lambda()(n)).epsilon(1e-12));
    auto again = vwd_to_vbc(back);
    for (int i = 0; i < 200; ++i) {
      double t = 0.037 * i;
      CHECK(std::abs(again.alpha()(t) - std::floor(rho * t + 1e-12)) <= 1.0);
    }
    // every conversion only loosens the bound
    for (std::size_t k = 0; k < grid.count; ++k) CHECK(back.bound(grid.x(k)) >= orig.bound(grid.x(k)) - 1e-12);
  }
}

TEST_CASE("superposition of v.w.d flows") {
  Grid grid{0.1, 401};
  const double hbar = 1.8;
  auto a = md1_vwd_sac(0.25, hbar);
  auto s = superpose({a, a}, grid);
  CHECK(s.kind == TrafficKind::VWD);
  const auto& l = s.lambda();
  // merged epochs of two copies of hbar*n: ceil(n/2)*hbar, never exceeded
  for (int n = 0; n <= 200; ++n) {
    double merged = std::ceil(n / 2.0) * hbar;
    CHECK(l(n) <= merged + 1e-9);
    if (n + 4 < static_cast<int>(l.horizon())) CHECK(l(n) == doctest::Approx(merged));
  }
  CHECK(l.tail_rate() == doctest::Approx(hbar / 2.0));

  double prev = 1.0;
  for (std::size_t k = 0; k < grid.count; ++k) {
    double v = s.bound(grid.x(k));
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    prev = v;
  }
  CHECK(s.bound(grid.max()) < 1e-2);

  auto one = superpose({a}, grid);
  CHECK(one.bound(1.0) == a.bound(1.0));
  CHECK_THROWS(superpose({}, grid));
  CHECK_THROWS(superpose({poisson_iat_sac(1.0, 5, 0.1)}, grid));
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/distributions/negative_binomial.hpp>

#include "tnc/service.hpp"

using namespace tnc;

namespace {

// P{S_{n+1} > dbar(n+1) + x} through the incomplete beta function
double ibeta_tail(double pe, int n, double x) {
  const double dbar = 1.0 / (1.0 - pe);
  const auto m = static_cast<long>(std::floor(dbar * (n + 1) + x));
  // S = failures + n + 1; S > m  <=>  failures > m - n - 1
  const long k = m - n - 1;
  if (k < 0) return 1.0;
  boost::math::negative_binomial_distribution<double> d(n + 1, 1.0 - pe);
  return boost::math::cdf(boost::math::complement(d, static_cast<double>(k)));
}

}  // namespace

TEST_CASE("negative binomial tail") {
  CHECK(negbin_tail(0.5, 0, 0.0) == doctest::Approx(0.25).epsilon(1e-12));
  for (int n : {0, 3, 10}) CHECK(negbin_tail(0.0, n, 0.0) == 0.0);
  CHECK_THROWS(negbin_tail(1.0, 0, 0.0));
  CHECK_THROWS(negbin_tail(-0.1, 0, 0.0));

  for (double pe : {0.05, 0.2, 0.5, 0.8}) {
    for (int n : {0, 1, 4, 9, 25}) {
      double prev = 1.0;
      for (int i = 0; i <= 60; ++i) {
        double x = 0.25 * i;
        double t = negbin_tail(pe, n, x);
        CHECK(std::abs(t - ibeta_tail(pe, n, x)) < 1e-10);
        CHECK(t <= prev);
        prev = t;
      }
    }
  }
}

TEST_CASE("negative binomial tail against simulation") {
  std::mt19937_64 rng(12345);
  const double pe = 0.2;
  std::geometric_distribution<int> geo(1.0 - pe);  // failures before success
  const int samples = 200000;
  for (int n : {0, 4}) {
    std::vector<int> s(samples);
    for (auto& v : s) {
      int tot = 0;
      for (int k = 0; k <= n; ++k) tot += geo(rng) + 1;
      v = tot;
    }
    for (int x : {0, 1, 3, 6}) {
      double c = (n + 1) / (1.0 - pe) + x;
      double p = static_cast<double>(std::count_if(s.begin(), s.end(), [&](int v) { return v > c; })) / samples;
      double t = negbin_tail(pe, n, x);
      double se = std::sqrt(std::max(t * (1 - t), 1e-12) / samples);
      CHECK(std::abs(p - t) <= 4.0 * se + 1e-6);
    }
  }
}

TEST_CASE("wireless link i.d curve") {
  Grid grid{0.05, 801};
  auto ok = wireless_link_ssc(0.0, 0.3, 2.0, grid);
  CHECK(ok.kind == ServiceKind::ID);
  CHECK(ok.bound.is_step());
  CHECK(ok.gamma(5) == doctest::Approx(1.3 * 5 * 2.0));

  const double pe = 0.2, eta = 0.3, slot = 1.0;
  auto m = wireless_link_ssc(pe, eta, slot, grid);
  CHECK(m.gamma(4) == doctest::Approx((1.25 + 0.3) * 4));
  CHECK(m.bound.bound_class() == BoundClass::GBar);

  // j(y) = max_{n<200} tail, integrated with a lower Riemann sum
  const double h = 0.005;
  std::vector<double> j;
  for (int i = 0;; ++i) {
    double y = h * i, best = 0.0;
    for (int n = 0; n < 200; ++n) best = std::max(best, negbin_tail(pe, n, y));
    j.push_back(best);
    if (best < 1e-13) break;
  }
  std::vector<double> lower(j.size() + 1, 0.0);
  for (std::size_t i = j.size() - 1; i-- > 0;) lower[i] = lower[i + 1] + h * j[i + 1];

  double prev = 1.0;
  for (std::size_t k = 0; k < grid.count; ++k) {
    double x = grid.x(k);
    auto i = static_cast<std::size_t>(std::llround(x / h));
    double integ = i < lower.size() ? std::min(1.0, lower[i] / eta) : 0.0;
    double v = m.bound(x);
    CHECK(v >= integ - 1e-12);
    CHECK(v <= prev);
    prev = v;
  }

  CHECK(m.bound(20.0) < 0.5);
  CHECK(m.bound(grid.max()) < 1e-3);

  CHECK_THROWS(wireless_link_ssc(1.0, 0.3, 1.0, grid));
  CHECK_THROWS(wireless_link_ssc(0.2, 0.0, 1.0, grid));
  CHECK_THROWS(wireless_link_ssc(0.2, 0.3, 0.0, grid));
}

TEST_CASE("wireless link strict curve") {
  Grid grid{0.1, 401};
  auto ok = wireless_link_strict(0.0, 0.5, 1.0, grid);
  CHECK(ok.kind == ServiceKind::STRICT);
  CHECK(ok.bound.is_step());

  const double pe = 0.2, eta = 0.3;
  auto m = wireless_link_strict(pe, eta, 1.0, grid);
  for (std::size_t k = 0; k < grid.count; k += 5) {
    double x = grid.x(k);
    // never below any single window, never below the sum of the first windows
    double sum = 0.0, best = 0.0;
    for (int u = 1; u <= 100; ++u) {
      double t = negbin_tail(pe, u - 1, x + eta * u);
      sum += t;
      best = std::max(best, t);
    }
    CHECK(m.bound(x) >= best - 1e-12);
    CHECK(m.bound(x) >= std::min(1.0, sum) - 1e-12);
  }

  auto d = deterministic_server(0.5);
  CHECK(d.kind == ServiceKind::STRICT);
  CHECK(d.gamma(3) == doctest::Approx(1.5));
  CHECK(d.bound.is_step());
  auto di = strict_convert(d, ServiceKind::ID, 0.0, grid);
  CHECK(di.kind == ServiceKind::ID);
  CHECK(di.bound.is_step());
  CHECK(di.gamma(7) == d.gamma(7));
}

TEST_CASE("service curve conversions") {
  Grid grid{0.01, 2001};
  auto base = ServiceModel::id(IndexCurve::linear(1.0), BoundingFunction::exponential(1.0, 1.0));
  auto e = id_to_eta(base, 1.0, grid);
  CHECK(e.kind == ServiceKind::ETA);
  CHECK(e.eta == 1.0);
  for (std::size_t k = 0; k < grid.count; k += 13)
    CHECK(std::abs(e.bound(grid.x(k)) - std::min(1.0, 2.0 * std::exp(-grid.x(k)))) < 1e-6);

  auto back = eta_to_id(e);
  CHECK(back.kind == ServiceKind::ID);
  for (std::size_t k = 0; k < grid.count; k += 13) CHECK(back.bound(grid.x(k)) >= base.bound(grid.x(k)));
  CHECK_THROWS(eta_to_id(base));
  CHECK_THROWS(id_to_eta(e, 1.0, grid));

  auto st = id_to_eta(ServiceModel::id(IndexCurve::linear(1.0), BoundingFunction::step_at_zero()), 0.5, grid);
  CHECK(st.bound.is_step());
  auto ste = eta_to_id(ServiceModel::eta_ssc(IndexCurve::linear(1.0), BoundingFunction::step_at_zero(), 0.5));
  CHECK(ste.bound.is_step());

  // smaller eta, larger bound
  Grid wg{0.1, 301};
  auto w = wireless_link_ssc(0.2, 0.3, 1.0, wg);
  std::vector<double> etas{0.1, 0.2, 0.5, 1.0, 1.5, 2.0};
  for (std::size_t i = 1; i < etas.size(); ++i) {
    auto lo = id_to_eta(w, etas[i - 1], wg), hi = id_to_eta(w, etas[i], wg);
    for (std::size_t k = 0; k < wg.count; ++k) CHECK(lo.bound(wg.x(k)) >= hi.bound(wg.x(k)));
  }

  auto strict = ServiceModel::strict(IndexCurve::linear(1.0), BoundingFunction::exponential(1.0, 1.0));
  auto se = strict_convert(strict, ServiceKind::ETA, 1.0, grid);
  CHECK(se.kind == ServiceKind::ETA);
  for (std::size_t k = 0; k < grid.count; k += 13)
    CHECK(std::abs(se.bound(grid.x(k)) - std::min(1.0, 2.0 * std::exp(-grid.x(k)))) < 1e-6);
  CHECK_THROWS(strict_convert(base, ServiceKind::ID, 0.0, grid));
  auto fbar = ServiceModel::strict(IndexCurve::linear(1.0), BoundingFunction::one());
  CHECK_THROWS(strict_convert(fbar, ServiceKind::ETA, 1.0, grid));
}

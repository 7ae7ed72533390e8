#include <doctest.h>

#include <cmath>
#include <random>

#include "tnc/bounding.hpp"
#include "tnc/curve.hpp"

using namespace tnc;

TEST_CASE("index curve evaluation and tail") {
  IndexCurve c({0.0, 1.0, 3.0}, 2.0);
  CHECK(c(-3) == 0.0);
  CHECK(c(2) == 3.0);
  CHECK(c(5) == 9.0);
  CHECK(c.at(1.5) == doctest::Approx(2.0));
  CHECK(c.at(-0.5) == 0.0);
  CHECK(c.extended(6).horizon() == 6);
  CHECK(c.extended(6)(6) == 11.0);
  CHECK(c.plus_rate(0.5)(4) == doctest::Approx(9.0));
  CHECK_THROWS_AS(IndexCurve({0.0, 2.0, 1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(IndexCurve({-1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(IndexCurve({0.0}, -1.0), std::invalid_argument);
  auto a = IndexCurve::affine(0.5, 0.5);
  CHECK(a(0) == 0.0);
  CHECK(a(1) == 1.0);
  CHECK(a(4) == 2.5);
}

TEST_CASE("time curve step and linear forms") {
  TimeCurve s({0.0, 1.0, 2.5}, {0.0, 1.0, 2.0}, 2.0, Interp::Step);
  CHECK(s(0.99) == 0.0);
  CHECK(s(1.0) == 1.0);
  CHECK(s(2.49) == 1.0);
  CHECK(s(2.5) == 2.0);
  CHECK(s(3.0) == 3.0);
  CHECK(s(3.49) == 3.0);
  CHECK(s(3.5) == 4.0);
  CHECK(s.lower_inverse(1.0) == 1.0);
  CHECK(s.lower_inverse(1.5) == 2.5);
  CHECK(s.lower_inverse(4.0) == doctest::Approx(3.5));
  auto l = TimeCurve::linear(2.0);
  CHECK(l(1.25) == 2.5);
  CHECK(l.lower_inverse(5.0) == 2.5);
}

TEST_CASE("pseudo inverse") {
  std::vector<double> xs, zs;
  for (int i = 0; i <= 100; ++i) {
    xs.push_back(0.1 * i);
    zs.push_back(0.7 * 0.1 * i);
  }
  CHECK(pseudo_inverse(xs, zs, 0.7 * 5) == doctest::Approx(5.0));
  std::vector<double> flat(xs.size(), 1.0);
  CHECK(pseudo_inverse(xs, flat, 2.0) == xs.back());

  // staircase: scan for the first sample reaching y
  std::vector<double> st;
  for (double x : xs) st.push_back(std::floor(x));
  for (double y : {0.5, 1.0, 2.2, 7.0}) {
    double expect = xs.back();
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (st[i] >= y) {
        expect = xs[i];
        break;
      }
    CHECK(pseudo_inverse(xs, st, y, Interp::Step) == doctest::Approx(expect));
  }
  // Galois: z^{-1}(z(x)) <= x
  std::mt19937_64 rng(7);
  std::vector<double> rz(xs.size());
  double acc = 0.0;
  std::uniform_int_distribution<int> coin(0, 2);
  for (auto& v : rz) v = (acc += coin(rng));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(pseudo_inverse(xs, rz, rz[i]) <= xs[i] + 1e-12);
    CHECK(pseudo_inverse(xs, rz, rz[i], Interp::Step) <= xs[i] + 1e-12);
  }
}

TEST_CASE("step and trivial bounds") {
  auto s = BoundingFunction::step_at_zero();
  CHECK(s(-0.1) == 1.0);
  CHECK(s(0.0) == 0.0);
  CHECK(s.tail_integral(0.0) == 0.0);
  CHECK(s.bound_class() == BoundClass::GBar);
  auto one = BoundingFunction::one();
  CHECK(one(10.0) == 1.0);
  CHECK(one.bound_class() == BoundClass::FBar);
  CHECK_THROWS_AS(one.tail_integral(0.0), std::domain_error);
}

TEST_CASE("exponential bound tail integrals") {
  auto e = BoundingFunction::exponential(1.0, 2.0);
  CHECK(e(1.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(e.tail_integral(1.0) == doctest::Approx(std::exp(-2.0) / 2.0));
  // a > 1: clipped region [0, ln a / theta] integrates to its length
  auto c = BoundingFunction::exponential(std::exp(1.0), 1.0);
  CHECK(c(0.5) == 1.0);
  CHECK(c.tail_integral(0.0) == doctest::Approx(2.0));
  CHECK(c.tail_integral(-1.0) == doctest::Approx(3.0));
  CHECK(e.scaled(3.0).exponential_params()->second == doctest::Approx(6.0));
}

TEST_CASE("sampled bound is a left-continuous staircase") {
  Grid g{0.5, 5};
  auto s = BoundingFunction::sampled(g, {0.9, 0.6, 0.7, 0.2, 0.1}, 1.0);
  // 0.6 is lifted to the majorant 0.7
  CHECK(s(0.5) == doctest::Approx(0.7));
  CHECK(s(0.74) == doctest::Approx(0.7));
  CHECK(s(1.5) == doctest::Approx(0.2));
  CHECK(s(2.0) == doctest::Approx(0.1));
  CHECK(s(3.0) == doctest::Approx(0.1 * std::exp(-1.0)));
  double expect = 0.5 * (0.9 + 0.7 + 0.7 + 0.2) + 0.1;
  CHECK(s.tail_integral(0.0) == doctest::Approx(expect));
  CHECK(s.tail_integral(0.25) == doctest::Approx(expect - 0.25 * 0.9));
  auto f = BoundingFunction::sampled(g, {1.0, 1.0, 0.5, 0.5, 0.5}, 0.0);
  CHECK(f.bound_class() == BoundClass::FBar);
  auto z = BoundingFunction::sampled(g, {1.0, 1.0, 0.5, 0.5, 0.0}, 0.0);
  CHECK(z.bound_class() == BoundClass::GBar);
  CHECK(z(100.0) == 0.0);
}

namespace {

// Direct long double evaluation, adequate for small mu*x.
double md1_direct(double mu, double hbar, double x) {
  long double s = 0.0L;
  long k = static_cast<long>(std::floor(x / hbar));
  for (long i = 0; i <= k; ++i) {
    long double u = static_cast<long double>(mu) * (i * static_cast<long double>(hbar) - x);
    s += std::exp(-u) * std::pow(u, static_cast<long double>(i)) / std::tgamma(static_cast<long double>(i + 1));
  }
  return static_cast<double>(1.0L - (1.0L - mu * hbar) * s);
}

}  // namespace

TEST_CASE("md1 waiting tail") {
  auto h = BoundingFunction::md1_wait(1.0, 0.5);
  CHECK(h(0.0) == doctest::Approx(0.5));
  CHECK(h(0.5) == doctest::Approx(1.0 - 0.5 * std::exp(0.5)));
  for (double x = 0.0; x <= 4.0; x += 0.137) CHECK(h(x) == doctest::Approx(md1_direct(1.0, 0.5, x)).epsilon(1e-9));
  double prev = 1.0;
  for (double x = 0.0; x <= 20 * 0.5; x += 0.01) {
    CHECK(h(x) <= prev + 1e-15);
    prev = h(x);
  }
  // Kingman envelope
  double s = md1_decay_rate(1.0, 0.5);
  CHECK(1.0 * (std::expm1(0.5 * s)) == doctest::Approx(s));
  for (double x = 0.0; x <= 30.0; x += 0.5) CHECK(h(x) <= std::exp(-s * x) + 1e-15);
  // mean wait mu*hbar^2 / (2(1-rho)) equals the integral of the tail
  CHECK(h.tail_integral(0.0) == doctest::Approx(0.25).epsilon(1e-7));
  auto h2 = BoundingFunction::md1_wait(0.5, 1.8);
  CHECK(h2.tail_integral(0.0) == doctest::Approx(0.5 * 1.8 * 1.8 / (2 * (1 - 0.9))).epsilon(1e-6));
  Grid g{0.1, 101};
  auto ts = h.tail_integrals(g);
  for (std::size_t i = 0; i < g.count; i += 10) CHECK(ts[i] == doctest::Approx(h.tail_integral(g.x(i))).epsilon(1e-8));
  CHECK_THROWS_AS(BoundingFunction::md1_wait(1.0, 1.0), std::invalid_argument);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "tnc/simulator.hpp"
#include "tnc/statistics.hpp"

using namespace tnc;
using namespace tnc::sim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> random_times(std::mt19937_64& rng, std::size_t n, int max_gap) {
  std::uniform_int_distribution<int> g(0, max_gap);
  std::vector<double> a(n);
  double t = 0;
  for (auto& x : a) {
    t += g(rng);
    x = t;
  }
  return a;
}

// Direct expansion of the min-max formula.
std::vector<double> merge_formula(const std::vector<double>& a1, const std::vector<double>& a2) {
  auto A = [](const std::vector<double>& a, long i) {
    return i < 0 ? 0.0 : i >= static_cast<long>(a.size()) ? kInf : a[static_cast<std::size_t>(i)];
  };
  std::vector<double> out;
  for (long n = 0; n < static_cast<long>(a1.size() + a2.size()); ++n) {
    double best = kInf;
    for (long m = 0; m <= n + 1; ++m) best = std::min(best, std::max(A(a1, m - 1), A(a2, n - m)));
    out.push_back(best);
  }
  return out;
}

}  // namespace

TEST_CASE("generators") {
  CHECK(gen_renewal_arrivals(ArrivalDist::deterministic(1.0), 3, 1) == std::vector<double>{1.0, 2.0, 3.0});
  auto e = gen_renewal_arrivals(ArrivalDist::exponential(1.0), 100000, 42);
  CHECK(std::abs(e.back() / 1e5 - 1.0) < 0.02);
  CHECK(e == gen_renewal_arrivals(ArrivalDist::exponential(1.0), 100000, 42));
  CHECK(e != gen_renewal_arrivals(ArrivalDist::exponential(1.0), 100000, 43));
  auto u = gen_renewal_arrivals(ArrivalDist::uniform(0.5, 1.5), 1000, 1);
  CHECK(std::is_sorted(u.begin(), u.end()));
  CHECK_THROWS(gen_renewal_arrivals(ArrivalDist::exponential(0.0), 10, 1));
  CHECK_THROWS(gen_renewal_arrivals(ArrivalDist::uniform(2.0, 1.0), 10, 1));
  CHECK_THROWS(gen_renewal_arrivals(ArrivalDist::exponential(1.0), 0, 1));

  auto s0 = gen_service_times(ServiceDist::geometric_slotted(0.0, 0.25), 100, 5);
  CHECK(std::all_of(s0.begin(), s0.end(), [](double v) { return v == 0.25; }));
  auto s = gen_service_times(ServiceDist::geometric_slotted(0.5, 1.0), 1000000, 9);
  CHECK(std::abs(std::accumulate(s.begin(), s.end(), 0.0) / 1e6 - 2.0) < 0.01);
  CHECK(std::all_of(s.begin(), s.end(), [](double v) { return v >= 1.0 && v == std::floor(v); }));
  CHECK(gen_service_times(ServiceDist::deterministic(0.5), 4, 1) == std::vector<double>(4, 0.5));
  auto t = gen_service_times(ServiceDist::from_table({1.0, 3.0}), 1000, 2);
  CHECK(std::all_of(t.begin(), t.end(), [](double v) { return v == 1.0 || v == 3.0; }));
  CHECK_THROWS(gen_service_times(ServiceDist::geometric_slotted(1.0, 1.0), 4, 1));
}

TEST_CASE("seed derivation") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 10000; ++r) seen.insert(derive_seed(99, r, 0));
  CHECK(seen.size() == 10000);
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
}

TEST_CASE("FIFO recursion") {
  CHECK(simulate_fifo_node({0, 1, 2}, {1, 1, 1}).d == std::vector<double>{1, 2, 3});
  CHECK(simulate_fifo_node({0, 0, 0}, {1, 1, 1}).d == std::vector<double>{1, 2, 3});
  CHECK_THROWS(simulate_fifo_node({0, 1}, {1}));

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len(1, 32), sv(0, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    auto n = static_cast<std::size_t>(len(rng));
    auto a = random_times(rng, n, 5);
    std::vector<double> dl(n);
    for (auto& x : dl) x = sv(rng);
    auto tr = simulate_fifo_node(a, dl);
    for (std::size_t k = 0; k < n; ++k) {
      double best = -kInf;
      for (std::size_t m = 0; m <= k; ++m) {
        double s = a[m];
        for (std::size_t i = m; i <= k; ++i) s += dl[i];
        best = std::max(best, s);
      }
      CHECK(tr.d[k] == best);
    }
  }
}

TEST_CASE("FIFO merge") {
  CHECK(merge_fifo({1, 3, 5}, {2, 4, 6}) == std::vector<double>{1, 2, 3, 4, 5, 6});
  // the worked instance: a(4) comes from flow 1, third packet
  std::vector<double> a1{1, 2, 4, 7, 9}, a2{1.5, 3, 5, 6, 10};
  CHECK(merge_fifo(a1, a2)[4] == a1[2]);
  CHECK(merge_fifo_n({{1}, {2}, {3}}) == std::vector<double>{1, 2, 3});
  CHECK(merge_fifo_n({{1, 4}, {}, {2}}) == std::vector<double>{1, 2, 4});
  CHECK_THROWS(merge_fifo_n({}));

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(0, 32);
  for (int trial = 0; trial < 1000; ++trial) {
    auto x = random_times(rng, static_cast<std::size_t>(len(rng)), 3);
    auto y = random_times(rng, static_cast<std::size_t>(len(rng)), 3);
    std::vector<double> sorted = x;
    sorted.insert(sorted.end(), y.begin(), y.end());
    std::sort(sorted.begin(), sorted.end());
    auto m = merge_fifo(x, y);
    CHECK(m == sorted);
    CHECK(merge_fifo(y, x) == m);
    CHECK(merge_formula(x, y) == sorted);
    auto z = random_times(rng, static_cast<std::size_t>(len(rng)), 3);
    std::vector<double> all = sorted;
    all.insert(all.end(), z.begin(), z.end());
    std::sort(all.begin(), all.end());
    CHECK(merge_fifo_n({x, y, z}) == all);
  }
}

TEST_CASE("metrics") {
  auto tr = simulate_fifo_node({0, 2, 4}, {1, 1, 1});
  CHECK(delays(tr) == std::vector<double>{1, 1, 1});
  CHECK(waiting_times(tr) == std::vector<double>{0, 0, 0});
  auto batch = simulate_fifo_node({0, 0, 0}, {1, 1, 1});
  CHECK(delays(batch) == std::vector<double>{1, 2, 3});
  CHECK(backlog_at(batch, {0.5, 1.5, 2.5, 3.0, 10.0}) == std::vector<double>{3, 2, 1, 0, 0});
  CHECK(inter_departures(batch, 1) == std::vector<double>{1, 1});
  CHECK(inter_departures(batch, 2) == std::vector<double>{2});
}

TEST_CASE("model statistics") {
  std::vector<double> a{1, 2, 3, 4, 5, 6};
  auto v = vwd_statistic(a, IndexCurve::linear(1.0));
  CHECK(std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }));

  auto tr = simulate_fifo_node({0, 0.5, 3, 3.2}, {1, 2, 0.5, 1});
  auto idz = id_statistic(tr, IndexCurve::linear(0.0));
  auto D = delays(tr);
  for (std::size_t n = 0; n < D.size(); ++n) CHECK(idz[n] == doctest::Approx(D[n]));

  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(1, 64), sv(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    auto n = static_cast<std::size_t>(len(rng));
    auto arr = random_times(rng, n, 4);
    std::vector<double> dl(n);
    for (auto& x : dl) x = sv(rng);
    auto t = simulate_fifo_node(arr, dl);
    IndexCurve lam({0, 1, 1, 3, 4}, 1.5);
    IndexCurve gam({0, 2, 3, 3, 5, 7}, 1.25);
    auto vs = vwd_statistic(arr, lam);
    auto is = id_statistic(t, gam);
    auto es = eta_statistic(t, gam, 0.5);
    auto ss = strict_statistic(t, gam);
    std::size_t busy_start = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0 && !(arr[k] < t.d[k - 1])) busy_start = k;
      double bv = -kInf, conv = -kInf, be = -kInf, bs = -kInf;
      for (std::size_t m = 0; m <= k; ++m) {
        bv = std::max(bv, lam(static_cast<std::int64_t>(k - m)) - (arr[k] - arr[m]));
        conv = std::max(conv, arr[m] + gam(static_cast<std::int64_t>(k - m + 1)));
        be = std::max(be, is[m] - 0.5 * static_cast<double>(k - m));
        if (m >= busy_start) {
          double s = 0;
          for (std::size_t i = m; i <= k; ++i) s += dl[i];
          bs = std::max(bs, s - gam(static_cast<std::int64_t>(k - m + 1)));
        }
      }
      CHECK(vs[k] == doctest::Approx(bv));
      CHECK(is[k] == doctest::Approx(t.d[k] - conv));
      CHECK(es[k] == doctest::Approx(be));
      CHECK(ss[k] == doctest::Approx(bs));
    }
  }
  auto ia = iat_statistic(a, IndexCurve::linear(1.0), 2);
  CHECK(ia.size() == 4);
  CHECK(ia[0] == 0.0);
}

TEST_CASE("empirical CCDF and dominance") {
  CHECK(dkw_epsilon(10000, 0.01) == doctest::Approx(0.016276).epsilon(1e-4));
  std::vector<double> x{0.0, 0.5, 1.0, 1.5, 2.0};
  auto c = empirical_ccdf(std::vector<double>(200, 1.0), x, 0.01);
  CHECK(c.ccdf == std::vector<double>{1, 1, 0, 0, 0});
  CHECK_THROWS(empirical_ccdf(std::vector<double>(99, 1.0), x, 0.01));

  std::mt19937_64 rng(23);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> s(10000);
  for (auto& v : s) v = e(rng);
  std::vector<double> g;
  for (int i = 0; i <= 50; ++i) g.push_back(0.1 * i);
  auto ce = empirical_ccdf(s, g, 0.01);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(ce.ccdf[i] - std::exp(-g[i])) <= ce.dkw_epsilon);

  CHECK(check_dominance(BoundingFunction::one(), ce).pass);
  auto bad = check_dominance(BoundingFunction::step_at_zero(), ce);
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_x == 0.0);
  CHECK(check_dominance(BoundingFunction::exponential(1.0, 1.0), ce).pass);
  CHECK_THROWS(check_dominance(std::vector<double>{1.0}, ce));

  CHECK(after_warmup({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 0.1) == std::vector<double>{2, 3, 4, 5, 6, 7, 8, 9, 10});
  auto reps = run_replications(8, [](std::size_t r) { return std::vector<double>{static_cast<double>(r)}; });
  CHECK(pool(reps) == std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7});
}

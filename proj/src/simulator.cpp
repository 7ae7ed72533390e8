#include "tnc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

namespace tnc::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// out[n] = sup_{0<=m<=n} F(n-m) + G(m), where F(k) = F(N) + r*(k-N) for k >= N.
std::vector<double> sup_conv(const std::vector<double>& G, const std::function<double(std::int64_t)>& F,
                             std::int64_t N, double r) {
  const auto L = static_cast<std::int64_t>(G.size());
  std::vector<double> out(G.size());
  std::vector<double> pre(G.size());
  double run = -kInf;
  for (std::int64_t m = 0; m < L; ++m) {
    run = std::max(run, G[static_cast<std::size_t>(m)] - r * static_cast<double>(m));
    pre[static_cast<std::size_t>(m)] = run;
  }
  const double FN = F(N);
  for (std::int64_t n = 0; n < L; ++n) {
    double best = -kInf;
    for (std::int64_t k = 0; k <= std::min(n, N); ++k) best = std::max(best, F(k) + G[static_cast<std::size_t>(n - k)]);
    if (n > N) best = std::max(best, FN + r * static_cast<double>(n - N) + pre[static_cast<std::size_t>(n - N - 1)]);
    out[static_cast<std::size_t>(n)] = best;
  }
  return out;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication, std::uint64_t stream) {
  // splitmix64 is a bijection, so distinct replication indices give distinct seeds
  return splitmix64(splitmix64(master ^ (stream * 0xd1b54a32d192ed03ULL)) + replication);
}

std::vector<double> gen_renewal_arrivals(const ArrivalDist& dist, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_renewal_arrivals: need at least one packet");
  std::mt19937_64 rng(seed);
  std::function<double()> draw;
  switch (dist.kind) {
    case ArrivalDist::Kind::Exponential: {
      if (!(dist.p1 > 0.0)) throw std::invalid_argument("exponential arrivals: rate must be positive");
      std::exponential_distribution<double> e(dist.p1);
      draw = [e, &rng]() mutable { return e(rng); };
      break;
    }
    case ArrivalDist::Kind::Deterministic:
      if (!(dist.p1 > 0.0)) throw std::invalid_argument("deterministic arrivals: period must be positive");
      draw = [p = dist.p1] { return p; };
      break;
    case ArrivalDist::Kind::Uniform: {
      if (!(dist.p1 >= 0.0) || !(dist.p2 > dist.p1)) throw std::invalid_argument("uniform arrivals: need 0 <= lo < hi");
      std::uniform_real_distribution<double> u(dist.p1, dist.p2);
      draw = [u, &rng]() mutable { return u(rng); };
      break;
    }
  }
  std::vector<double> a(n);
  double t = 0.0;
  for (auto& x : a) {
    t += draw();
    x = t;
  }
  return a;
}

std::vector<double> gen_service_times(const ServiceDist& dist, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> s(n);
  switch (dist.kind) {
    case ServiceDist::Kind::Deterministic:
      if (!(dist.time >= 0.0)) throw std::invalid_argument("deterministic service: time must be >= 0");
      std::fill(s.begin(), s.end(), dist.time);
      break;
    case ServiceDist::Kind::GeometricSlotted: {
      if (!(dist.pe >= 0.0) || !(dist.pe < 1.0)) throw std::invalid_argument("geometric service: need 0 <= Pe < 1");
      if (!(dist.slot > 0.0)) throw std::invalid_argument("geometric service: slot must be positive");
      std::geometric_distribution<long> g(1.0 - dist.pe);  // failures before the first success
      for (auto& x : s) x = static_cast<double>(g(rng) + 1) * dist.slot;
      break;
    }
    case ServiceDist::Kind::Table: {
      if (dist.table.empty()) throw std::invalid_argument("table service: empty table");
      for (double v : dist.table)
        if (!(v >= 0.0)) throw std::invalid_argument("table service: values must be >= 0");
      std::uniform_int_distribution<std::size_t> pick(0, dist.table.size() - 1);
      for (auto& x : s) x = dist.table[pick(rng)];
      break;
    }
  }
  return s;
}

PacketTrace simulate_fifo_node(std::vector<double> a, std::vector<double> delta) {
  if (a.size() != delta.size()) throw std::invalid_argument("simulate_fifo_node: arrival and service lengths differ");
  PacketTrace t{std::move(a), std::move(delta), {}};
  t.d.resize(t.a.size());
  double prev = -kInf;
  for (std::size_t n = 0; n < t.a.size(); ++n) {
    prev = std::max(t.a[n], prev) + t.delta[n];
    t.d[n] = prev;
  }
  return t;
}

std::vector<PacketTrace> simulate_tandem(const std::vector<double>& a, const std::vector<std::vector<double>>& deltas) {
  std::vector<PacketTrace> out;
  std::vector<double> in = a;
  for (const auto& dl : deltas) {
    out.push_back(simulate_fifo_node(in, dl));
    in = out.back().d;
  }
  return out;
}

std::vector<double> merge_fifo(const std::vector<double>& a1, const std::vector<double>& a2) {
  const auto L1 = static_cast<std::int64_t>(a1.size()), L2 = static_cast<std::int64_t>(a2.size());
  auto A1 = [&](std::int64_t i) { return i < 0 ? -kInf : i >= L1 ? kInf : a1[static_cast<std::size_t>(i)]; };
  auto A2 = [&](std::int64_t i) { return i < 0 ? -kInf : i >= L2 ? kInf : a2[static_cast<std::size_t>(i)]; };
  std::vector<double> out(static_cast<std::size_t>(L1 + L2));
  for (std::int64_t n = 0; n < L1 + L2; ++n) {
    // A1(m-1) rises and A2(n-m) falls in m; the min of the max sits at their crossing
    std::int64_t lo = 0, hi = n + 1;
    while (lo < hi) {
      std::int64_t mid = (lo + hi) / 2;
      if (A1(mid - 1) >= A2(n - mid)) hi = mid;
      else lo = mid + 1;
    }
    double best = std::max(A1(lo - 1), A2(n - lo));
    if (lo > 0) best = std::min(best, std::max(A1(lo - 2), A2(n - lo + 1)));
    out[static_cast<std::size_t>(n)] = best;
  }
  return out;
}

std::vector<double> merge_fifo_n(const std::vector<std::vector<double>>& flows) {
  if (flows.empty()) throw std::invalid_argument("merge_fifo_n: no flows");
  std::vector<double> acc = flows.front();
  for (std::size_t i = 1; i < flows.size(); ++i) acc = merge_fifo(acc, flows[i]);
  return acc;
}

std::vector<double> delays(const PacketTrace& t) {
  std::vector<double> out(t.a.size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = t.d[n] - t.a[n];
  return out;
}

std::vector<double> waiting_times(const PacketTrace& t) {
  std::vector<double> out(t.a.size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = t.d[n] - t.a[n] - t.delta[n];
  return out;
}

std::vector<double> backlog_at(const PacketTrace& tr, const std::vector<double>& times) {
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    auto arrived = std::upper_bound(tr.a.begin(), tr.a.end(), times[i]) - tr.a.begin();
    auto left = std::upper_bound(tr.d.begin(), tr.d.end(), times[i]) - tr.d.begin();
    out[i] = static_cast<double>(arrived - left);
  }
  return out;
}

std::vector<double> inter_departures(const PacketTrace& t, std::size_t lag) {
  std::vector<double> out;
  for (std::size_t n = 0; n + lag < t.d.size(); ++n) out.push_back(t.d[n + lag] - t.d[n]);
  return out;
}

std::vector<double> vwd_statistic(const std::vector<double>& a, const IndexCurve& lambda) {
  auto N = static_cast<std::int64_t>(lambda.horizon());
  auto s = sup_conv(a, [&](std::int64_t k) { return lambda(k); }, N, lambda.tail_rate());
  for (std::size_t n = 0; n < s.size(); ++n) s[n] -= a[n];
  return s;
}

std::vector<double> iat_statistic(const std::vector<double>& a, const IndexCurve& lambda, std::size_t gap) {
  if (gap < 1) throw std::invalid_argument("iat_statistic: gap must be >= 1");
  std::vector<double> out;
  const double lg = lambda(static_cast<std::int64_t>(gap));
  for (std::size_t n = gap; n < a.size(); ++n) out.push_back(lg - (a[n] - a[n - gap]));
  return out;
}

std::vector<double> id_statistic(const PacketTrace& t, const IndexCurve& gamma) {
  // sup_m a(m) + gamma(n-m+1): F(k) = gamma(k+1)
  auto N = std::max<std::int64_t>(static_cast<std::int64_t>(gamma.horizon()) - 1, 0);
  auto s = sup_conv(t.a, [&](std::int64_t k) { return gamma(k + 1); }, N, gamma.tail_rate());
  for (std::size_t n = 0; n < s.size(); ++n) s[n] = t.d[n] - s[n];
  return s;
}

std::vector<double> eta_statistic(const PacketTrace& t, const IndexCurve& gamma, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta_statistic: eta must be positive");
  auto x = id_statistic(t, gamma);
  double run = -kInf;
  for (auto& v : x) {
    run = std::max(run - eta, v);
    v = run;
  }
  return x;
}

std::vector<double> strict_statistic(const PacketTrace& t, const IndexCurve& gamma) {
  std::vector<double> out(t.a.size());
  auto N = std::max<std::int64_t>(static_cast<std::int64_t>(gamma.horizon()) - 1, 0);
  std::size_t start = 0;
  while (start < t.a.size()) {
    std::size_t end = start + 1;
    while (end < t.a.size() && t.a[end] < t.d[end - 1]) ++end;
    // G(m) = -C(m-1), C the cumulative service within the busy period
    std::vector<double> G(end - start), C(end - start);
    double c = 0.0;
    for (std::size_t i = 0; i < G.size(); ++i) {
      G[i] = -c;
      c += t.delta[start + i];
      C[i] = c;
    }
    auto s = sup_conv(G, [&](std::int64_t k) { return -gamma(k + 1); }, N, -gamma.tail_rate());
    for (std::size_t i = 0; i < G.size(); ++i) out[start + i] = C[i] + s[i];
    start = end;
  }
  return out;
}

std::string trace_csv(const PacketTrace& t) {
  std::string out = "n,a,delta,d\n";
  char buf[128];
  for (std::size_t n = 0; n < t.a.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%zu,%.9f,%.9f,%.9f\n", n, t.a[n], t.delta[n], t.d[n]);
    out += buf;
  }
  return out;
}

}  // namespace tnc::sim

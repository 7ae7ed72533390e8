#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tnc/curve.hpp"

namespace tnc::sim {

struct PacketTrace {
  std::vector<double> a;
  std::vector<double> delta;
  std::vector<double> d;
};

// Stream seed for (master, replication, stream); injective in the replication index for a
// fixed master and stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication, std::uint64_t stream);

struct ArrivalDist {
  enum class Kind { Exponential, Deterministic, Uniform };
  Kind kind = Kind::Exponential;
  double p1 = 1.0;  // rate, period, or lower bound
  double p2 = 0.0;  // upper bound for Uniform

  static ArrivalDist exponential(double mu) { return {Kind::Exponential, mu, 0.0}; }
  static ArrivalDist deterministic(double period) { return {Kind::Deterministic, period, 0.0}; }
  static ArrivalDist uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
};

struct ServiceDist {
  enum class Kind { Deterministic, GeometricSlotted, Table };
  Kind kind = Kind::Deterministic;
  double time = 1.0;
  double pe = 0.0;
  double slot = 1.0;
  std::vector<double> table;  // equally likely values

  static ServiceDist deterministic(double t) { return {Kind::Deterministic, t, 0.0, 1.0, {}}; }
  static ServiceDist geometric_slotted(double pe, double slot) { return {Kind::GeometricSlotted, 0.0, pe, slot, {}}; }
  static ServiceDist from_table(std::vector<double> values) { return {Kind::Table, 0.0, 0.0, 1.0, std::move(values)}; }
};

// a(0) is the first inter-arrival draw.
std::vector<double> gen_renewal_arrivals(const ArrivalDist& dist, std::size_t n, std::uint64_t seed);
std::vector<double> gen_service_times(const ServiceDist& dist, std::size_t n, std::uint64_t seed);

// d(n) = max(a(n), d(n-1)) + delta(n)
PacketTrace simulate_fifo_node(std::vector<double> a, std::vector<double> delta);

// Node k is fed by the departures of node k-1.
std::vector<PacketTrace> simulate_tandem(const std::vector<double>& a, const std::vector<std::vector<double>>& deltas);

// a(n) = min_{0<=m<=n+1} max(a1(m-1), a2(n-m)), indices outside a flow read as -inf below
// and +inf above its range.
std::vector<double> merge_fifo(const std::vector<double>& a1, const std::vector<double>& a2);
std::vector<double> merge_fifo_n(const std::vector<std::vector<double>>& flows);

std::vector<double> delays(const PacketTrace& t);
std::vector<double> waiting_times(const PacketTrace& t);
// #{n : a(n) <= t} - #{n : d(n) <= t} at each time
std::vector<double> backlog_at(const PacketTrace& tr, const std::vector<double>& times);
// d(n + lag) - d(n)
std::vector<double> inter_departures(const PacketTrace& t, std::size_t lag);

// Per-index realizations of the defining random quantities.
// sup_{0<=m<=n} lambda(n-m) - [a(n) - a(m)]
std::vector<double> vwd_statistic(const std::vector<double>& a, const IndexCurve& lambda);
// lambda(gap) - [a(n) - a(n-gap)] for n >= gap
std::vector<double> iat_statistic(const std::vector<double>& a, const IndexCurve& lambda, std::size_t gap);
// d(n) - sup_{0<=m<=n} [a(m) + gamma(n-m+1)]
std::vector<double> id_statistic(const PacketTrace& t, const IndexCurve& gamma);
// sup_{0<=m<=n} [id(m) - eta*(n-m)]
std::vector<double> eta_statistic(const PacketTrace& t, const IndexCurve& gamma, double eta);
// sup over m in n's busy period of sum_{k=m}^{n} delta(k) - gamma(n-m+1)
std::vector<double> strict_statistic(const PacketTrace& t, const IndexCurve& gamma);

// CSV with header n,a,delta,d
std::string trace_csv(const PacketTrace& t);

}  // namespace tnc::sim

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tnc/models.hpp"

namespace tnc {

// j (x) h, or 1 - (1-j)*(1-h) when arrivals and service are independent.
BoundingFunction combine_bounds(const BoundingFunction& j, const BoundingFunction& h, const Grid& grid, bool independent);

// c = sup_k gamma(k+1) - lambda(k)
double delay_offset(const IndexCurve& lambda, const IndexCurve& gamma);

// P{D(n) > x} <= combine(j, h)(x - c), 1 below c.
BoundingFunction delay_bound(const TrafficModel& arr, const ServiceModel& svc, const Grid& grid, bool independent);

// inf_{v>=1} lambda(v + k - 1) - gamma(v), the argument of the backlog bound at k packets.
double backlog_argument(const IndexCurve& lambda, const IndexCurve& gamma, std::int64_t k);

// P{B > k} <= combine(j, h)(backlog_argument(k)) for k >= 1; argument in packets.
BoundingFunction backlog_bound(const TrafficModel& arr, const ServiceModel& svc, const Grid& grid, bool independent);

struct BacklogPoint {
  double x;
  std::int64_t packets;  // H(lambda, gamma + x) + 1
  double prob;           // combine(j, h)(x)
};

// P{B > H(lambda, gamma + x) + 1} <= combine(j, h)(x) for each grid x.
std::vector<BacklogPoint> backlog_horizontal(const TrafficModel& arr, const ServiceModel& svc, const Grid& grid,
                                             bool independent);

// P{B > k} <= min over points with packets <= k of prob, as a bound on a unit packet grid.
BoundingFunction backlog_from_points(const std::vector<BacklogPoint>& pts);

// Departure process as an i.a.t model: curve(n) = (lambda deconv gamma)(n - 1) for gaps n >= 2.
TrafficModel output_characterization(const TrafficModel& arr, const ServiceModel& svc, const Grid& grid,
                                     bool independent);

// Tandem of i.d nodes: node k gets its curve raised by (k-1)*eta*n, the first N-1 bounds are
// eta_k inflated, curves composed with service_conv and bounds with min_plus_conv.
ServiceModel concatenate(const std::vector<ServiceModel>& svcs, double eta, const std::vector<double>& eta_k,
                         const Grid& grid);

struct NodeByNode {
  BoundingFunction total;
  std::vector<BoundingFunction> per_hop;
};

// Delay bound at each hop (output -> v.w.d via eta -> next hop), summed by min_plus_conv.
NodeByNode node_by_node_delay(const TrafficModel& arr, const std::vector<ServiceModel>& svcs, double eta,
                              const Grid& grid, bool independent);

enum class EtaObjective { BoundAt, Area };

struct EtaChoice {
  double eta;
  BoundingFunction bound;
  double score;
};

// Grid search over eta; inadmissible points (builder throws std::domain_error) are skipped.
// Ties go to the smaller eta.
EtaChoice optimize_eta(EtaObjective objective, double x_star, const std::vector<double>& etas, const Grid& grid,
                       const std::function<BoundingFunction(double)>& builder);

}  // namespace tnc

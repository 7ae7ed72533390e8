#include "tnc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "tnc/algebra.hpp"
#include "tnc/traffic.hpp"

namespace tnc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kMaxPackets = 1'000'000;

void check_pair(const TrafficModel& arr, const ServiceModel& svc) {
  if (arr.kind != TrafficKind::VWD) throw std::invalid_argument("analysis needs a v.w.d arrival model");
  if (svc.kind != ServiceKind::ID) throw std::invalid_argument("analysis needs an i.d service model");
  if (stability_margin(arr.lambda(), svc.gamma) > 0.0)
    throw std::domain_error("unstable: service curve grows faster than the arrival curve");
}

}  // namespace

BoundingFunction combine_bounds(const BoundingFunction& j, const BoundingFunction& h, const Grid& grid, bool independent) {
  return independent ? independent_combine(j, h, grid) : min_plus_conv(j, h, grid);
}

double delay_offset(const IndexCurve& lambda, const IndexCurve& gamma) {
  return min_plus_deconv_at(gamma, lambda, 1, 0);
}

BoundingFunction delay_bound(const TrafficModel& arr, const ServiceModel& svc, const Grid& grid, bool independent) {
  check_pair(arr, svc);
  const double c = delay_offset(arr.lambda(), svc.gamma);
  return combine_bounds(svc.bound, arr.bound, grid, independent).shifted(std::max(c, 0.0));
}

double backlog_argument(const IndexCurve& lambda, const IndexCurve& gamma, std::int64_t k) {
  // beyond both horizons the difference only grows with v
  const auto V = static_cast<std::int64_t>(std::max(lambda.horizon(), gamma.horizon())) + 1;
  double best = kInf;
  for (std::int64_t v = 1; v <= V; ++v) best = std::min(best, lambda(v + k - 1) - gamma(v));
  return best;
}

BoundingFunction backlog_bound(const TrafficModel& arr, const ServiceModel& svc, const Grid& grid, bool independent) {
  check_pair(arr, svc);
  const auto& lambda = arr.lambda();
  const auto& gamma = svc.gamma;
  auto comb = combine_bounds(svc.bound, arr.bound, grid, independent);
  const auto Kmin = static_cast<std::int64_t>(std::max(lambda.horizon(), gamma.horizon())) + 1;
  std::vector<double> v{1.0};
  for (std::int64_t k = 1;; ++k) {
    double arg = backlog_argument(lambda, gamma, k);
    v.push_back(comb(arg));
    if (k >= Kmin && (arg >= grid.max() || v.back() == 0.0)) break;
    if (k > kMaxPackets) throw std::domain_error("backlog_bound: packet range too large");
  }
  const Grid pg{1.0, v.size()};
  return BoundingFunction::sampled(pg, std::move(v), comb.decay_rate() * lambda.tail_rate());
}

std::vector<BacklogPoint> backlog_horizontal(const TrafficModel& arr, const ServiceModel& svc, const Grid& grid,
                                             bool independent) {
  check_pair(arr, svc);
  auto comb = combine_bounds(svc.bound, arr.bound, grid, independent);
  std::vector<BacklogPoint> out;
  out.reserve(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    double x = grid.x(i);
    out.push_back({x, horizontal_distance(arr.lambda(), svc.gamma, x) + 1, comb(x)});
  }
  return out;
}

BoundingFunction backlog_from_points(const std::vector<BacklogPoint>& pts) {
  if (pts.empty()) throw std::invalid_argument("backlog_from_points: no points");
  std::int64_t top = 0;
  for (const auto& p : pts) top = std::max(top, p.packets);
  std::vector<double> v(static_cast<std::size_t>(top) + 1, 1.0);
  for (const auto& p : pts) {
    auto k = static_cast<std::size_t>(p.packets);
    v[k] = std::min(v[k], p.prob);
  }
  for (std::size_t k = 1; k < v.size(); ++k) v[k] = std::min(v[k], v[k - 1]);
  const Grid pg{1.0, v.size()};
  return BoundingFunction::sampled(pg, std::move(v), 0.0);
}

TrafficModel output_characterization(const TrafficModel& arr, const ServiceModel& svc, const Grid& grid,
                                     bool independent) {
  check_pair(arr, svc);
  IndexCurve D = max_plus_deconv(arr.lambda(), svc.gamma, 1);
  // gap 1 is left at 0: the theorem covers gaps of two or more
  std::vector<double> w(D.horizon() + 2, 0.0);
  for (std::size_t n = 2; n < w.size(); ++n) w[n] = D(static_cast<std::int64_t>(n) - 1);
  return TrafficModel::iat(IndexCurve(std::move(w), D.tail_rate()), combine_bounds(svc.bound, arr.bound, grid, independent));
}

ServiceModel concatenate(const std::vector<ServiceModel>& svcs, double eta, const std::vector<double>& eta_k,
                         const Grid& grid) {
  if (svcs.empty()) throw std::invalid_argument("concatenate: no nodes");
  for (const auto& s : svcs)
    if (s.kind != ServiceKind::ID) throw std::invalid_argument("concatenate: nodes must be i.d service models");
  if (svcs.size() == 1) return svcs.front();
  if (!(eta > 0.0)) throw std::invalid_argument("concatenate: eta must be positive");
  const std::size_t N = svcs.size();
  if (!eta_k.empty() && eta_k.size() != N - 1) throw std::invalid_argument("concatenate: need one eta_k per node but the last");

  IndexCurve gamma;
  BoundingFunction j = BoundingFunction::step_at_zero();
  for (std::size_t k = 0; k < N; ++k) {
    IndexCurve gk = svcs[k].gamma.plus_rate(static_cast<double>(k) * eta);
    gamma = k == 0 ? gk : service_conv(gamma, gk);
    BoundingFunction jk = svcs[k].bound;
    if (k + 1 < N) {
      if (jk.bound_class() != BoundClass::GBar) throw std::domain_error("concatenate: non-integrable bound before the last node");
      jk = eta_inflate(jk, eta_k.empty() ? eta : eta_k[k], grid);
    }
    j = min_plus_conv(j, jk, grid);
  }
  return ServiceModel::id(gamma, j);
}

NodeByNode node_by_node_delay(const TrafficModel& arr, const std::vector<ServiceModel>& svcs, double eta,
                              const Grid& grid, bool independent) {
  if (svcs.empty()) throw std::invalid_argument("node_by_node_delay: no nodes");
  NodeByNode out{BoundingFunction::step_at_zero(), {}};
  TrafficModel cur = arr;
  for (std::size_t k = 0; k < svcs.size(); ++k) {
    out.per_hop.push_back(delay_bound(cur, svcs[k], grid, independent));
    out.total = k == 0 ? out.per_hop.back() : min_plus_conv(out.total, out.per_hop.back(), grid);
    if (k + 1 < svcs.size()) cur = iat_to_vwd(output_characterization(cur, svcs[k], grid, independent), eta, grid);
  }
  return out;
}

EtaChoice optimize_eta(EtaObjective objective, double x_star, const std::vector<double>& etas, const Grid& grid,
                       const std::function<BoundingFunction(double)>& builder) {
  std::vector<double> sorted = etas;
  std::sort(sorted.begin(), sorted.end());
  std::optional<EtaChoice> best;
  for (double eta : sorted) {
    if (!(eta > 0.0)) continue;
    BoundingFunction b = BoundingFunction::one();
    try {
      b = builder(eta);
    } catch (const std::domain_error&) {
      continue;
    }
    double score = 0.0;
    if (objective == EtaObjective::BoundAt) {
      score = b(x_star);
    } else {
      for (std::size_t i = 0; i < grid.count; ++i) score += b(grid.x(i)) * grid.step;
    }
    if (!best || score < best->score) best = EtaChoice{eta, b, score};
  }
  if (!best) throw std::domain_error("optimize_eta: no admissible eta in the search grid");
  return *best;
}

}  // namespace tnc

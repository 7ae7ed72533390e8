#include "tnc/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "tnc/algebra.hpp"

namespace tnc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxPackets = 200'000;
constexpr double kNegligible = 1e-12;
// packet-axis resolution of z(x) for the space-to-time conversion
constexpr double kPacketStep = 0.125;

bool subadditive(const IndexCurve& lambda) {
  const auto N = static_cast<std::int64_t>(lambda.horizon()) + 2;
  if (N > 2000) return false;
  for (std::int64_t a = 1; a <= N; ++a)
    for (std::int64_t b = a; a + b <= N; ++b)
      if (lambda(a + b) > lambda(a) + lambda(b) + 1e-12) return false;
  // tail: lambda(a+b) - lambda(b) = r*a once b is past the horizon, need r*a <= lambda(a)
  for (std::int64_t a = 1; a <= N; ++a)
    if (lambda.tail_rate() * static_cast<double>(a) > lambda(a) + 1e-12) return false;
  return true;
}

// z(x) = sup_k lambda(k) - lambda(k - x) on the piecewise-linear extension.
double z_of(const IndexCurve& lambda, double x) {
  const auto K = static_cast<std::int64_t>(lambda.horizon()) + static_cast<std::int64_t>(std::ceil(x)) + 1;
  double best = lambda.tail_rate() * x;
  for (std::int64_t k = 0; k <= K; ++k)
    best = std::max(best, lambda(k) - lambda.at(static_cast<double>(k) - x));
  return best;
}

// h(y) = f(z^{-1}(y)) on the grid, f in packets.
BoundingFunction vwd_bound_from_vbc(const IndexCurve& lambda, const BoundingFunction& f, const Grid& grid) {
  const double r = lambda.tail_rate();
  if (!(r > 0.0)) throw std::domain_error("vbc_to_vwd: arrival curve has no positive long-run spacing");
  if (f.is_step()) return f;
  if (f.family() == BoundFamily::One) return f;

  const bool sub = subadditive(lambda);
  std::vector<double> xs, zs;
  for (std::size_t i = 0;; ++i) {
    double x = kPacketStep * static_cast<double>(i);
    double z = sub ? lambda.at(x) : z_of(lambda, x);
    xs.push_back(x);
    zs.push_back(z);
    if (z > grid.max() + r) break;
    if (xs.size() > kMaxPackets) throw std::domain_error("vbc_to_vwd: grid range needs too many packets");
  }
  std::vector<double> v(grid.count);
  for (std::size_t j = 0; j < grid.count; ++j) v[j] = f(pseudo_inverse(xs, zs, grid.x(j)));
  return BoundingFunction::sampled(grid, std::move(v), f.decay_rate() / r);
}

}  // namespace

TrafficModel poisson_iat_sac(double mu, std::size_t horizon, double grid_step) {
  if (!(mu > 0.0) || horizon < 1 || !(grid_step > 0.0)) throw std::invalid_argument("poisson_iat_sac: bad parameters");
  const double span = static_cast<double>(horizon) / mu;
  Grid g = Grid::up_to(span + grid_step, grid_step);
  std::vector<double> v(g.count, 0.0);
  for (std::size_t i = 0; i < g.count; ++i) {
    double x = g.x(i);
    double best = 0.0;
    for (std::size_t n = 1; n <= horizon; ++n) {
      double t = static_cast<double>(n) / mu - x;
      if (t <= 0.0) continue;
      best = std::max(best, boost::math::gamma_p(static_cast<double>(n), mu * t));
    }
    v[i] = best;
  }
  return TrafficModel::iat(IndexCurve::linear(1.0 / mu), BoundingFunction::sampled(g, std::move(v), kInf));
}

TrafficModel md1_vwd_sac(double mu, double hbar) {
  return TrafficModel::vwd(IndexCurve::linear(hbar), BoundingFunction::md1_wait(mu, hbar));
}

TrafficModel gsbb_vwd_sac(double rho, const BoundingFunction& f) {
  if (!(rho > 0.0)) throw std::invalid_argument("gsbb_vwd_sac: rho must be positive");
  return TrafficModel::vwd(IndexCurve::linear(1.0 / rho), f.scaled(rho));
}

TrafficModel superposed_poisson_vwd(const std::vector<double>& mus, double ts) {
  double total = 0.0;
  for (double m : mus) {
    if (!(m > 0.0)) throw std::invalid_argument("superposed_poisson_vwd: rates must be positive");
    total += m;
  }
  return md1_vwd_sac(total, ts);
}

TrafficModel vwd_to_iat(const TrafficModel& m) {
  if (m.kind != TrafficKind::VWD) throw std::invalid_argument("vwd_to_iat: expected a VWD model");
  return TrafficModel::iat(m.lambda(), m.bound);
}

TrafficModel iat_to_vwd(const TrafficModel& m, double eta, const Grid& grid) {
  if (m.kind != TrafficKind::IAT) throw std::invalid_argument("iat_to_vwd: expected an IAT model");
  const IndexCurve& lambda = m.lambda();
  if (!(eta > 0.0)) throw std::invalid_argument("iat_to_vwd: eta must be positive");
  if (eta > lambda.tail_rate()) throw std::domain_error("iat_to_vwd: eta exceeds the long-run spacing");
  auto vals = lambda.values();
  std::vector<double> v(vals.size());
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = std::max(vals[n] - eta * static_cast<double>(n), 0.0);
  for (std::size_t n = v.size() - 1; n-- > 0;) v[n] = std::min(v[n], v[n + 1]);
  return TrafficModel::vwd(IndexCurve(std::move(v), lambda.tail_rate() - eta), eta_inflate(m.bound, eta, grid));
}

TrafficModel vbc_to_vwd(const TrafficModel& m, const Grid& grid) {
  if (m.kind != TrafficKind::VBC) throw std::invalid_argument("vbc_to_vwd: expected a VBC model");
  const TimeCurve& alpha = m.alpha();
  if (!(alpha.tail_rate() > 0.0)) throw std::domain_error("vbc_to_vwd: arrival curve has zero long-run rate");
  const auto top = static_cast<std::size_t>(std::ceil(alpha.values().back())) + 1;
  std::vector<double> v(top + 1);
  for (std::size_t n = 0; n <= top; ++n) v[n] = alpha.lower_inverse(static_cast<double>(n));
  IndexCurve lambda(std::move(v), 1.0 / alpha.tail_rate());
  return TrafficModel::vwd(lambda, vwd_bound_from_vbc(lambda, m.bound, grid));
}

TrafficModel vwd_to_vbc(const TrafficModel& m) {
  if (m.kind != TrafficKind::VWD) throw std::invalid_argument("vwd_to_vbc: expected a VWD model");
  const IndexCurve& lambda = m.lambda();
  const double r = lambda.tail_rate();
  if (!(r > 0.0)) throw std::domain_error("vwd_to_vbc: arrival curve has no positive long-run spacing");

  // staircase alpha(t) = #{k >= 1 : lambda(k) <= t}
  auto vals = lambda.values();
  std::vector<double> times{0.0}, counts{0.0};
  for (std::size_t k = 1; k < vals.size(); ++k) {
    if (vals[k] <= 0.0) {
      counts[0] = static_cast<double>(k);
    } else if (vals[k] == times.back()) {
      counts.back() = static_cast<double>(k);
    } else {
      times.push_back(vals[k]);
      counts.push_back(static_cast<double>(k));
    }
  }
  TimeCurve alpha(std::move(times), std::move(counts), 1.0 / r, Interp::Step);

  const auto N = static_cast<std::int64_t>(lambda.horizon());
  auto g = [&](std::int64_t mm) {
    double best = r * static_cast<double>(mm);
    for (std::int64_t i = 1; i <= N; ++i) best = std::min(best, lambda(i + mm) - lambda(i));
    return best;
  };
  const BoundingFunction& h = m.bound;
  if (h.family() == BoundFamily::One) return TrafficModel::vbc(alpha, h);
  std::vector<double> f{1.0};
  for (std::int64_t j = 1;; ++j) {
    double val = h(g(j - 1));
    f.push_back(val);
    if (val < kNegligible || f.size() > kMaxPackets) break;
  }
  const Grid pg{1.0, f.size()};
  return TrafficModel::vbc(alpha, BoundingFunction::sampled(pg, std::move(f), h.decay_rate() * r));
}

TrafficModel superpose(const std::vector<TrafficModel>& models, const Grid& grid) {
  if (models.empty()) throw std::invalid_argument("superpose: no flows");
  for (const auto& m : models)
    if (m.kind != TrafficKind::VWD) throw std::invalid_argument("superpose: flows must be VWD models");
  if (models.size() == 1) return models.front();

  const double F = static_cast<double>(models.size());
  double T = 0.0, inv_sum = 0.0, rmax = 0.0;
  for (const auto& m : models) {
    const IndexCurve& l = m.lambda();
    if (!(l.tail_rate() > 0.0)) throw std::domain_error("superpose: flow with zero long-run spacing");
    T = std::max(T, l(static_cast<std::int64_t>(l.horizon())));
    inv_sum += 1.0 / l.tail_rate();
    rmax = std::max(rmax, l.tail_rate());
  }
  T += 2.0 * grid.max() + rmax;
  const double R = 1.0 / inv_sum;

  // merged arrival epochs of all flows up to T
  std::vector<double> pts;
  for (const auto& m : models) {
    const IndexCurve& l = m.lambda();
    for (std::int64_t k = 1; l(k) <= T; ++k) {
      pts.push_back(l(k));
      if (pts.size() > 10 * kMaxPackets) throw std::domain_error("superpose: aggregate horizon too large");
    }
  }
  std::sort(pts.begin(), pts.end());
  const auto N = pts.size();
  std::vector<double> v(N + 1);
  v[0] = 0.0;
  for (std::size_t n = 1; n <= N; ++n) v[n] = pts[n - 1];
  // beyond the merged range the counts grow by at most (t - T)/R + F, so the declared
  // linear tail from v[N] must stay below T + (n - N - F)*R
  v[N] = std::min(v[N], T - F * R);
  for (std::size_t n = N; n-- > 0;) v[n] = std::min(v[n], v[n + 1]);
  for (auto& x : v) x = std::max(x, 0.0);
  IndexCurve lambda(std::move(v), R);

  std::vector<BoundingFunction> fs;
  std::size_t J = 1;
  for (const auto& m : models) {
    fs.push_back(vwd_to_vbc(m).bound);
    J = std::max(J, static_cast<std::size_t>(std::ceil(fs.back().decay_rate() > 0 ? 40.0 / fs.back().decay_rate() : 0.0)));
  }
  J = std::min(std::max<std::size_t>(J * models.size() + 2, 64), kMaxPackets / 10);
  const Grid pg{1.0, J};
  BoundingFunction f = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) f = min_plus_conv(f, fs[i], pg);

  return TrafficModel::vwd(lambda, vwd_bound_from_vbc(lambda, f, grid));
}

}  // namespace tnc

#include "tnc/service.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "tnc/algebra.hpp"

namespace tnc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRemainder = 1e-12;
// resolution of the slot axis when integrating j
constexpr double kFine = 0.01;
constexpr std::size_t kMaxWindow = 20'000;

void check_pe(double pe) {
  if (!(pe >= 0.0)) throw std::invalid_argument("packet error rate must be >= 0");
  if (!(pe < 1.0)) throw std::domain_error("packet error rate must be < 1");
}

// P{S_u >= m0 + k}, k = 0, 1, ... until negligible; S_u = slots for u packets.
std::vector<double> survival(double pe, std::int64_t u, std::int64_t m0) {
  const double lp = std::log(pe), lq = std::log1p(-pe);
  const auto n = u - 1;
  auto log_pmf = [&](std::int64_t i) {
    return std::lgamma(static_cast<double>(i)) - std::lgamma(static_cast<double>(n + 1)) -
           std::lgamma(static_cast<double>(i - n)) + static_cast<double>(u) * lq + static_cast<double>(i - u) * lp;
  };
  std::vector<double> pmf;
  for (std::int64_t i = std::max(m0, u);; ++i) {
    double t = std::exp(log_pmf(i));
    double r = pe * static_cast<double>(i) / static_cast<double>(i - n);
    pmf.push_back(t);
    if (r < 1.0 && t * r / (1.0 - r) < 1e-16) break;
  }
  // entries below u are 1 - 0 = full mass, handled by the offset
  const auto lead = static_cast<std::size_t>(std::max<std::int64_t>(u - m0, 0));
  std::vector<double> s(lead + pmf.size() + 1, 0.0);
  long double acc = 0.0L;
  for (std::size_t k = pmf.size(); k-- > 0;) {
    acc += pmf[k];
    s[lead + k] = static_cast<double>(acc);
  }
  for (std::size_t k = 0; k < lead; ++k) s[k] = s[lead];
  return s;
}

struct LinkTails {
  double pe, dbar;
  std::vector<std::int64_t> base;          // base[u] = smallest slot count in surv[u]
  std::vector<std::vector<double>> surv;   // surv[u][k] = P{S_u >= base[u] + k}

  LinkTails(double pe_, std::size_t K) : pe(pe_), dbar(1.0 / (1.0 - pe_)), base(K + 1), surv(K + 1) {
    for (std::size_t u = 1; u <= K; ++u) {
      auto ui = static_cast<std::int64_t>(u);
      base[u] = static_cast<std::int64_t>(std::floor(dbar * static_cast<double>(u))) + 1;
      surv[u] = survival(pe, ui, base[u]);
    }
  }

  // P{S_u > dbar*u + y}, y >= 0; the floor is nudged down so rounding never loses mass
  double tail(std::size_t u, double y) const {
    auto m = static_cast<std::int64_t>(std::floor(dbar * static_cast<double>(u) + y - 1e-9)) + 1;
    auto k = m - base[u];
    if (k < 0) k = 0;
    const auto& s = surv[u];
    return static_cast<std::size_t>(k) < s.size() ? s[static_cast<std::size_t>(k)] : 0.0;
  }
};

// Chernoff: P{S_u > (dbar + eta)u + x} <= q^u e^{-theta x}, q = M(theta) e^{-theta(dbar+eta)}.
struct Chernoff {
  double theta, q;
};

Chernoff best_chernoff(double pe, double eta) {
  const double dbar = 1.0 / (1.0 - pe);
  auto logq = [&](double th) {
    return std::log1p(-pe) + th - std::log1p(-pe * std::exp(th)) - th * (dbar + eta);
  };
  const double hi = -std::log(pe);
  auto [th, lq] = boost::math::tools::brent_find_minima(logq, hi * 1e-9, hi * (1.0 - 1e-9), 40);
  return {th, std::exp(lq)};
}

std::size_t window_cutoff(const Chernoff& c) {
  // q^{K+1}/(1-q) <= 1e-10
  double K = std::ceil(std::log(1e-10 * (1.0 - c.q)) / std::log(c.q));
  if (!(K < static_cast<double>(kMaxWindow))) throw std::domain_error("wireless link: eta too small, window cutoff too large");
  return std::max<std::size_t>(static_cast<std::size_t>(K), 1);
}

// windows beyond K via Chernoff (times e^{-theta x})
double remainder(const Chernoff& c, std::size_t K) {
  return std::pow(c.q, static_cast<double>(K + 1)) / (1.0 - c.q);
}

// mass dropped when truncating the survival arrays
double truncation_slack(std::size_t K) { return 1e-16 * static_cast<double>(K); }

}  // namespace

double negbin_tail(double pe, std::int64_t n, double x) {
  check_pe(pe);
  if (n < 0) throw std::invalid_argument("negbin_tail: n must be >= 0");
  if (pe == 0.0) return 0.0;
  const double dbar = 1.0 / (1.0 - pe);
  const auto u = n + 1;
  const double c = dbar * static_cast<double>(u) + std::max(x, 0.0);
  const auto i0 = std::max<std::int64_t>(u, static_cast<std::int64_t>(std::floor(c)) + 1);
  const double lp = std::log(pe), lq = std::log1p(-pe);
  double sum = 0.0;
  for (std::int64_t i = i0;; ++i) {
    double t = std::exp(std::lgamma(static_cast<double>(i)) - std::lgamma(static_cast<double>(n + 1)) -
                        std::lgamma(static_cast<double>(i - n)) + static_cast<double>(u) * lq +
                        static_cast<double>(i - u) * lp);
    sum += t;
    double r = pe * static_cast<double>(i) / static_cast<double>(i - n);
    if (r < 1.0 && t * r / (1.0 - r) < kRemainder) break;
  }
  return std::min(sum, 1.0);
}

ServiceModel wireless_link_ssc(double pe, double eta, double slot, const Grid& grid) {
  check_pe(pe);
  if (!(eta > 0.0) || !(slot > 0.0)) throw std::invalid_argument("wireless_link_ssc: eta and slot must be positive");
  const double dbar = 1.0 / (1.0 - pe);
  auto gamma = IndexCurve::linear((dbar + eta) * slot);
  if (pe == 0.0) return ServiceModel::id(gamma, BoundingFunction::step_at_zero());

  const Chernoff ch = best_chernoff(pe, eta);
  const std::size_t K = window_cutoff(ch);
  const LinkTails lt(pe, K);
  const double rem = remainder(ch, K);

  // j_K(y) = max_{u<=K} P{S_u - dbar*u > y} on the fine slot axis, until negligible
  std::vector<double> jk;
  for (std::size_t i = 0;; ++i) {
    double y = kFine * static_cast<double>(i);
    double best = 0.0;
    for (std::size_t u = 1; u <= K; ++u) best = std::max(best, lt.tail(u, y));
    jk.push_back(best);
    if (best < 1e-14) break;
  }
  // upper Riemann sums of the non-increasing j_K
  std::vector<double> tailint(jk.size() + 1, jk.back() / ch.theta);
  for (std::size_t i = jk.size(); i-- > 0;) tailint[i] = tailint[i + 1] + kFine * jk[i];

  std::vector<double> v(grid.count);
  for (std::size_t g = 0; g < grid.count; ++g) {
    double x = grid.x(g) / slot;
    auto i = static_cast<std::size_t>(std::floor(x / kFine));
    double integral = i < tailint.size() ? tailint[i] : 0.0;
    v[g] = std::min(1.0, (integral + truncation_slack(K)) / eta + rem * std::exp(-ch.theta * x));
  }
  return ServiceModel::id(gamma, BoundingFunction::sampled(grid, std::move(v), ch.theta / slot));
}

ServiceModel wireless_link_strict(double pe, double eta, double slot, const Grid& grid) {
  check_pe(pe);
  if (!(eta > 0.0) || !(slot > 0.0)) throw std::invalid_argument("wireless_link_strict: eta and slot must be positive");
  const double dbar = 1.0 / (1.0 - pe);
  auto gamma = IndexCurve::linear((dbar + eta) * slot);
  if (pe == 0.0) return ServiceModel::strict(gamma, BoundingFunction::step_at_zero());

  const Chernoff ch = best_chernoff(pe, eta);
  const std::size_t K = window_cutoff(ch);
  const LinkTails lt(pe, K);
  const double rem = remainder(ch, K);

  // union over window lengths, so the bound also covers the sup over windows
  std::vector<double> v(grid.count);
  for (std::size_t g = 0; g < grid.count; ++g) {
    double x = grid.x(g) / slot;
    double s = rem * std::exp(-ch.theta * x) + truncation_slack(K);
    for (std::size_t u = 1; u <= K; ++u) s += lt.tail(u, x + eta * static_cast<double>(u));
    v[g] = std::min(1.0, s);
  }
  return ServiceModel::strict(gamma, BoundingFunction::sampled(grid, std::move(v), ch.theta / slot));
}

ServiceModel deterministic_server(double service_time) {
  if (!(service_time > 0.0)) throw std::invalid_argument("deterministic_server: service time must be positive");
  return ServiceModel::strict(IndexCurve::linear(service_time), BoundingFunction::step_at_zero());
}

ServiceModel eta_to_id(const ServiceModel& m) {
  if (m.kind != ServiceKind::ETA) throw std::invalid_argument("eta_to_id: expected an eta service model");
  return ServiceModel::id(m.gamma, m.bound);
}

ServiceModel id_to_eta(const ServiceModel& m, double eta, const Grid& grid) {
  if (m.kind != ServiceKind::ID) throw std::invalid_argument("id_to_eta: expected an i.d service model");
  return ServiceModel::eta_ssc(m.gamma, eta_inflate(m.bound, eta, grid), eta);
}

ServiceModel strict_convert(const ServiceModel& m, ServiceKind target, double eta, const Grid& grid) {
  if (m.kind != ServiceKind::STRICT) throw std::invalid_argument("strict_convert: expected a strict service model");
  switch (target) {
    case ServiceKind::ID: return ServiceModel::id(m.gamma, m.bound);
    case ServiceKind::ETA: return ServiceModel::eta_ssc(m.gamma, eta_inflate(m.bound, eta, grid), eta);
    case ServiceKind::STRICT: return m;
  }
  return m;
}

}  // namespace tnc

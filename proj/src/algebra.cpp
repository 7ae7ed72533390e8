#include "tnc/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace tnc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxHorizon = 50'000'000;

// gamma'(k) = gamma(k+1)
IndexCurve shift_left(const IndexCurve& c) {
  std::vector<double> v(c.horizon() + 1);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = c(static_cast<std::int64_t>(k) + 1);
  return IndexCurve(std::move(v), c.tail_rate());
}

double harmonic_decay(double a, double b) {
  if (std::isinf(a)) return b;
  if (std::isinf(b)) return a;
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return a * b / (a + b);
}

}  // namespace

IndexCurve max_plus_conv(const IndexCurve& f, const IndexCurve& g) {
  const auto Nf = static_cast<std::int64_t>(f.horizon());
  const auto Ng = static_cast<std::int64_t>(g.horizon());
  const double rf = f.tail_rate(), rg = g.tail_rate();
  const std::int64_t H0 = Nf + Ng;

  // Beyond H0 the sup is max(P + rg*n, Q + rf*n).
  double P = -kInf, Q = -kInf;
  for (std::int64_t m = 0; m <= Nf; ++m) P = std::max(P, f(m) - rg * static_cast<double>(m));
  P += g(Ng) - rg * static_cast<double>(Ng);
  for (std::int64_t k = 0; k <= Ng; ++k) Q = std::max(Q, g(k) - rf * static_cast<double>(k));
  Q += f(Nf) - rf * static_cast<double>(Nf);

  std::int64_t H = H0;
  if (rf != rg) {
    double cross = rf > rg ? (P - Q) / (rf - rg) : (Q - P) / (rg - rf);
    if (cross > static_cast<double>(H)) H = static_cast<std::int64_t>(std::ceil(cross));
  }
  if (H > static_cast<std::int64_t>(kMaxHorizon)) throw std::domain_error("max_plus_conv: result horizon too large");

  std::vector<double> v(static_cast<std::size_t>(H) + 1);
  for (std::int64_t n = 0; n <= H; ++n) {
    double best;
    if (n <= H0) {
      best = -kInf;
      for (std::int64_t m = 0; m <= n; ++m) best = std::max(best, f(m) + g(n - m));
    } else {
      best = std::max(P + rg * static_cast<double>(n), Q + rf * static_cast<double>(n));
    }
    v[static_cast<std::size_t>(n)] = best;
  }
  return IndexCurve(std::move(v), std::max(rf, rg));
}

IndexCurve max_plus_deconv(const IndexCurve& f, const IndexCurve& g, std::size_t m_max) {
  if (m_max < 1) throw std::invalid_argument("max_plus_deconv: m_max must be >= 1");
  if (f.tail_rate() < g.tail_rate()) throw std::domain_error("max_plus_deconv: f grows slower than g, infimum diverges");
  const auto Nf = static_cast<std::int64_t>(f.horizon());
  const auto M = static_cast<std::int64_t>(std::max({m_max, f.horizon(), g.horizon()}));
  // For n >= Nf the unclipped result grows at f's tail rate, so stop once it is past
  // the horizon and no longer clipped.
  std::vector<double> v;
  for (std::int64_t n = 0;; ++n) {
    double best = kInf;
    for (std::int64_t m = 0; m <= M; ++m) best = std::min(best, f(n + m) - g(m));
    v.push_back(std::max(best, 0.0));
    if (n >= Nf && (best >= 0.0 || f.tail_rate() == 0.0)) break;
    if (v.size() > kMaxHorizon) throw std::domain_error("max_plus_deconv: result horizon too large");
  }
  return IndexCurve(std::move(v), f.tail_rate());
}

IndexCurve arrival_service_conv(const IndexCurve& a, const IndexCurve& gamma) {
  return max_plus_conv(a, shift_left(gamma));
}

IndexCurve service_conv(const IndexCurve& g1, const IndexCurve& g2) {
  IndexCurve s = max_plus_conv(shift_left(g1), shift_left(g2));
  std::vector<double> v(s.horizon() + 2);
  v[0] = 0.0;
  for (std::size_t p = 1; p < v.size(); ++p) v[p] = s(static_cast<std::int64_t>(p) - 1);
  return IndexCurve(std::move(v), s.tail_rate());
}

double min_plus_deconv_at(const IndexCurve& f, const IndexCurve& g, std::int64_t t, std::size_t k_max) {
  if (f.tail_rate() > g.tail_rate()) throw std::domain_error("min_plus_deconv_at: f grows faster than g, supremum diverges");
  const auto K = static_cast<std::int64_t>(std::max({k_max, f.horizon(), g.horizon()}));
  double best = -kInf;
  for (std::int64_t k = 0; k <= K; ++k) best = std::max(best, f(k + t) - g(k));
  return best;
}

std::int64_t horizontal_distance(const IndexCurve& lambda, const IndexCurve& gamma, double x) {
  if (stability_margin(lambda, gamma) > 0.0) throw std::domain_error("horizontal_distance: gamma outgrows lambda, distance diverges");
  const auto Nl = static_cast<std::int64_t>(lambda.horizon());
  const auto vals = lambda.values();
  const double rl = lambda.tail_rate();
  const auto M = std::max<std::int64_t>(Nl, static_cast<std::int64_t>(gamma.horizon())) + 1;
  std::int64_t best = 0;
  for (std::int64_t m = 0; m <= M; ++m) {
    double target = gamma(m) + x;
    std::int64_t idx;
    if (lambda(m) >= target) {
      idx = m;
    } else if (m <= Nl && vals.back() >= target) {
      idx = std::lower_bound(vals.begin() + m, vals.end(), target) - vals.begin();
    } else {
      if (rl <= 0.0) throw std::domain_error("horizontal_distance: lambda never reaches gamma + x");
      double need = (target - vals.back()) / rl;
      idx = std::max(Nl + static_cast<std::int64_t>(std::ceil(need - 1e-12)), m);
      while (lambda(idx) < target) ++idx;
    }
    best = std::max(best, idx - m);
  }
  return best;
}

double stability_margin(const IndexCurve& lambda, const IndexCurve& gamma) {
  return gamma.tail_rate() - lambda.tail_rate();
}

BoundingFunction min_plus_conv(const BoundingFunction& h1, const BoundingFunction& h2, const Grid& grid) {
  if (h1.is_step()) return h2;
  if (h2.is_step()) return h1;
  if (h1.family() == BoundFamily::One || h2.family() == BoundFamily::One) return BoundingFunction::one();
  // a shift of either operand shifts the result
  if (auto s = h1.shift_params()) return min_plus_conv(s->first, h2, grid).shifted(s->second);
  if (auto s = h2.shift_params()) return min_plus_conv(h1, s->first, grid).shifted(s->second);
  auto a = h1.sample(grid);
  auto b = h2.sample(grid);
  std::vector<double> r(grid.count);
  for (std::size_t k = 0; k < grid.count; ++k) {
    double best = kInf;
    for (std::size_t i = 0; i <= k; ++i) best = std::min(best, a[i] + b[k - i]);
    r[k] = std::min(best, 1.0);
  }
  return BoundingFunction::sampled(grid, std::move(r), harmonic_decay(h1.decay_rate(), h2.decay_rate()));
}

BoundingFunction independent_combine(const BoundingFunction& j, const BoundingFunction& h, const Grid& grid) {
  if (j.is_step()) return h;
  if (h.is_step()) return j;
  if (j.family() == BoundFamily::One || h.family() == BoundFamily::One) return BoundingFunction::one();
  if (auto s = j.shift_params()) return independent_combine(s->first, h, grid).shifted(s->second);
  if (auto s = h.shift_params()) return independent_combine(j, s->first, grid).shifted(s->second);
  // distribution-like functions on the lattice; G jumps at each grid point
  auto F = h.sample(grid);
  auto G = j.sample(grid);
  for (auto& v : F) v = 1.0 - v;
  for (auto& v : G) v = 1.0 - v;
  std::vector<double> dG(grid.count);
  dG[0] = G[0];
  for (std::size_t i = 1; i < grid.count; ++i) dG[i] = G[i] - G[i - 1];
  std::vector<double> r(grid.count);
  for (std::size_t k = 0; k < grid.count; ++k) {
    double conv = 0.0;
    for (std::size_t i = 0; i <= k; ++i) conv += F[k - i] * dG[i];
    r[k] = 1.0 - conv;
  }
  return BoundingFunction::sampled(grid, std::move(r), harmonic_decay(j.decay_rate(), h.decay_rate()));
}

BoundingFunction eta_inflate(const BoundingFunction& h, double eta, const Grid& grid) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta_inflate: eta must be positive");
  if (h.bound_class() != BoundClass::GBar) throw std::domain_error("eta_inflate: bound has no integrable tail");
  if (h.is_step()) return h;
  if (auto p = h.exponential_params(); p && p->first <= 1.0) {
    auto [a, theta] = *p;
    return BoundingFunction::exponential(a * (1.0 + 1.0 / (eta * theta)), theta);
  }
  auto v = h.sample(grid);
  auto t = h.tail_integrals(grid);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::min(1.0, v[i] + t[i] / eta);
  return BoundingFunction::sampled(grid, std::move(v), h.decay_rate());
}

}  // namespace tnc

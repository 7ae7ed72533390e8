#include "tnc/bounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace tnc {

namespace detail {

struct BoundImpl {
  virtual ~BoundImpl() = default;
  // Raw value for x >= 0, before clipping.
  virtual double value(double x) const = 0;
  // Integral over [x, inf) for x >= 0.
  virtual double tail(double x) const = 0;
  virtual std::vector<double> tails(const Grid& g) const {
    std::vector<double> out(g.count);
    for (std::size_t i = 0; i < g.count; ++i) out[i] = tail(g.x(i));
    return out;
  }
  virtual BoundClass cls() const = 0;
  virtual BoundFamily family() const = 0;
  virtual double decay() const = 0;
  virtual std::string describe() const = 0;
};

}  // namespace detail

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

struct StepImpl final : detail::BoundImpl {
  double value(double) const override { return 0.0; }
  double tail(double) const override { return 0.0; }
  BoundClass cls() const override { return BoundClass::GBar; }
  BoundFamily family() const override { return BoundFamily::Step; }
  double decay() const override { return kInf; }
  std::string describe() const override { return "step"; }
};

struct OneImpl final : detail::BoundImpl {
  double value(double) const override { return 1.0; }
  double tail(double) const override { throw std::domain_error("tail integral of the trivial bound diverges"); }
  BoundClass cls() const override { return BoundClass::FBar; }
  BoundFamily family() const override { return BoundFamily::One; }
  double decay() const override { return 0.0; }
  std::string describe() const override { return "one"; }
};

struct ExpImpl final : detail::BoundImpl {
  double a, theta;
  ExpImpl(double a_, double t_) : a(a_), theta(t_) {}
  double value(double x) const override { return a * std::exp(-theta * x); }
  double tail(double x) const override {
    if (a == 0.0) return 0.0;
    if (theta <= 0.0) throw std::domain_error("tail integral of a non-decaying exponential diverges");
    // below x0 the clip at 1 is active
    double x0 = a > 1.0 ? std::log(a) / theta : 0.0;
    if (x >= x0) return a / theta * std::exp(-theta * x);
    return (x0 - x) + 1.0 / theta;
  }
  BoundClass cls() const override { return theta > 0.0 || a == 0.0 ? BoundClass::GBar : BoundClass::FBar; }
  BoundFamily family() const override { return BoundFamily::Exponential; }
  double decay() const override { return a == 0.0 ? kInf : theta; }
  std::string describe() const override {
    std::ostringstream os;
    os << "exp(a=" << a << ",theta=" << theta << ")";
    return os.str();
  }
};

// The alternating sum needs roughly 2*mu*x/ln(10) guard digits.
using Mp50 = boost::multiprecision::cpp_bin_float_50;
using Mp130 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<130>>;

template <class F>
double md1_cdf(double mu, double hbar, double x) {
  auto k = static_cast<long>(std::floor(x / hbar));
  F muF(mu), xF(x), hF(hbar);
  F e0 = exp(muF * xF);
  F r = exp(-muF * hF);
  F sum = 0, ri = 1, fact = 1;
  for (long i = 0; i <= k; ++i) {
    if (i > 0) {
      ri *= r;
      fact *= i;
    }
    F u = muF * (xF - F(i) * hF);
    F term = e0 * ri * pow(u, i) / fact;
    if (i % 2) sum -= term;
    else sum += term;
  }
  return static_cast<double>(F(1) - F(1 - mu * hbar) * sum);
}

struct MD1Impl final : detail::BoundImpl {
  double mu, hbar, s;
  double x_lim, h_lim;
  static constexpr double kExactReach = 120.0;  // mu * x handled by the 130-digit path

  MD1Impl(double mu_, double h_) : mu(mu_), hbar(h_), s(md1_decay_rate(mu_, h_)) {
    x_lim = kExactReach / mu;
    h_lim = exact(x_lim);
  }
  double exact(double x) const {
    double v = mu * x <= 30.0 ? md1_cdf<Mp50>(mu, hbar, x) : md1_cdf<Mp130>(mu, hbar, x);
    return std::max(v, 0.0);
  }
  double value(double x) const override {
    if (x <= x_lim) return exact(x);
    // Kingman: the waiting tail never exceeds exp(-s x).
    return std::min(h_lim, std::exp(-s * x));
  }
  double tail(double x) const override { return tails_from(x); }
  double tails_from(double x) const {
    // piecewise Gauss on the kinks at multiples of hbar, then the Kingman remainder
    double far = std::max(x, 0.0) + 40.0 / s;
    double total = 0.0, lo = x;
    while (lo < far) {
      double hi = (std::floor(lo / hbar) + 1.0) * hbar;
      hi = std::min(hi, far);
      if (hi - lo > 1e-15)
        total += boost::math::quadrature::gauss<double, 10>::integrate([this](double y) { return value(y); }, lo, hi);
      lo = hi;
    }
    return total + std::exp(-s * far) / s;
  }
  std::vector<double> tails(const Grid& g) const override {
    std::vector<double> out(g.count);
    double far = g.max() + 40.0 / s;
    double acc = 0.0;
    // remainder beyond the grid
    {
      double lo = g.max();
      while (lo < far) {
        double hi = std::min((std::floor(lo / hbar) + 1.0) * hbar, far);
        if (hi - lo > 1e-15)
          acc += boost::math::quadrature::gauss<double, 10>::integrate([this](double y) { return value(y); }, lo, hi);
        lo = hi;
      }
      acc += std::exp(-s * far) / s;
    }
    out[g.count - 1] = acc;
    for (std::size_t i = g.count - 1; i-- > 0;) {
      double lo = g.x(i), hi = g.x(i + 1);
      double seg = 0.0;
      double cut = (std::floor(lo / hbar) + 1.0) * hbar;
      auto f = [this](double y) { return value(y); };
      if (cut < hi) {
        seg += boost::math::quadrature::gauss<double, 10>::integrate(f, lo, cut);
        seg += boost::math::quadrature::gauss<double, 10>::integrate(f, cut, hi);
      } else {
        seg += boost::math::quadrature::gauss<double, 10>::integrate(f, lo, hi);
      }
      acc += seg;
      out[i] = acc;
    }
    return out;
  }
  BoundClass cls() const override { return BoundClass::GBar; }
  BoundFamily family() const override { return BoundFamily::MD1Wait; }
  double decay() const override { return s; }
  std::string describe() const override {
    std::ostringstream os;
    os << "md1(mu=" << mu << ",hbar=" << hbar << ")";
    return os.str();
  }
};

struct ScaledImpl final : detail::BoundImpl {
  std::shared_ptr<const detail::BoundImpl> inner;
  double rho;
  ScaledImpl(std::shared_ptr<const detail::BoundImpl> i, double r) : inner(std::move(i)), rho(r) {}
  double value(double x) const override { return inner->value(rho * x); }
  double tail(double x) const override { return inner->tail(rho * x) / rho; }
  BoundClass cls() const override { return inner->cls(); }
  BoundFamily family() const override { return BoundFamily::Scaled; }
  double decay() const override { return inner->decay() * rho; }
  std::string describe() const override {
    std::ostringstream os;
    os << inner->describe() << "(" << rho << "*x)";
    return os.str();
  }
};

struct ShiftedImpl final : detail::BoundImpl {
  std::shared_ptr<const detail::BoundImpl> inner;
  double c;
  ShiftedImpl(std::shared_ptr<const detail::BoundImpl> i, double c_) : inner(std::move(i)), c(c_) {}
  double value(double x) const override { return x < c ? 1.0 : inner->value(x - c); }
  double tail(double x) const override { return x < c ? (c - x) + inner->tail(0.0) : inner->tail(x - c); }
  BoundClass cls() const override { return inner->cls(); }
  BoundFamily family() const override { return BoundFamily::Shifted; }
  double decay() const override { return inner->decay(); }
  std::string describe() const override {
    std::ostringstream os;
    os << inner->describe() << "(x-" << c << ")";
    return os.str();
  }
};

struct SampledImpl final : detail::BoundImpl {
  Grid grid;
  std::vector<double> v;
  double theta;
  std::vector<double> suffix;  // integral over [x_i, inf)

  SampledImpl(Grid g, std::vector<double> vals, double t) : grid(g), v(std::move(vals)), theta(t) {
    double far = far_tail();
    suffix.assign(v.size(), 0.0);
    suffix.back() = far;
    for (std::size_t i = v.size() - 1; i-- > 0;) suffix[i] = suffix[i + 1] + v[i] * grid.step;
  }
  double decay_factor(double d) const { return d > 0.0 ? std::exp(-theta * d) : 1.0; }
  double far_tail() const {
    if (v.back() == 0.0) return 0.0;
    if (theta <= 0.0) return kInf;
    return v.back() / theta;
  }
  double value(double x) const override {
    double xl = grid.max();
    if (x >= xl) {
      if (v.back() == 0.0) return 0.0;
      if (theta <= 0.0) return v.back();
      return v.back() * decay_factor(x - xl);
    }
    auto i = static_cast<std::size_t>(std::floor(x / grid.step + 1e-9));
    return v[std::min(i, v.size() - 1)];
  }
  double tail(double x) const override {
    if (cls() == BoundClass::FBar) throw std::domain_error("tail integral of a non-integrable sampled bound diverges");
    double xl = grid.max();
    if (x >= xl) return v.back() == 0.0 ? 0.0 : v.back() * decay_factor(x - xl) / theta;
    auto i = static_cast<std::size_t>(std::floor(x / grid.step + 1e-9));
    i = std::min(i, v.size() - 1);
    double next = grid.x(i + 1);
    return std::max(next - x, 0.0) * v[i] + suffix[i + 1];
  }
  BoundClass cls() const override { return v.back() == 0.0 || theta > 0.0 ? BoundClass::GBar : BoundClass::FBar; }
  BoundFamily family() const override { return BoundFamily::Sampled; }
  double decay() const override { return v.back() == 0.0 ? kInf : theta; }
  std::string describe() const override {
    std::ostringstream os;
    os << "sampled(step=" << grid.step << ",n=" << grid.count << ",decay=" << theta << ")";
    return os.str();
  }
};

}  // namespace

double md1_decay_rate(double mu, double hbar) {
  double rho = mu * hbar;
  if (!(mu > 0.0) || !(hbar > 0.0) || !(rho < 1.0)) throw std::invalid_argument("md1: need mu > 0, hbar > 0, mu*hbar < 1");
  auto g = [&](double s) { return mu * std::expm1(s * hbar) - s; };
  // g < 0 just right of 0 when rho < 1; grow the bracket until g > 0
  double lo = 1e-12 / hbar, hi = 1.0 / hbar;
  while (g(hi) <= 0.0) hi *= 2.0;
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  // lower end of the bracket keeps exp(-s x) an upper bound
  return r.first;
}

BoundingFunction BoundingFunction::step_at_zero() {
  static const auto impl = std::make_shared<const StepImpl>();
  return BoundingFunction(impl);
}

BoundingFunction BoundingFunction::one() {
  static const auto impl = std::make_shared<const OneImpl>();
  return BoundingFunction(impl);
}

BoundingFunction BoundingFunction::exponential(double a, double theta) {
  if (!(a >= 0.0) || !(theta >= 0.0) || !std::isfinite(a) || !std::isfinite(theta))
    throw std::invalid_argument("exponential bound: need a >= 0, theta >= 0");
  return BoundingFunction(std::make_shared<const ExpImpl>(a, theta));
}

BoundingFunction BoundingFunction::md1_wait(double mu, double hbar) {
  return BoundingFunction(std::make_shared<const MD1Impl>(mu, hbar));
}

BoundingFunction BoundingFunction::sampled(Grid grid, std::vector<double> values, double tail_decay) {
  if (values.size() != grid.count || values.empty()) throw std::invalid_argument("sampled bound: values do not match grid");
  if (!(grid.step > 0.0)) throw std::invalid_argument("sampled bound: grid step must be positive");
  if (!(tail_decay >= 0.0)) throw std::invalid_argument("sampled bound: tail_decay must be >= 0");
  double run = 0.0;
  for (std::size_t i = values.size(); i-- > 0;) {
    if (std::isnan(values[i])) throw std::invalid_argument("sampled bound: NaN value");
    run = std::max(run, clip01(values[i]));
    values[i] = run;
  }
  return BoundingFunction(std::make_shared<const SampledImpl>(grid, std::move(values), tail_decay));
}

BoundingFunction BoundingFunction::scaled(double rho) const {
  if (!(rho > 0.0)) throw std::invalid_argument("scaled bound: rho must be positive");
  if (is_step() || family() == BoundFamily::One) return *this;
  if (auto p = exponential_params()) return exponential(p->first, p->second * rho);
  return BoundingFunction(std::make_shared<const ScaledImpl>(impl_, rho));
}

BoundingFunction BoundingFunction::shifted(double c) const {
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("shifted bound: shift must be finite and >= 0");
  if (c == 0.0 || family() == BoundFamily::One) return *this;
  if (auto* sh = dynamic_cast<const ShiftedImpl*>(impl_.get()))
    return BoundingFunction(std::make_shared<const ShiftedImpl>(sh->inner, sh->c + c));
  return BoundingFunction(std::make_shared<const ShiftedImpl>(impl_, c));
}

double BoundingFunction::operator()(double x) const {
  if (x < 0.0) return 1.0;
  return clip01(impl_->value(x));
}

double BoundingFunction::tail_integral(double x) const {
  if (impl_->cls() == BoundClass::FBar) throw std::domain_error("tail integral of an FBar bound diverges");
  if (x < 0.0) return -x + impl_->tail(0.0);
  return impl_->tail(x);
}

std::vector<double> BoundingFunction::sample(const Grid& grid) const {
  std::vector<double> out(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) out[i] = (*this)(grid.x(i));
  return out;
}

std::vector<double> BoundingFunction::tail_integrals(const Grid& grid) const {
  if (impl_->cls() == BoundClass::FBar) throw std::domain_error("tail integral of an FBar bound diverges");
  return impl_->tails(grid);
}

BoundClass BoundingFunction::bound_class() const { return impl_->cls(); }
BoundFamily BoundingFunction::family() const { return impl_->family(); }
double BoundingFunction::decay_rate() const { return impl_->decay(); }
std::string BoundingFunction::describe() const { return impl_->describe(); }

std::optional<std::pair<BoundingFunction, double>> BoundingFunction::shift_params() const {
  if (auto* sh = dynamic_cast<const ShiftedImpl*>(impl_.get())) return std::make_pair(BoundingFunction(sh->inner), sh->c);
  return std::nullopt;
}

std::optional<std::pair<double, double>> BoundingFunction::exponential_params() const {
  if (auto* e = dynamic_cast<const ExpImpl*>(impl_.get())) return std::make_pair(e->a, e->theta);
  return std::nullopt;
}

}  // namespace tnc

#include "tnc/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tnc {

namespace {

// Absorbs rounding when a tail position lands on an integer jump.
constexpr double kJumpSlack = 1e-9;

}  // namespace

Grid Grid::up_to(double x_max, double step) {
  if (!(step > 0.0) || !(x_max >= 0.0)) throw std::invalid_argument("grid: need step > 0 and x_max >= 0");
  auto n = static_cast<std::size_t>(std::ceil(x_max / step - 1e-9));
  return Grid{step, n + 1};
}

bool operator==(const Grid& a, const Grid& b) {
  return a.count == b.count && std::abs(a.step - b.step) <= 1e-12 * std::max(1.0, a.step);
}

IndexCurve::IndexCurve(std::vector<double> values, double tail_rate)
    : values_(std::move(values)), tail_rate_(tail_rate) {
  if (values_.empty()) throw std::invalid_argument("IndexCurve: empty values");
  if (!(values_[0] >= 0.0)) throw std::invalid_argument("IndexCurve: values[0] must be >= 0");
  if (!(tail_rate_ >= 0.0) || !std::isfinite(tail_rate_)) throw std::invalid_argument("IndexCurve: tail_rate must be finite and >= 0");
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (!(values_[i] >= values_[i - 1]))
      throw std::invalid_argument("IndexCurve: values decrease at n=" + std::to_string(i));
  }
}

IndexCurve IndexCurve::linear(double rate) { return IndexCurve({0.0}, rate); }

IndexCurve IndexCurve::affine(double rate, double offset) {
  return IndexCurve({0.0, offset + rate}, rate);
}

IndexCurve IndexCurve::from_function(std::size_t horizon, double tail_rate,
                                     const std::function<double(std::int64_t)>& f) {
  std::vector<double> v(horizon + 1);
  for (std::size_t n = 0; n <= horizon; ++n) v[n] = f(static_cast<std::int64_t>(n));
  return IndexCurve(std::move(v), tail_rate);
}

double IndexCurve::operator()(std::int64_t n) const {
  if (n < 0) return 0.0;
  auto N = static_cast<std::int64_t>(horizon());
  if (n <= N) return values_[static_cast<std::size_t>(n)];
  return values_.back() + tail_rate_ * static_cast<double>(n - N);
}

double IndexCurve::at(double x) const {
  if (x < 0.0) return 0.0;
  double fl = std::floor(x);
  auto n = static_cast<std::int64_t>(fl);
  double lo = (*this)(n);
  double frac = x - fl;
  if (frac == 0.0) return lo;
  return lo + frac * ((*this)(n + 1) - lo);
}

IndexCurve IndexCurve::extended(std::size_t horizon) const {
  if (horizon <= this->horizon()) return *this;
  std::vector<double> v(horizon + 1);
  for (std::size_t n = 0; n <= horizon; ++n) v[n] = (*this)(static_cast<std::int64_t>(n));
  return IndexCurve(std::move(v), tail_rate_);
}

IndexCurve IndexCurve::plus_rate(double eta) const {
  std::vector<double> v(values_);
  for (std::size_t n = 0; n < v.size(); ++n) v[n] += eta * static_cast<double>(n);
  return IndexCurve(std::move(v), tail_rate_ + eta);
}

TimeCurve::TimeCurve(std::vector<double> times, std::vector<double> values, double tail_rate, Interp interp)
    : times_(std::move(times)), values_(std::move(values)), tail_rate_(tail_rate), interp_(interp) {
  if (times_.empty() || times_.size() != values_.size())
    throw std::invalid_argument("TimeCurve: times/values size mismatch");
  if (times_[0] != 0.0) throw std::invalid_argument("TimeCurve: first breakpoint must be t=0");
  if (!(values_[0] >= 0.0) || !(tail_rate_ >= 0.0)) throw std::invalid_argument("TimeCurve: negative value or rate");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw std::invalid_argument("TimeCurve: breakpoints must increase");
    if (!(values_[i] >= values_[i - 1])) throw std::invalid_argument("TimeCurve: values decrease");
  }
}

TimeCurve TimeCurve::linear(double rate) { return TimeCurve({0.0}, {0.0}, rate, Interp::Linear); }

double TimeCurve::operator()(double t) const {
  if (t < 0.0) return 0.0;
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  auto i = static_cast<std::size_t>(it - times_.begin()) - 1;
  if (i + 1 == times_.size()) {
    double dt = t - times_.back();
    if (interp_ == Interp::Step) return values_.back() + std::floor(dt * tail_rate_ + kJumpSlack);
    return values_.back() + tail_rate_ * dt;
  }
  if (interp_ == Interp::Step) return values_[i];
  double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

double TimeCurve::lower_inverse(double y) const {
  if (y <= values_[0]) return 0.0;
  auto it = std::lower_bound(values_.begin(), values_.end(), y);
  if (it != values_.end()) {
    auto i = static_cast<std::size_t>(it - values_.begin());
    if (interp_ == Interp::Step) return times_[i];
    double w = (y - values_[i - 1]) / (values_[i] - values_[i - 1]);
    return times_[i - 1] + w * (times_[i] - times_[i - 1]);
  }
  if (tail_rate_ <= 0.0) return std::numeric_limits<double>::infinity();
  double need = y - values_.back();
  if (interp_ == Interp::Step) return times_.back() + std::ceil(need - kJumpSlack) / tail_rate_;
  return times_.back() + need / tail_rate_;
}

double pseudo_inverse(std::span<const double> xs, std::span<const double> zs, double y, Interp interp) {
  if (xs.empty() || xs.size() != zs.size()) throw std::invalid_argument("pseudo_inverse: bad samples");
  if (zs[0] >= y) return xs[0];
  for (std::size_t i = 1; i < zs.size(); ++i) {
    if (zs[i] >= y) {
      if (interp == Interp::Step) return xs[i];
      double w = (y - zs[i - 1]) / (zs[i] - zs[i - 1]);
      return xs[i - 1] + w * (xs[i] - xs[i - 1]);
    }
  }
  return xs.back();
}

}  // namespace tnc

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace tnc {

enum class Interp { Linear, Step };

// Uniform grid 0, step, 2*step, ... (count points).
struct Grid {
  double step = 0.1;
  std::size_t count = 1;

  double x(std::size_t i) const { return step * static_cast<double>(i); }
  double max() const { return x(count - 1); }

  // Smallest uniform grid reaching x_max.
  static Grid up_to(double x_max, double step);
};

bool operator==(const Grid& a, const Grid& b);

// Cumulative time over packet index. values[0..N], linear tail beyond N, 0 for n < 0.
class IndexCurve {
 public:
  IndexCurve() : values_{0.0}, tail_rate_(0.0) {}
  IndexCurve(std::vector<double> values, double tail_rate);

  // c(n) = rate * n.
  static IndexCurve linear(double rate);
  // c(0) = 0, c(n) = offset + rate * n for n >= 1.
  static IndexCurve affine(double rate, double offset);
  static IndexCurve from_function(std::size_t horizon, double tail_rate,
                                  const std::function<double(std::int64_t)>& f);

  double operator()(std::int64_t n) const;
  // Piecewise-linear extension to real arguments (0 below 0).
  double at(double x) const;

  std::size_t horizon() const { return values_.size() - 1; }
  double tail_rate() const { return tail_rate_; }
  std::span<const double> values() const { return values_; }

  IndexCurve extended(std::size_t horizon) const;
  // c(n) + eta * n
  IndexCurve plus_rate(double eta) const;

 private:
  std::vector<double> values_;
  double tail_rate_;
};

// Packet count over time. Breakpoints t_0 = 0 < t_1 < ...; beyond the last breakpoint the
// curve continues at tail_rate (linearly, or as unit jumps every 1/tail_rate for steps).
class TimeCurve {
 public:
  TimeCurve(std::vector<double> times, std::vector<double> values, double tail_rate, Interp interp);

  static TimeCurve linear(double rate);

  double operator()(double t) const;
  // inf{t >= 0 : c(t) >= y}
  double lower_inverse(double y) const;

  Interp interp() const { return interp_; }
  double tail_rate() const { return tail_rate_; }
  std::span<const double> times() const { return times_; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  double tail_rate_;
  Interp interp_;
};

// Lower pseudo-inverse inf{x >= xs[0] : z(x) >= y} of a nondecreasing map sampled at xs,
// read either as linear interpolation or as a right-continuous staircase.
// Returns xs.back() when no sample reaches y.
double pseudo_inverse(std::span<const double> xs, std::span<const double> zs, double y,
                      Interp interp = Interp::Linear);

}  // namespace tnc

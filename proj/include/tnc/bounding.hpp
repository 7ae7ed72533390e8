#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tnc/curve.hpp"

namespace tnc {

// FBar: any non-increasing bound. GBar: additionally integrable tail.
enum class BoundClass { FBar, GBar };

enum class BoundFamily { Step, One, Exponential, MD1Wait, Scaled, Shifted, Sampled };

namespace detail {
struct BoundImpl;
}

// Non-increasing violation-probability envelope, 1 for x < 0, values clipped to [0,1].
// Immutable; copies share the representation.
class BoundingFunction {
 public:
  // 1 for x < 0, 0 from x = 0 on (deterministic guarantee).
  static BoundingFunction step_at_zero();
  // Identically 1 (no information).
  static BoundingFunction one();
  // min(1, a * exp(-theta * x))
  static BoundingFunction exponential(double a, double theta);
  // Stationary M/D/1 waiting-time tail for Poisson(mu) input and deterministic service hbar.
  static BoundingFunction md1_wait(double mu, double hbar);
  // Left-continuous staircase through the samples; beyond the grid the last value decays as
  // exp(-tail_decay * (x - x_last)). Values are clipped to [0,1] and replaced by their smallest
  // non-increasing majorant.
  static BoundingFunction sampled(Grid grid, std::vector<double> values, double tail_decay);

  // x -> f(rho * x)
  BoundingFunction scaled(double rho) const;
  // x -> f(x - c), so 1 below c
  BoundingFunction shifted(double c) const;

  double operator()(double x) const;
  // Integral of the clipped function over [x, inf). Throws std::domain_error for FBar.
  double tail_integral(double x) const;
  std::vector<double> sample(const Grid& grid) const;
  std::vector<double> tail_integrals(const Grid& grid) const;

  BoundClass bound_class() const;
  BoundFamily family() const;
  // Asymptotic exponential decay rate; +inf for compact support, 0 when none is known.
  double decay_rate() const;
  // (inner, c) when the family is Shifted.
  std::optional<std::pair<BoundingFunction, double>> shift_params() const;
  // (a, theta) when the family is Exponential.
  std::optional<std::pair<double, double>> exponential_params() const;
  bool is_step() const { return family() == BoundFamily::Step; }
  std::string describe() const;

 private:
  explicit BoundingFunction(std::shared_ptr<const detail::BoundImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::BoundImpl> impl_;
};

// Unique positive root s of mu * (exp(s * hbar) - 1) = s (requires mu * hbar < 1).
double md1_decay_rate(double mu, double hbar);

}  // namespace tnc

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "tnc/bounding.hpp"

namespace tnc::sim {

struct EmpiricalCCDF {
  std::vector<double> x;
  std::vector<double> ccdf;  // fraction of samples > x
  std::size_t n_samples = 0;
  double dkw_epsilon = 0.0;
};

// sqrt(ln(2/alpha) / (2n))
double dkw_epsilon(std::size_t n, double alpha);

// Needs at least 100 samples.
EmpiricalCCDF empirical_ccdf(std::vector<double> samples, const std::vector<double>& x, double alpha);

struct Dominance {
  bool pass = true;
  double worst_margin = 0.0;  // min over x of bound(x) - (ccdf(x) - eps)
  double worst_x = 0.0;
};

// Passes iff ccdf(x) - eps <= bound(x) at every x.
Dominance check_dominance(const BoundingFunction& bound, const EmpiricalCCDF& c);
Dominance check_dominance(const std::vector<double>& bound, const EmpiricalCCDF& c);

// Drops the first fraction of a per-replication sample vector.
std::vector<double> after_warmup(const std::vector<double>& v, double fraction);

// Runs fn(r) for r = 0..R-1 on worker threads. The first exception is rethrown after all
// workers finish.
void parallel_for(std::size_t R, const std::function<void(std::size_t)>& fn);
// As parallel_for; results are returned in replication order.
std::vector<std::vector<double>> run_replications(std::size_t R, const std::function<std::vector<double>(std::size_t)>& fn);

// Concatenates per-replication samples in replication order.
std::vector<double> pool(const std::vector<std::vector<double>>& parts);

}  // namespace tnc::sim

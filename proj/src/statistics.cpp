#include "tnc/statistics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace tnc::sim {

double dkw_epsilon(std::size_t n, double alpha) {
  if (n == 0 || !(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("dkw_epsilon: need n > 0 and 0 < alpha < 1");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

EmpiricalCCDF empirical_ccdf(std::vector<double> samples, const std::vector<double>& x, double alpha) {
  if (samples.size() < 100) throw std::invalid_argument("empirical_ccdf: need at least 100 samples");
  std::sort(samples.begin(), samples.end());
  EmpiricalCCDF c{x, std::vector<double>(x.size()), samples.size(), dkw_epsilon(samples.size(), alpha)};
  const auto n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto above = samples.end() - std::upper_bound(samples.begin(), samples.end(), x[i]);
    c.ccdf[i] = static_cast<double>(above) / n;
  }
  return c;
}

Dominance check_dominance(const std::vector<double>& bound, const EmpiricalCCDF& c) {
  if (bound.size() != c.x.size()) throw std::invalid_argument("check_dominance: grid mismatch");
  Dominance d{true, std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t i = 0; i < bound.size(); ++i) {
    double margin = bound[i] - (c.ccdf[i] - c.dkw_epsilon);
    if (margin < d.worst_margin) {
      d.worst_margin = margin;
      d.worst_x = c.x[i];
    }
    if (margin < 0.0) d.pass = false;
  }
  return d;
}

Dominance check_dominance(const BoundingFunction& bound, const EmpiricalCCDF& c) {
  std::vector<double> b(c.x.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = bound(c.x[i]);
  return check_dominance(b, c);
}

std::vector<double> after_warmup(const std::vector<double>& v, double fraction) {
  auto skip = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(v.size())));
  return {v.begin() + static_cast<std::ptrdiff_t>(std::min(skip, v.size())), v.end()};
}

void parallel_for(std::size_t R, const std::function<void(std::size_t)>& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t r; (r = next++) < R;) {
      try {
        fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::size_t T = std::max<std::size_t>(1, std::min<std::size_t>(R, std::thread::hardware_concurrency()));
  std::vector<std::thread> threads;
  for (std::size_t i = 1; i < T; ++i) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (err) std::rethrow_exception(err);
}

std::vector<std::vector<double>> run_replications(std::size_t R, const std::function<std::vector<double>(std::size_t)>& fn) {
  std::vector<std::vector<double>> out(R);
  parallel_for(R, [&](std::size_t r) { out[r] = fn(r); });
  return out;
}

std::vector<double> pool(const std::vector<std::vector<double>>& parts) {
  std::vector<double> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace tnc::sim

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tnc/bounding.hpp"
#include "tnc/curve.hpp"
#include "tnc/simulator.hpp"
#include "tnc/statistics.hpp"

namespace tnc::cli {

// Schema violations, unresolved names and failed stability prechecks. The message starts with
// the offending field path.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrafficModelSpec {
  std::string family;  // poisson_vwd, poisson_iat, gsbb, periodic, curve
  double mu = 0.0, hbar = 0.0, rho = 0.0, period = 0.0, eta = 0.0;
  std::size_t horizon = 0;
  std::vector<double> curve;
  double tail_rate = 0.0;
  std::optional<BoundingFunction> bound;
  // Tail rate of lambda (seconds per packet).
  double rate() const;
};

struct ServiceModelSpec {
  std::string family;  // deterministic, wireless, curve
  double time = 0.0, pe = 0.0, slot = 1.0;
  std::string form = "strict";  // wireless: strict (converted to i.d) or id
  std::optional<double> eta;    // wireless: fixed eta instead of a grid search
  std::vector<double> curve;
  double tail_rate = 0.0;
  std::optional<BoundingFunction> bound;
  // Tail rate of gamma in the limit eta -> 0.
  double rate() const;
};

struct FlowSpec {
  std::string name;
  std::optional<sim::ArrivalDist> arrival;
  std::optional<TrafficModelSpec> model;
};

struct ServerSpec {
  std::string name;
  std::optional<sim::ServiceDist> service;
  std::optional<ServiceModelSpec> model;
};

struct AnalysisSpec {
  double x_max = 20.0;
  double dx = 0.1;
  std::vector<double> etas{0.05, 0.1, 0.2, 0.3, 0.5};
  double alpha = 0.01;
  bool independent = false;
  std::vector<std::size_t> output_gaps{2};
  std::size_t backlog_max = 50;
};

struct SimulationSpec {
  std::size_t packets = 5000;
  std::size_t replications = 20;
  std::uint64_t seed = 1;
};

struct Scenario {
  std::string name;
  std::vector<FlowSpec> flows;
  std::vector<ServerSpec> servers;
  std::vector<std::size_t> path;       // indices into servers, in traversal order
  std::string aggregation = "superpose";  // or "poisson"
  std::optional<double> aggregate_hbar;   // lambda(n) = hbar*n for the Poisson aggregate
  AnalysisSpec analysis;
  SimulationSpec simulation;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> packets;
  std::optional<std::size_t> replications;
  std::optional<double> grid_step;
  std::optional<double> alpha;
  bool allow_unstable = false;
};

Scenario parse_scenario_text(const std::string& text, const Overrides& ov = {});
Scenario parse_scenario(const std::string& path, const Overrides& ov = {});

enum class SampleKind { Arrival, Delay, Waiting, Backlog, InterDeparture, Output, EndToEnd };

// One analytic bound (or one simulated quantity) together with the statistic it describes.
struct Metric {
  std::string name;  // also the CSV file stem
  std::string tag;   // theorem tag; empty for simulation-only metrics
  SampleKind kind = SampleKind::Delay;
  std::size_t node = 0;  // position on the path
  std::size_t gap = 1;
  std::optional<IndexCurve> curve;  // lambda for Arrival and Output statistics
  std::optional<BoundingFunction> bound;
  bool packets = false;  // argument in packets rather than seconds
  std::string note;
};

struct Analysis {
  std::vector<Metric> metrics;
  std::vector<std::string> notes;  // eta choices and similar
};

Analysis run_analyze(const Scenario& s);

// x axis for a metric: the analysis grid in seconds, or 0..backlog_max packets.
std::vector<double> metric_axis(const Scenario& s, const Metric& m);

struct MetricResult {
  Metric metric;
  std::optional<sim::EmpiricalCCDF> ccdf;
  std::optional<sim::Dominance> dominance;
};

// Delay, waiting, backlog and inter-departure per node, plus end-to-end delay on a tandem.
std::vector<Metric> simulation_metrics(const Scenario& s);
// Pooled empirical CCDFs of the statistic behind each metric.
std::vector<MetricResult> run_simulate(const Scenario& s, const std::vector<Metric>& metrics);

struct ComparisonReport {
  std::vector<MetricResult> rows;
  std::vector<std::string> notes;
  bool all_dominated() const;
};

ComparisonReport run_compare(const Scenario& s);

// x,bound,ccdf,dkw_eps,dominated; unavailable columns are left empty.
std::string metric_csv(const Scenario& s, const MetricResult& r);
std::string report_text(const Scenario& s, const std::vector<MetricResult>& rows, const std::vector<std::string>& notes);
// Writes one CSV per metric and report.txt into dir.
void write_outputs(const std::string& dir, const Scenario& s, const std::vector<MetricResult>& rows,
                   const std::vector<std::string>& notes);

}  // namespace tnc::cli

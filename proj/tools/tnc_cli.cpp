#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tnc/scenario.hpp"

using namespace tnc::cli;

namespace {

struct Options {
  std::string scenario;
  std::string out = "tnc-out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> packets;
  std::optional<std::size_t> replications;
  std::optional<double> grid_step;
  std::optional<double> alpha;
  bool allow_unstable = false;
};

void add_options(CLI::App* sub, Options& o) {
  sub->add_option("--scenario", o.scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "output directory")->capture_default_str();
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--packets", o.packets, "packets per replication")->check(CLI::PositiveNumber);
  sub->add_option("--replications", o.replications, "number of replications")->check(CLI::PositiveNumber);
  sub->add_option("--grid-step", o.grid_step, "analysis grid step in seconds")->check(CLI::PositiveNumber);
  sub->add_option("--alpha", o.alpha, "DKW confidence level")->check(CLI::Range(0.0, 1.0));
  sub->add_flag("--allow-unstable", o.allow_unstable, "skip the stability precheck");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-domain stochastic network calculus: bounds, simulation and comparison"};
  app.require_subcommand(1);
  Options opt;
  auto* analyze = app.add_subcommand("analyze", "compute analytic bounds");
  auto* simulate = app.add_subcommand("simulate", "simulate and write empirical CCDFs");
  auto* compare = app.add_subcommand("compare", "check every bound against its empirical CCDF");
  for (auto* s : {analyze, simulate, compare}) add_options(s, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Overrides ov{opt.seed, opt.packets, opt.replications, opt.grid_step, opt.alpha, opt.allow_unstable};
    Scenario s = parse_scenario(opt.scenario, ov);
    if (analyze->parsed()) {
      auto an = run_analyze(s);
      std::vector<MetricResult> rows;
      for (auto& m : an.metrics) rows.push_back({m, std::nullopt, std::nullopt});
      write_outputs(opt.out, s, rows, an.notes);
      std::cout << report_text(s, rows, an.notes);
      return 0;
    }
    if (simulate->parsed()) {
      auto rows = run_simulate(s, simulation_metrics(s));
      write_outputs(opt.out, s, rows, {});
      std::cout << report_text(s, rows, {});
      return 0;
    }
    auto rep = run_compare(s);
    write_outputs(opt.out, s, rep.rows, rep.notes);
    std::cout << report_text(s, rep.rows, rep.notes);
    return rep.all_dominated() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

#include "tnc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "tnc/algebra.hpp"
#include "tnc/bounds.hpp"
#include "tnc/models.hpp"
#include "tnc/service.hpp"
#include "tnc/traffic.hpp"

namespace tnc::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ScenarioError(path + ": " + msg); }

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void check_keys(const json& o, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!o.is_object()) fail(path, "expected an object");
  for (auto it = o.begin(); it != o.end(); ++it) {
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
    if (!ok) fail(join(path, it.key()), "unknown field");
  }
}

double num(const json& o, const std::string& path, const char* key, std::optional<double> def = {}) {
  const auto p = join(path, key);
  if (!o.contains(key)) {
    if (def) return *def;
    fail(p, "missing required field");
  }
  const auto& v = o.at(key);
  if (!v.is_number()) fail(p, "expected a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) fail(p, "must be finite");
  return x;
}

double positive(const json& o, const std::string& path, const char* key, std::optional<double> def = {}) {
  double x = num(o, path, key, def);
  if (!(x > 0.0)) fail(join(path, key), "must be positive");
  return x;
}

std::uint64_t uint(const json& o, const std::string& path, const char* key, std::optional<std::uint64_t> def = {}) {
  const auto p = join(path, key);
  if (!o.contains(key)) {
    if (def) return *def;
    fail(p, "missing required field");
  }
  const auto& v = o.at(key);
  if (!v.is_number_unsigned()) fail(p, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string str(const json& o, const std::string& path, const char* key, std::optional<std::string> def = {}) {
  const auto p = join(path, key);
  if (!o.contains(key)) {
    if (def) return *def;
    fail(p, "missing required field");
  }
  if (!o.at(key).is_string()) fail(p, "expected a string");
  return o.at(key).get<std::string>();
}

bool boolean(const json& o, const std::string& path, const char* key, bool def) {
  if (!o.contains(key)) return def;
  if (!o.at(key).is_boolean()) fail(join(path, key), "expected true or false");
  return o.at(key).get<bool>();
}

const json& array(const json& o, const std::string& path, const char* key) {
  if (!o.contains(key)) fail(join(path, key), "missing required field");
  if (!o.at(key).is_array()) fail(join(path, key), "expected an array");
  return o.at(key);
}

std::vector<double> num_array(const json& o, const std::string& path, const char* key) {
  const auto& a = array(o, path, key);
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) fail(index(join(path, key), i), "expected a number");
    out.push_back(a[i].get<double>());
  }
  return out;
}

BoundingFunction parse_bound(const json& o, const std::string& path) {
  const auto fam = str(o, path, "family");
  if (fam == "step") {
    check_keys(o, path, {"family"});
    return BoundingFunction::step_at_zero();
  }
  if (fam == "one") {
    check_keys(o, path, {"family"});
    return BoundingFunction::one();
  }
  if (fam == "exponential") {
    check_keys(o, path, {"family", "a", "theta"});
    return BoundingFunction::exponential(positive(o, path, "a"), positive(o, path, "theta"));
  }
  if (fam == "md1") {
    check_keys(o, path, {"family", "mu", "hbar"});
    double mu = positive(o, path, "mu"), hbar = positive(o, path, "hbar");
    if (!(mu * hbar < 1.0)) fail(path, "md1 bound needs mu*hbar < 1");
    return BoundingFunction::md1_wait(mu, hbar);
  }
  fail(join(path, "family"), "unknown bound family '" + fam + "'");
}

IndexCurve parse_curve(const json& o, const std::string& path, const char* key) {
  auto v = num_array(o, path, key);
  double r = num(o, path, "tail_rate");
  try {
    return IndexCurve(std::move(v), r);
  } catch (const std::invalid_argument& e) {
    fail(join(path, key), e.what());
  }
}

sim::ArrivalDist parse_arrival(const json& o, const std::string& path) {
  const auto d = str(o, path, "dist");
  if (d == "exponential") {
    check_keys(o, path, {"dist", "rate"});
    return sim::ArrivalDist::exponential(positive(o, path, "rate"));
  }
  if (d == "deterministic") {
    check_keys(o, path, {"dist", "period"});
    return sim::ArrivalDist::deterministic(positive(o, path, "period"));
  }
  if (d == "uniform") {
    check_keys(o, path, {"dist", "low", "high"});
    double lo = num(o, path, "low"), hi = num(o, path, "high");
    if (!(lo >= 0.0) || !(hi > lo)) fail(path, "uniform needs 0 <= low < high");
    return sim::ArrivalDist::uniform(lo, hi);
  }
  fail(join(path, "dist"), "unknown distribution '" + d + "'");
}

sim::ServiceDist parse_service(const json& o, const std::string& path) {
  const auto d = str(o, path, "dist");
  if (d == "deterministic") {
    check_keys(o, path, {"dist", "time"});
    return sim::ServiceDist::deterministic(positive(o, path, "time"));
  }
  if (d == "geometric") {
    check_keys(o, path, {"dist", "pe", "slot"});
    double pe = num(o, path, "pe");
    if (!(pe >= 0.0 && pe < 1.0)) fail(join(path, "pe"), "must lie in [0, 1)");
    return sim::ServiceDist::geometric_slotted(pe, positive(o, path, "slot", 1.0));
  }
  if (d == "table") {
    check_keys(o, path, {"dist", "values"});
    auto v = num_array(o, path, "values");
    if (v.empty()) fail(join(path, "values"), "must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!(v[i] >= 0.0)) fail(index(join(path, "values"), i), "must be >= 0");
    return sim::ServiceDist::from_table(std::move(v));
  }
  fail(join(path, "dist"), "unknown distribution '" + d + "'");
}

TrafficModelSpec parse_traffic_model(const json& o, const std::string& path) {
  TrafficModelSpec t;
  t.family = str(o, path, "family");
  if (t.family == "poisson_vwd") {
    check_keys(o, path, {"family", "mu", "hbar"});
    t.mu = positive(o, path, "mu");
    t.hbar = positive(o, path, "hbar");
    if (!(t.mu * t.hbar < 1.0)) fail(path, "poisson_vwd needs mu*hbar < 1");
  } else if (t.family == "poisson_iat") {
    check_keys(o, path, {"family", "mu", "horizon", "eta"});
    t.mu = positive(o, path, "mu");
    t.horizon = uint(o, path, "horizon", 200);
    t.eta = positive(o, path, "eta");
    if (t.horizon < 1) fail(join(path, "horizon"), "must be >= 1");
    if (!(t.eta < 1.0 / t.mu)) fail(join(path, "eta"), "must be below the mean spacing 1/mu");
  } else if (t.family == "gsbb") {
    check_keys(o, path, {"family", "rho", "bound"});
    t.rho = positive(o, path, "rho");
    if (!o.contains("bound")) fail(join(path, "bound"), "missing required field");
    t.bound = parse_bound(o.at("bound"), join(path, "bound"));
  } else if (t.family == "periodic") {
    check_keys(o, path, {"family", "period"});
    t.period = positive(o, path, "period");
  } else if (t.family == "curve") {
    check_keys(o, path, {"family", "lambda", "tail_rate", "bound"});
    auto c = parse_curve(o, path, "lambda");
    t.curve.assign(c.values().begin(), c.values().end());
    t.tail_rate = c.tail_rate();
    if (!o.contains("bound")) fail(join(path, "bound"), "missing required field");
    t.bound = parse_bound(o.at("bound"), join(path, "bound"));
  } else {
    fail(join(path, "family"), "unknown traffic model '" + t.family + "'");
  }
  return t;
}

ServiceModelSpec parse_service_model(const json& o, const std::string& path) {
  ServiceModelSpec m;
  m.family = str(o, path, "family");
  if (m.family == "deterministic") {
    check_keys(o, path, {"family", "time"});
    m.time = positive(o, path, "time");
  } else if (m.family == "wireless") {
    check_keys(o, path, {"family", "pe", "slot", "form", "eta"});
    m.pe = num(o, path, "pe");
    if (!(m.pe >= 0.0 && m.pe < 1.0)) fail(join(path, "pe"), "must lie in [0, 1)");
    m.slot = positive(o, path, "slot", 1.0);
    m.form = str(o, path, "form", std::string("strict"));
    if (m.form != "strict" && m.form != "id") fail(join(path, "form"), "expected 'strict' or 'id'");
    if (o.contains("eta")) m.eta = positive(o, path, "eta");
  } else if (m.family == "curve") {
    check_keys(o, path, {"family", "gamma", "tail_rate", "bound"});
    auto c = parse_curve(o, path, "gamma");
    m.curve.assign(c.values().begin(), c.values().end());
    m.tail_rate = c.tail_rate();
    if (!o.contains("bound")) fail(join(path, "bound"), "missing required field");
    m.bound = parse_bound(o.at("bound"), join(path, "bound"));
  } else {
    fail(join(path, "family"), "unknown service model '" + m.family + "'");
  }
  return m;
}

double mean_spacing(const sim::ArrivalDist& d) {
  switch (d.kind) {
    case sim::ArrivalDist::Kind::Exponential: return 1.0 / d.p1;
    case sim::ArrivalDist::Kind::Deterministic: return d.p1;
    case sim::ArrivalDist::Kind::Uniform: return 0.5 * (d.p1 + d.p2);
  }
  return 0.0;
}

double mean_service(const sim::ServiceDist& d) {
  switch (d.kind) {
    case sim::ServiceDist::Kind::Deterministic: return d.time;
    case sim::ServiceDist::Kind::GeometricSlotted: return d.slot / (1.0 - d.pe);
    case sim::ServiceDist::Kind::Table:
      return std::accumulate(d.table.begin(), d.table.end(), 0.0) / static_cast<double>(d.table.size());
  }
  return 0.0;
}

// Spacing of the aggregate when flows with spacings r_i are merged.
double merged_spacing(const std::vector<double>& r) {
  double inv = 0.0;
  for (double x : r) {
    if (!(x > 0.0)) return 0.0;
    inv += 1.0 / x;
  }
  return 1.0 / inv;
}

void stability_precheck(const Scenario& s) {
  bool models = std::all_of(s.flows.begin(), s.flows.end(), [](const FlowSpec& f) { return f.model.has_value(); });
  bool dists = std::all_of(s.flows.begin(), s.flows.end(), [](const FlowSpec& f) { return f.arrival.has_value(); });
  for (std::size_t k = 0; k < s.path.size(); ++k) {
    const auto& srv = s.servers[s.path[k]];
    std::optional<double> r, g;
    if (models && srv.model) {
      if (s.aggregation == "poisson") {
        r = *s.aggregate_hbar;
      } else {
        std::vector<double> rs;
        for (const auto& f : s.flows) rs.push_back(f.model->rate());
        r = merged_spacing(rs);
      }
      g = srv.model->rate();
    } else if (dists && srv.service) {
      std::vector<double> rs;
      for (const auto& f : s.flows) rs.push_back(mean_spacing(*f.arrival));
      r = merged_spacing(rs);
      g = mean_service(*srv.service);
    }
    if (!r) continue;
    if (stability_margin(IndexCurve::linear(*r), IndexCurve::linear(*g)) > 0.0) {
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "unstable: server '%s' needs %.6g s per packet but arrivals are spaced %.6g s apart on average "
                    "(service tail rate must not exceed the arrival tail rate; --allow-unstable overrides)",
                    srv.name.c_str(), *g, *r);
      fail(index("topology.path", k), buf);
    }
  }
}

}  // namespace

double TrafficModelSpec::rate() const {
  if (family == "poisson_vwd") return hbar;
  if (family == "poisson_iat") return 1.0 / mu - eta;
  if (family == "gsbb") return 1.0 / rho;
  if (family == "periodic") return period;
  return tail_rate;
}

double ServiceModelSpec::rate() const {
  if (family == "deterministic") return time;
  if (family == "wireless") return (1.0 / (1.0 - pe) + eta.value_or(0.0)) * slot;
  return tail_rate;
}

Scenario parse_scenario_text(const std::string& text, const Overrides& ov) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario: malformed JSON: ") + e.what());
  }
  check_keys(doc, "scenario", {"schema", "name", "flows", "servers", "topology", "analysis", "simulation"});
  if (!doc.contains("schema")) fail("schema", "missing required field");
  if (!doc.at("schema").is_number_integer() || doc.at("schema").get<long>() != 1) fail("schema", "only schema 1 is supported");

  Scenario s;
  s.name = str(doc, "", "name", std::string("scenario"));

  const auto& flows = array(doc, "", "flows");
  if (flows.empty()) fail("flows", "at least one flow is required");
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const auto p = index("flows", i);
    const auto& f = flows[i];
    check_keys(f, p, {"name", "arrival", "model"});
    FlowSpec fs;
    fs.name = str(f, p, "name");
    if (f.contains("arrival")) fs.arrival = parse_arrival(f.at("arrival"), join(p, "arrival"));
    if (f.contains("model")) fs.model = parse_traffic_model(f.at("model"), join(p, "model"));
    if (!fs.arrival && !fs.model) fail(p, "needs an arrival distribution or a traffic model");
    for (const auto& other : s.flows)
      if (other.name == fs.name) fail(join(p, "name"), "duplicate flow name '" + fs.name + "'");
    s.flows.push_back(std::move(fs));
  }

  const auto& servers = array(doc, "", "servers");
  if (servers.empty()) fail("servers", "at least one server is required");
  for (std::size_t i = 0; i < servers.size(); ++i) {
    const auto p = index("servers", i);
    const auto& v = servers[i];
    check_keys(v, p, {"name", "service", "model"});
    ServerSpec ss;
    ss.name = str(v, p, "name");
    if (v.contains("service")) ss.service = parse_service(v.at("service"), join(p, "service"));
    if (v.contains("model")) ss.model = parse_service_model(v.at("model"), join(p, "model"));
    if (!ss.service && !ss.model) fail(p, "needs a service distribution or a service model");
    for (const auto& other : s.servers)
      if (other.name == ss.name) fail(join(p, "name"), "duplicate server name '" + ss.name + "'");
    s.servers.push_back(std::move(ss));
  }

  if (doc.contains("topology")) {
    const auto& t = doc.at("topology");
    check_keys(t, "topology", {"path", "aggregation", "hbar"});
    if (t.contains("path")) {
      const auto& path = array(t, "topology", "path");
      if (path.empty()) fail("topology.path", "must name at least one server");
      for (std::size_t k = 0; k < path.size(); ++k) {
        const auto p = index("topology.path", k);
        if (!path[k].is_string()) fail(p, "expected a server name");
        auto name = path[k].get<std::string>();
        auto it = std::find_if(s.servers.begin(), s.servers.end(), [&](const ServerSpec& x) { return x.name == name; });
        if (it == s.servers.end()) fail(p, "unknown server '" + name + "'");
        s.path.push_back(static_cast<std::size_t>(it - s.servers.begin()));
      }
    }
    s.aggregation = str(t, "topology", "aggregation", std::string("superpose"));
    if (s.aggregation != "superpose" && s.aggregation != "poisson")
      fail("topology.aggregation", "expected 'superpose' or 'poisson'");
    if (t.contains("hbar")) s.aggregate_hbar = positive(t, "topology", "hbar");
  }
  if (s.path.empty())
    for (std::size_t k = 0; k < s.servers.size(); ++k) s.path.push_back(k);

  if (s.aggregation == "poisson") {
    if (!s.aggregate_hbar) fail("topology.hbar", "required for poisson aggregation");
    double total = 0.0;
    for (std::size_t i = 0; i < s.flows.size(); ++i) {
      const auto& m = s.flows[i].model;
      if (!m || m->family != "poisson_vwd") fail(index("flows", i) + ".model", "poisson aggregation needs poisson_vwd flows");
      total += m->mu;
    }
    if (!(*s.aggregate_hbar * total < 1.0)) fail("topology.hbar", "needs hbar * (sum of mu) < 1");
  }

  if (doc.contains("analysis")) {
    const auto& a = doc.at("analysis");
    check_keys(a, "analysis", {"x_max", "dx", "eta", "alpha", "independent", "output_gaps", "backlog_max"});
    auto& an = s.analysis;
    an.x_max = positive(a, "analysis", "x_max", an.x_max);
    an.dx = positive(a, "analysis", "dx", an.dx);
    if (a.contains("eta")) {
      an.etas = num_array(a, "analysis", "eta");
      if (an.etas.empty()) fail("analysis.eta", "must not be empty");
      for (std::size_t i = 0; i < an.etas.size(); ++i)
        if (!(an.etas[i] > 0.0)) fail(index("analysis.eta", i), "must be positive");
    }
    an.alpha = num(a, "analysis", "alpha", an.alpha);
    an.independent = boolean(a, "analysis", "independent", an.independent);
    if (a.contains("output_gaps")) {
      an.output_gaps.clear();
      for (double g : num_array(a, "analysis", "output_gaps")) {
        if (!(g >= 2.0) || g != std::floor(g)) fail("analysis.output_gaps", "gaps must be integers >= 2");
        an.output_gaps.push_back(static_cast<std::size_t>(g));
      }
    }
    an.backlog_max = uint(a, "analysis", "backlog_max", an.backlog_max);
  }
  if (doc.contains("simulation")) {
    const auto& m = doc.at("simulation");
    check_keys(m, "simulation", {"packets", "replications", "seed"});
    s.simulation.packets = uint(m, "simulation", "packets", s.simulation.packets);
    s.simulation.replications = uint(m, "simulation", "replications", s.simulation.replications);
    s.simulation.seed = uint(m, "simulation", "seed", s.simulation.seed);
  }

  if (ov.seed) s.simulation.seed = *ov.seed;
  if (ov.packets) s.simulation.packets = *ov.packets;
  if (ov.replications) s.simulation.replications = *ov.replications;
  if (ov.grid_step) s.analysis.dx = *ov.grid_step;
  if (ov.alpha) s.analysis.alpha = *ov.alpha;

  if (!(s.analysis.dx > 0.0)) fail("analysis.dx", "must be positive");
  if (!(s.analysis.alpha > 0.0 && s.analysis.alpha < 1.0)) fail("analysis.alpha", "must lie in (0, 1)");
  if (s.simulation.packets < 1) fail("simulation.packets", "must be >= 1");
  if (s.simulation.replications < 1) fail("simulation.replications", "must be >= 1");
  if (s.analysis.backlog_max < 1) fail("analysis.backlog_max", "must be >= 1");

  const Grid g = Grid::up_to(s.analysis.x_max, s.analysis.dx);
  if (std::abs(g.max() - s.analysis.x_max) > 1e-9 * s.analysis.x_max) {
    std::cerr << "warning: analysis.x_max " << s.analysis.x_max << " is not a multiple of the grid step "
              << s.analysis.dx << "; resampled to " << g.max() << "\n";
    s.analysis.x_max = g.max();
  }

  if (!ov.allow_unstable) stability_precheck(s);
  return s;
}

Scenario parse_scenario(const std::string& path, const Overrides& ov) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open scenario file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), ov);
}

namespace {

TrafficModel build_traffic(const TrafficModelSpec& t, const Grid& grid) {
  if (t.family == "poisson_vwd") return md1_vwd_sac(t.mu, t.hbar);
  if (t.family == "poisson_iat") return iat_to_vwd(poisson_iat_sac(t.mu, t.horizon, grid.step), t.eta, grid);
  if (t.family == "gsbb") return gsbb_vwd_sac(t.rho, *t.bound);
  if (t.family == "periodic") return TrafficModel::vwd(IndexCurve::linear(t.period), BoundingFunction::step_at_zero());
  return TrafficModel::vwd(IndexCurve(t.curve, t.tail_rate), *t.bound);
}

std::string traffic_tag(const TrafficModelSpec& t) {
  if (t.family == "poisson_vwd") return "E2";
  if (t.family == "poisson_iat") return "T2";
  if (t.family == "gsbb") return "E3";
  return "SAC";
}

ServiceModel build_service(const ServiceModelSpec& m, double eta, const Grid& grid) {
  if (m.family == "deterministic") return strict_convert(deterministic_server(m.time), ServiceKind::ID, eta, grid);
  if (m.family == "wireless") {
    if (m.form == "id") return wireless_link_ssc(m.pe, eta, m.slot, grid);
    return strict_convert(wireless_link_strict(m.pe, eta, m.slot, grid), ServiceKind::ID, eta, grid);
  }
  return ServiceModel::id(IndexCurve(m.curve, m.tail_rate), *m.bound);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

Analysis run_analyze(const Scenario& s) {
  for (std::size_t i = 0; i < s.flows.size(); ++i)
    if (!s.flows[i].model) fail(index("flows", i) + ".model", "required for analysis");
  for (std::size_t k : s.path)
    if (!s.servers[k].model) fail(index("servers", k) + ".model", "required for analysis");

  const auto& an = s.analysis;
  const Grid grid = Grid::up_to(an.x_max, an.dx);
  const bool ind = an.independent;
  Analysis out;

  auto add = [&](Metric m) { out.metrics.push_back(std::move(m)); };

  // Arrival side: one flow as given, or the aggregate.
  std::vector<TrafficModel> flows;
  for (const auto& f : s.flows) flows.push_back(build_traffic(*f.model, grid));
  std::optional<TrafficModel> agg;
  if (flows.size() == 1) {
    agg = flows.front();
    add({"arrival", traffic_tag(*s.flows.front().model), SampleKind::Arrival, 0, 1, agg->lambda(), agg->bound, false, ""});
  } else {
    auto sup = superpose(flows, grid);
    add({"arrival.superposed", "T11", SampleKind::Arrival, 0, 1, sup.lambda(), sup.bound, false, ""});
    agg = sup;
    if (s.aggregation == "poisson") {
      std::vector<double> mus;
      for (const auto& f : s.flows) mus.push_back(f.model->mu);
      auto p = superposed_poisson_vwd(mus, *s.aggregate_hbar);
      add({"arrival.poisson", "E6", SampleKind::Arrival, 0, 1, p.lambda(), p.bound, false, ""});
      agg = p;
    }
  }
  const TrafficModel& A = *agg;

  // Server models; a wireless eta not fixed by the scenario is searched against the path input.
  std::vector<ServiceModel> svcs;
  for (std::size_t k : s.path) {
    const auto& spec = *s.servers[k].model;
    if (spec.family != "wireless") {
      svcs.push_back(build_service(spec, an.etas.front(), grid));
      continue;
    }
    double eta = 0.0;
    if (spec.eta) {
      eta = *spec.eta;
    } else {
      auto best = optimize_eta(EtaObjective::Area, 0.0, an.etas, grid, [&](double e) {
        return delay_bound(A, build_service(spec, e, grid), grid, ind);
      });
      eta = best.eta;
    }
    out.notes.push_back("server " + s.servers[k].name + ": eta " + fmt("%.6g", eta));
    svcs.push_back(build_service(spec, eta, grid));
  }

  const std::size_t N = svcs.size();
  double nbn_eta = an.etas.front();
  if (N > 1) {
    nbn_eta = optimize_eta(EtaObjective::Area, 0.0, an.etas, grid, [&](double e) {
                return node_by_node_delay(A, svcs, e, grid, ind).total;
              }).eta;
    out.notes.push_back("node-by-node: eta " + fmt("%.6g", nbn_eta));
  }

  const std::string tdelay = ind ? "L1" : "T6", tback = ind ? "L2" : "T7", tout = ind ? "L3" : "T8";
  TrafficModel cur = A;
  for (std::size_t k = 0; k < N; ++k) {
    const auto& name = s.servers[s.path[k]].name;
    add({"delay." + name, tdelay, SampleKind::Delay, k, 1, std::nullopt, delay_bound(cur, svcs[k], grid, ind), false, ""});
    add({"backlog." + name, tback, SampleKind::Backlog, k, 1, std::nullopt, backlog_bound(cur, svcs[k], grid, ind), true,
         "deconvolution form"});
    add({"backlog_h." + name, tback, SampleKind::Backlog, k, 1, std::nullopt,
         backlog_from_points(backlog_horizontal(cur, svcs[k], grid, ind)), true, "horizontal-distance form"});
    auto o = output_characterization(cur, svcs[k], grid, ind);
    for (std::size_t g : an.output_gaps)
      add({"output." + name + ".gap" + std::to_string(g), tout, SampleKind::Output, k, g, o.lambda(), o.bound, false, ""});
    if (k + 1 < N) cur = iat_to_vwd(o, nbn_eta, grid);
  }

  if (N > 1) {
    auto best = optimize_eta(EtaObjective::Area, 0.0, an.etas, grid, [&](double e) {
      return delay_bound(A, concatenate(svcs, e, {}, grid), grid, ind);
    });
    out.notes.push_back("concatenation: eta " + fmt("%.6g", best.eta));
    add({"e2e.concatenation", "T9", SampleKind::EndToEnd, N - 1, 1, std::nullopt, best.bound, false, ""});
    add({"e2e.node_by_node", tdelay + "+" + tout, SampleKind::EndToEnd, N - 1, 1, std::nullopt,
         node_by_node_delay(A, svcs, nbn_eta, grid, ind).total, false, ""});
  }
  return out;
}

std::vector<double> metric_axis(const Scenario& s, const Metric& m) {
  std::vector<double> x;
  if (m.packets) {
    for (std::size_t k = 0; k <= s.analysis.backlog_max; ++k) x.push_back(static_cast<double>(k));
  } else {
    const Grid g = Grid::up_to(s.analysis.x_max, s.analysis.dx);
    for (std::size_t i = 0; i < g.count; ++i) x.push_back(g.x(i));
  }
  return x;
}

std::vector<Metric> simulation_metrics(const Scenario& s) {
  std::vector<Metric> out;
  for (std::size_t k = 0; k < s.path.size(); ++k) {
    const auto& name = s.servers[s.path[k]].name;
    out.push_back({"delay." + name, "", SampleKind::Delay, k, 1, std::nullopt, std::nullopt, false, ""});
    out.push_back({"waiting." + name, "", SampleKind::Waiting, k, 1, std::nullopt, std::nullopt, false, ""});
    out.push_back({"backlog." + name, "", SampleKind::Backlog, k, 1, std::nullopt, std::nullopt, true, ""});
    out.push_back({"interdeparture." + name, "", SampleKind::InterDeparture, k, 1, std::nullopt, std::nullopt, false, ""});
  }
  if (s.path.size() > 1)
    out.push_back({"e2e", "", SampleKind::EndToEnd, s.path.size() - 1, 1, std::nullopt, std::nullopt, false, ""});
  return out;
}

std::vector<MetricResult> run_simulate(const Scenario& s, const std::vector<Metric>& metrics) {
  for (std::size_t i = 0; i < s.flows.size(); ++i)
    if (!s.flows[i].arrival) fail(index("flows", i) + ".arrival", "required for simulation");
  for (std::size_t k : s.path)
    if (!s.servers[k].service) fail(index("servers", k) + ".service", "required for simulation");

  const auto& sm = s.simulation;
  const std::size_t R = sm.replications, M = metrics.size();
  // samples[r][metric]
  std::vector<std::vector<std::vector<double>>> samples(R);
  sim::parallel_for(R, [&](std::size_t r) {
    std::vector<std::vector<double>> flows;
    for (std::size_t i = 0; i < s.flows.size(); ++i)
      flows.push_back(sim::gen_renewal_arrivals(*s.flows[i].arrival, sm.packets, sim::derive_seed(sm.seed, r, i)));
    std::vector<double> a;
    if (flows.size() == 1) {
      a = std::move(flows.front());
    } else {
      // keep the merged stream only up to the first flow that runs out
      double horizon = std::numeric_limits<double>::infinity();
      for (const auto& f : flows) horizon = std::min(horizon, f.back());
      a = sim::merge_fifo_n(flows);
      a.resize(std::min<std::size_t>(sm.packets, std::upper_bound(a.begin(), a.end(), horizon) - a.begin()));
    }
    std::vector<std::vector<double>> deltas;
    for (std::size_t k = 0; k < s.path.size(); ++k)
      deltas.push_back(sim::gen_service_times(*s.servers[s.path[k]].service, a.size(),
                                              sim::derive_seed(sm.seed, r, 1000 + k)));
    auto nodes = sim::simulate_tandem(a, deltas);
    auto& out = samples[r];
    out.resize(M);
    for (std::size_t j = 0; j < M; ++j) {
      const auto& m = metrics[j];
      const auto& tr = nodes[m.node];
      switch (m.kind) {
        case SampleKind::Arrival: out[j] = sim::vwd_statistic(a, *m.curve); break;
        case SampleKind::Delay: out[j] = sim::delays(tr); break;
        case SampleKind::Waiting: out[j] = sim::waiting_times(tr); break;
        case SampleKind::Backlog: out[j] = sim::backlog_at(tr, tr.a); break;
        case SampleKind::InterDeparture: out[j] = sim::inter_departures(tr, m.gap); break;
        case SampleKind::Output: out[j] = sim::iat_statistic(tr.d, *m.curve, m.gap); break;
        case SampleKind::EndToEnd: {
          out[j] = nodes.back().d;
          for (std::size_t n = 0; n < a.size(); ++n) out[j][n] -= a[n];
          break;
        }
      }
    }
  });

  std::vector<MetricResult> res;
  for (std::size_t j = 0; j < M; ++j) {
    std::vector<std::vector<double>> parts(R);
    for (std::size_t r = 0; r < R; ++r) parts[r] = std::move(samples[r][j]);
    MetricResult mr{metrics[j], sim::empirical_ccdf(sim::pool(parts), metric_axis(s, metrics[j]), s.analysis.alpha),
                    std::nullopt};
    if (mr.metric.bound) mr.dominance = sim::check_dominance(*mr.metric.bound, *mr.ccdf);
    res.push_back(std::move(mr));
  }
  return res;
}

bool ComparisonReport::all_dominated() const {
  return std::all_of(rows.begin(), rows.end(), [](const MetricResult& r) { return r.dominance && r.dominance->pass; });
}

ComparisonReport run_compare(const Scenario& s) {
  auto an = run_analyze(s);
  return {run_simulate(s, an.metrics), an.notes};
}

std::string metric_csv(const Scenario& s, const MetricResult& r) {
  const auto x = r.ccdf ? r.ccdf->x : metric_axis(s, r.metric);
  std::string out = "x,bound,ccdf,dkw_eps,dominated\n";
  char buf[64];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g,", x[i]);
    out += buf;
    double b = 0.0;
    if (r.metric.bound) {
      b = (*r.metric.bound)(x[i]);
      std::snprintf(buf, sizeof buf, "%.9g", b);
      out += buf;
    }
    out += ",";
    if (r.ccdf) {
      std::snprintf(buf, sizeof buf, "%.9g,%.9g", r.ccdf->ccdf[i], r.ccdf->dkw_epsilon);
      out += buf;
    } else {
      out += ",";
    }
    out += ",";
    if (r.metric.bound && r.ccdf) out += b - (r.ccdf->ccdf[i] - r.ccdf->dkw_epsilon) >= 0.0 ? "true" : "false";
    out += "\n";
  }
  return out;
}

std::string report_text(const Scenario& s, const std::vector<MetricResult>& rows, const std::vector<std::string>& notes) {
  std::ostringstream o;
  char buf[512];
  std::snprintf(buf, sizeof buf, "scenario %s  seed %llu  packets %zu  replications %zu  alpha %.6g  grid %.6g..%.6g\n",
                s.name.c_str(), static_cast<unsigned long long>(s.simulation.seed), s.simulation.packets,
                s.simulation.replications, s.analysis.alpha, s.analysis.dx, s.analysis.x_max);
  o << buf;
  for (const auto& n : notes) o << n << "\n";
  o << "\nmetric                         tag    samples   dkw_eps     worst_margin  worst_x    result\n";
  std::size_t failures = 0;
  for (const auto& r : rows) {
    const auto& m = r.metric;
    std::string result = "-";
    if (r.dominance) {
      result = r.dominance->pass ? "dominated" : "VIOLATED";
      if (!r.dominance->pass) ++failures;
    }
    std::snprintf(buf, sizeof buf, "%-30s %-6s %-9zu %-11.6g %-13.6g %-10.6g %s%s%s\n", m.name.c_str(),
                  m.tag.empty() ? "-" : m.tag.c_str(), r.ccdf ? r.ccdf->n_samples : 0,
                  r.ccdf ? r.ccdf->dkw_epsilon : 0.0, r.dominance ? r.dominance->worst_margin : 0.0,
                  r.dominance ? r.dominance->worst_x : 0.0, result.c_str(), m.note.empty() ? "" : "  ",
                  m.note.c_str());
    o << buf;
  }
  if (failures > 0) o << "\n" << failures << " bound(s) violated by the empirical CCDF\n";
  return o.str();
}

void write_outputs(const std::string& dir, const Scenario& s, const std::vector<MetricResult>& rows,
                   const std::vector<std::string>& notes) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& r : rows) {
    std::ofstream f(fs::path(dir) / (r.metric.name + ".csv"), std::ios::binary);
    f << metric_csv(s, r);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(dir) / (r.metric.name + ".csv")).string());
  }
  std::ofstream f(fs::path(dir) / "report.txt", std::ios::binary);
  f << report_text(s, rows, notes);
  if (!f) throw std::runtime_error("cannot write report.txt in " + dir);
}

}  // namespace tnc::cli

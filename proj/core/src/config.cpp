#include "dynsis/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "dynsis/csv.hpp"
#include "dynsis/error.hpp"
#include "dynsis/netgen.hpp"
#include "dynsis/simulation.hpp"

namespace dynsis {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
  const auto pos = s.find_first_of("#;");
  return pos == std::string::npos ? s : s.substr(0, pos);
}

}  // namespace

ConfigDocument ConfigDocument::parse(std::istream& in, const std::string& source) {
  ConfigDocument doc;
  doc.source_ = source;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(strip_comment(raw));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']' || text.size() < 3)
        throw ConfigError(source + ":" + std::to_string(line) + ": malformed section header '" + text + "'");
      section = trim(text.substr(1, text.size() - 2));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(line) + ": expected 'key = value', got '" + text + "'");
    if (section.empty())
      throw ConfigError(source + ":" + std::to_string(line) + ": key outside of any [section]");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line) + ": empty key");
    auto& entries = doc.sections_[section];
    if (entries.count(key))
      throw ConfigError(source + ":" + std::to_string(line) + ": duplicate key '" + section + "." + key +
                        "' (first set on line " + std::to_string(entries[key].line) + ")");
    entries[key] = {value, line};
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in, path);
}

const ConfigDocument::Entry* ConfigDocument::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool ConfigDocument::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

void ConfigDocument::fail(const std::string& section, const std::string& key, const std::string& message) const {
  const auto* e = find(section, key);
  const std::string where = e ? source_ + ":" + std::to_string(e->line) : source_;
  throw ConfigError(where + ": " + section + "." + key + ": " + message);
}

std::string ConfigDocument::get_string(const std::string& section, const std::string& key,
                                       std::optional<std::string> fallback) const {
  if (const auto* e = find(section, key)) return e->value;
  if (fallback) return *fallback;
  fail(section, key, "required key is missing");
}

double ConfigDocument::get_double(const std::string& section, const std::string& key,
                                  std::optional<double> fallback) const {
  const auto* e = find(section, key);
  if (!e) {
    if (fallback) return *fallback;
    fail(section, key, "required key is missing");
  }
  try {
    return csv::parse_double(e->value);
  } catch (const DomainError&) {
    fail(section, key, "expected a number, got '" + e->value + "'");
  }
}

long long ConfigDocument::get_int(const std::string& section, const std::string& key,
                                  std::optional<long long> fallback) const {
  const auto* e = find(section, key);
  if (!e) {
    if (fallback) return *fallback;
    fail(section, key, "required key is missing");
  }
  try {
    return csv::parse_int(e->value);
  } catch (const DomainError&) {
    fail(section, key, "expected an integer, got '" + e->value + "'");
  }
}

std::vector<double> ConfigDocument::get_list(const std::string& section, const std::string& key) const {
  const auto* e = find(section, key);
  if (!e) fail(section, key, "required key is missing");
  std::vector<double> out;
  try {
    for (const auto& field : csv::split(e->value)) out.push_back(csv::parse_double(field));
  } catch (const DomainError&) {
    fail(section, key, "expected a comma-separated list of numbers");
  }
  return out;
}

void ConfigDocument::reject_unknown(const std::vector<std::string>& known) const {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [section, entries] : sections_)
    for (const auto& [key, entry] : entries)
      if (!allowed.count(section + "." + key))
        throw ConfigError(source_ + ":" + std::to_string(entry.line) + ": unknown key '" + section + "." + key + "'");
}

DegreeDistribution NetworkSpec::distribution(int max_degree) const {
  switch (kind) {
    case NetworkKind::Regular:
      return DegreeDistribution::point_mass(k, max_degree);
    case NetworkKind::NegativeBinomial:
      return DegreeDistribution::negative_binomial(mean, variance, max_degree);
    case NetworkKind::EdgeList: {
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot open edge list '" + path + "'");
      const Graph g = Graph::read_edge_list(in);
      if (g.max_degree() != max_degree) throw ConfigError("edge list cap M differs from model M");
      return empirical_degree_distribution(g);
    }
  }
  throw ConfigError("unknown network kind");
}

Graph NetworkSpec::generate(int nodes, int max_degree, std::uint64_t graph_seed) const {
  switch (kind) {
    case NetworkKind::Regular:
      return regular_random(nodes, k, max_degree, graph_seed);
    case NetworkKind::NegativeBinomial:
      return configuration_model(negative_binomial_degrees(nodes, mean, variance, max_degree, graph_seed),
                                 max_degree, derive_seed(graph_seed, 0, 7));
    case NetworkKind::EdgeList: {
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot open edge list '" + path + "'");
      Graph g = Graph::read_edge_list(in);
      if (g.size() != nodes || g.max_degree() != max_degree)
        throw ConfigError("edge list N/M differ from the model's N/M");
      return g;
    }
  }
  throw ConfigError("unknown network kind");
}

std::string to_string(ThresholdMethod method) {
  switch (method) {
    case ThresholdMethod::OdePrevalence: return "ode-prevalence";
    case ThresholdMethod::NgmR0: return "ngm-r0";
    case ThresholdMethod::Simulation: return "simulation";
  }
  return "?";
}

ThresholdMethod parse_method(const std::string& name) {
  if (name == "ode-prevalence") return ThresholdMethod::OdePrevalence;
  if (name == "ngm-r0") return ThresholdMethod::NgmR0;
  if (name == "simulation") return ThresholdMethod::Simulation;
  throw ConfigError("unknown threshold method '" + name + "' (expected ode-prevalence, ngm-r0 or simulation)");
}

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (initial_infected < 0 || initial_infected > params.population) throw ConfigError("I0 must lie in [0, N]");
  if (!(t_max >= 0.0)) throw ConfigError("t_max must be nonnegative");
  if (!(sample_dt > 0.0)) throw ConfigError("sample_dt must be positive");
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (network.kind == NetworkKind::Regular && (network.k < 0 || network.k > params.max_degree))
    throw ConfigError("network.k must lie in [0, M]");
  if (network.kind == NetworkKind::NegativeBinomial && !(network.variance > network.mean && network.mean > 0.0))
    throw ConfigError("negative binomial needs variance > mean > 0");
  if (!(sweep.omega_max > sweep.omega_min) || sweep.omega_min < 0.0)
    throw ConfigError("sweep bracket must satisfy 0 <= omega_min < omega_max");
  if (!(sweep.tolerance > 0.0)) throw ConfigError("sweep tolerance must be positive");
  if (sweep.sim_runs < 1) throw ConfigError("sweep runs must be at least 1");
}

RunConfig parse_run_config(const ConfigDocument& doc) {
  doc.reject_unknown({"model.beta",         "model.gamma",        "model.alpha",         "model.omega",
                      "model.k_star",       "model.M",            "model.N",             "network.type",
                      "network.k",          "network.mean",       "network.variance",    "network.path",
                      "network.seed",       "infection.I0",       "infection.seed",      "run.t_max",
                      "run.sample_dt",      "run.runs",           "run.seed",            "run.threads",
                      "run.out",            "integrator.method",  "integrator.rk4_step", "integrator.rel_tol",
                      "integrator.abs_tol", "r0.dfe",             "sweep.betas",         "sweep.omega_min",
                      "sweep.omega_max",    "sweep.tolerance",    "sweep.method",        "sweep.ode_horizon",
                      "sweep.ode_level",    "sweep.sim_horizon",  "sweep.sim_level",     "sweep.sim_vote",
                      "sweep.runs"});

  RunConfig cfg;
  auto nonneg = [&](const char* section, const char* key, double v) {
    if (!(v >= 0.0)) doc.fail(section, key, "must be nonnegative");
    return v;
  };

  auto& p = cfg.params;
  p.beta = nonneg("model", "beta", doc.get_double("model", "beta"));
  p.gamma = nonneg("model", "gamma", doc.get_double("model", "gamma"));
  p.alpha = nonneg("model", "alpha", doc.get_double("model", "alpha"));
  p.max_degree = static_cast<int>(doc.get_int("model", "M"));
  if (p.max_degree < 1) doc.fail("model", "M", "must be at least 1");
  p.population = static_cast<int>(doc.get_int("model", "N"));
  if (p.population < 1) doc.fail("model", "N", "must be at least 1");
  const bool has_omega = doc.has("model", "omega");
  const bool has_kstar = doc.has("model", "k_star");
  if (has_omega == has_kstar) doc.fail("model", has_omega ? "omega" : "k_star", "set exactly one of omega, k_star");
  if (has_omega) {
    p.omega = nonneg("model", "omega", doc.get_double("model", "omega"));
  } else {
    try {
      p.omega = omega_for_target_degree(p.alpha, p.max_degree, doc.get_double("model", "k_star"));
    } catch (const DomainError& e) {
      doc.fail("model", "k_star", e.what());
    }
  }

  const auto type = doc.get_string("network", "type", std::string("regular"));
  if (type == "regular") {
    cfg.network.kind = NetworkKind::Regular;
    cfg.network.k = static_cast<int>(doc.get_int("network", "k"));
    if (cfg.network.k < 0 || cfg.network.k > p.max_degree) doc.fail("network", "k", "must lie in [0, M]");
  } else if (type == "negative_binomial") {
    cfg.network.kind = NetworkKind::NegativeBinomial;
    cfg.network.mean = doc.get_double("network", "mean");
    cfg.network.variance = doc.get_double("network", "variance");
    if (!(cfg.network.variance > cfg.network.mean && cfg.network.mean > 0.0))
      doc.fail("network", "variance", "negative binomial needs variance > mean > 0");
  } else if (type == "edge_list") {
    cfg.network.kind = NetworkKind::EdgeList;
    cfg.network.path = doc.get_string("network", "path");
  } else {
    doc.fail("network", "type", "expected regular, negative_binomial or edge_list");
  }
  cfg.network.seed = static_cast<std::uint64_t>(doc.get_int("network", "seed", 1));

  cfg.initial_infected = static_cast<int>(doc.get_int("infection", "I0", 0));
  if (cfg.initial_infected < 0 || cfg.initial_infected > p.population)
    doc.fail("infection", "I0", "must lie in [0, N]");
  cfg.infection_seed = static_cast<std::uint64_t>(doc.get_int("infection", "seed", 1));

  cfg.t_max = nonneg("run", "t_max", doc.get_double("run", "t_max", 100.0));
  cfg.sample_dt = doc.get_double("run", "sample_dt", 1.0);
  if (!(cfg.sample_dt > 0.0)) doc.fail("run", "sample_dt", "must be positive");
  const auto runs = doc.get_int("run", "runs", 1);
  if (runs < 1) doc.fail("run", "runs", "must be at least 1");
  cfg.runs = static_cast<std::size_t>(runs);
  cfg.seed = static_cast<std::uint64_t>(doc.get_int("run", "seed", 1));
  const auto threads = doc.get_int("run", "threads", 1);
  if (threads < 0) doc.fail("run", "threads", "must be nonnegative (0 = all cores)");
  cfg.threads = static_cast<unsigned>(threads);
  cfg.out = doc.get_string("run", "out", std::string());

  const auto method = doc.get_string("integrator", "method", std::string("dopri5"));
  if (method == "dopri5")
    cfg.integrator.method = IntegratorMethod::DormandPrince45;
  else if (method == "rk4")
    cfg.integrator.method = IntegratorMethod::ClassicalRK4;
  else
    doc.fail("integrator", "method", "expected dopri5 or rk4");
  cfg.integrator.rk4_step = doc.get_double("integrator", "rk4_step", cfg.integrator.rk4_step);
  cfg.integrator.rel_tol = doc.get_double("integrator", "rel_tol", cfg.integrator.rel_tol);
  cfg.integrator.abs_tol_per_node = doc.get_double("integrator", "abs_tol", cfg.integrator.abs_tol_per_node);
  if (!(cfg.integrator.rk4_step > 0.0)) doc.fail("integrator", "rk4_step", "must be positive");

  const auto dfe = doc.get_string("r0", "dfe", std::string("initial"));
  if (dfe == "initial")
    cfg.dfe = DfeChoice::InitialNetwork;
  else if (dfe == "equilibrium")
    cfg.dfe = DfeChoice::NetworkEquilibrium;
  else
    doc.fail("r0", "dfe", "expected initial or equilibrium");

  auto& sw = cfg.sweep;
  if (doc.has("sweep", "betas")) sw.betas = doc.get_list("sweep", "betas");
  for (double b : sw.betas)
    if (!(b >= 0.0)) doc.fail("sweep", "betas", "values must be nonnegative");
  sw.omega_min = doc.get_double("sweep", "omega_min", sw.omega_min);
  sw.omega_max = doc.get_double("sweep", "omega_max", sw.omega_max);
  if (!(sw.omega_min >= 0.0 && sw.omega_max > sw.omega_min))
    doc.fail("sweep", "omega_max", "bracket must satisfy 0 <= omega_min < omega_max");
  sw.tolerance = doc.get_double("sweep", "tolerance", sw.tolerance);
  if (!(sw.tolerance > 0.0)) doc.fail("sweep", "tolerance", "must be positive");
  if (doc.has("sweep", "method")) {
    try {
      sw.method = parse_method(doc.get_string("sweep", "method"));
    } catch (const ConfigError& e) {
      doc.fail("sweep", "method", e.what());
    }
  }
  sw.ode_horizon = doc.get_double("sweep", "ode_horizon", sw.ode_horizon);
  sw.ode_level = doc.get_double("sweep", "ode_level", sw.ode_level);
  sw.sim_horizon = doc.get_double("sweep", "sim_horizon", sw.sim_horizon);
  sw.sim_level = doc.get_double("sweep", "sim_level", sw.sim_level);
  sw.sim_vote = doc.get_double("sweep", "sim_vote", sw.sim_vote);
  const auto sweep_runs = doc.get_int("sweep", "runs", static_cast<long long>(sw.sim_runs));
  if (sweep_runs < 1) doc.fail("sweep", "runs", "must be at least 1");
  sw.sim_runs = static_cast<std::size_t>(sweep_runs);

  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(ConfigDocument::load(path)); }

}  // namespace dynsis

#include "qbus/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <yaml-cpp/yaml.h>

namespace qbus {

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("linear_grid: step must be > 0");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double v = start + k * step;
    if (v > stop + 1e-3 * step) break;
    out.push_back(std::round(v * 1e12) / 1e12);
  }
  return out;
}

const char* to_string(SweepModel m) { return m == SweepModel::kDesign ? "design" : "circuit"; }
const char* to_string(GateTarget t) { return t == GateTarget::kISwap ? "iswap" : "swap"; }

namespace {

void check_keys(const YAML::Node& node, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const YAML::Node& node, const char* key, const std::string& where, T& out) {
  const YAML::Node v = node[key];
  if (!v) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

void read_ghz(const YAML::Node& node, const char* key, const std::string& where, double& omega) {
  double f = angular_to_ghz(omega);
  read(node, key, where, f);
  omega = ghz_to_angular(f);
}

// A frequency grid is a list of values or {start, stop, step}.
void read_grid(const YAML::Node& node, const char* key, const std::string& where,
               std::vector<double>& out) {
  const YAML::Node v = node[key];
  if (!v) return;
  const std::string path = where + "." + key;
  if (v.IsSequence()) {
    read(node, key, where, out);
    return;
  }
  check_keys(v, path, {"start", "stop", "step"});
  if (!v["start"] || !v["stop"] || !v["step"]) throw ConfigError(path + ": needs start, stop, step");
  double start = 0, stop = 0, step = 0;
  read(v, "start", path, start);
  read(v, "stop", path, stop);
  read(v, "step", path, step);
  if (!(step > 0.0)) throw ConfigError(path + ".step: must be > 0");
  out = linear_grid(start, stop, step);
}

void parse_design(const YAML::Node& n, BusDesign& d) {
  const std::string w = "design";
  check_keys(n, w, {"xi", "kappa_a", "kappa_b", "eps", "omega_q_idle_ghz", "omega_a_ghz",
                    "omega_b_ghz", "n_qubits", "boundary"});
  read(n, "xi", w, d.xi);
  read(n, "kappa_a", w, d.kappa_a);
  read(n, "kappa_b", w, d.kappa_b);
  read(n, "eps", w, d.eps);
  read_ghz(n, "omega_q_idle_ghz", w, d.omega_q_idle);
  read_ghz(n, "omega_a_ghz", w, d.omega_a);
  read_ghz(n, "omega_b_ghz", w, d.omega_b);
  read(n, "n_qubits", w, d.n_qubits);
  std::string boundary = to_string(d.boundary);
  read(n, "boundary", w, boundary);
  try {
    d.boundary = boundary_from_string(boundary);
  } catch (const std::exception& e) {
    throw ConfigError(w + ".boundary: " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("YAML syntax: ") + e.what());
  }
  if (!root || root.IsNull()) throw ConfigError("empty configuration");
  check_keys(root, "config", {"design", "synthesis", "seed", "threads", "output_dir", "spectrum",
                              "jeff_sweep", "gate", "variance"});
  if (!root["design"]) throw ConfigError("config: missing 'design' block");

  RunConfig cfg;
  cfg.design = reference_design(11);
  parse_design(root["design"], cfg.design);
  read(root, "seed", "config", cfg.seed);
  read(root, "threads", "config", cfg.threads);
  read(root, "output_dir", "config", cfg.output_dir);

  if (const auto n = root["synthesis"]) {
    check_keys(n, "synthesis", {"c_bar_ff", "ground_q_ff"});
    read(n, "c_bar_ff", "synthesis", cfg.synthesis.c_bar);
    read(n, "ground_q_ff", "synthesis", cfg.synthesis.ground_q);
  }
  if (const auto n = root["spectrum"]) {
    check_keys(n, "spectrum", {"sites"});
    read(n, "sites", "spectrum", cfg.spectrum.sites);
  }
  if (const auto n = root["jeff_sweep"]) {
    const std::string w = "jeff_sweep";
    check_keys(n, w, {"omega_q_ghz", "max_distance", "model"});
    read_grid(n, "omega_q_ghz", w, cfg.sweep.omega_q_ghz);
    read(n, "max_distance", w, cfg.sweep.max_distance);
    std::string model = to_string(cfg.sweep.model);
    read(n, "model", w, model);
    if (model == "design")
      cfg.sweep.model = SweepModel::kDesign;
    else if (model == "circuit")
      cfg.sweep.model = SweepModel::kCircuit;
    else
      throw ConfigError(w + ".model: expected 'design' or 'circuit'");
  }
  if (const auto n = root["gate"]) {
    const std::string w = "gate";
    check_keys(n, w, {"n_qubits", "distances", "omega_on_ghz", "ramp_ns", "dt_ns", "grid_points",
                      "window_factor", "target", "spectator_stagger_mhz", "t1_us"});
    GateConfig& g = cfg.gate;
    read(n, "n_qubits", w, g.n_qubits);
    read(n, "distances", w, g.distances);
    read_grid(n, "omega_on_ghz", w, g.omega_on_ghz);
    read(n, "ramp_ns", w, g.ramp_ns);
    read(n, "dt_ns", w, g.dt_ns);
    read(n, "grid_points", w, g.grid_points);
    read(n, "window_factor", w, g.window_factor);
    std::string target = to_string(g.target);
    read(n, "target", w, target);
    if (target == "iswap")
      g.target = GateTarget::kISwap;
    else if (target == "swap")
      g.target = GateTarget::kSwap;
    else
      throw ConfigError(w + ".target: expected 'iswap' or 'swap'");
    read(n, "spectator_stagger_mhz", w, g.spectator_stagger_mhz);
    read(n, "t1_us", w, g.t1_us);
  }
  if (const auto n = root["variance"]) {
    const std::string w = "variance";
    check_keys(n, w, {"sigma_rel", "n_realizations", "omega_q_ghz", "max_distance",
                      "perturb_capacitors", "perturb_josephson", "raw"});
    VarianceStudyConfig& v = cfg.variance;
    read(n, "sigma_rel", w, v.sigma_rel);
    read(n, "n_realizations", w, v.n_realizations);
    read_grid(n, "omega_q_ghz", w, v.omega_q_ghz);
    read(n, "max_distance", w, v.max_distance);
    read(n, "perturb_capacitors", w, v.perturb_capacitors);
    read(n, "perturb_josephson", w, v.perturb_josephson);
    read(n, "raw", w, v.raw);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate_config(const RunConfig& cfg, const std::string& study) {
  std::vector<std::string> problems;
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };

  BusDesign d = cfg.design;
  if (study == "gate") d.n_qubits = cfg.gate.n_qubits;
  const auto report = validate_design(d);
  if (!report.ok()) problems.push_back(report.summary());
  require(cfg.threads >= 1, "threads must be >= 1");
  require(cfg.synthesis.c_bar > 0.0, "synthesis.c_bar_ff must be > 0");
  require(cfg.synthesis.ground_q >= 0.0, "synthesis.ground_q_ff must be >= 0");

  if (study == "spectrum") {
    require(cfg.spectrum.sites >= 3, "spectrum.sites must be >= 3");
  } else if (study == "jeff-sweep") {
    require(!cfg.sweep.omega_q_ghz.empty(), "jeff_sweep.omega_q_ghz is empty");
    require(cfg.sweep.max_distance >= 1, "jeff_sweep.max_distance must be >= 1");
  } else if (study == "gate") {
    const GateConfig& g = cfg.gate;
    require(!g.distances.empty() && !g.omega_on_ghz.empty() && !g.ramp_ns.empty(),
            "gate: distances, omega_on_ghz and ramp_ns must be non-empty");
    for (int dist : g.distances)
      require(dist >= 1 && dist < g.n_qubits, fmt::format("gate: distance {} out of range", dist));
    for (double r : g.ramp_ns)
      require(r >= 0.0 && r <= 1000.0, fmt::format("gate: ramp {} ns outside [0, 1000]", r));
    require(g.dt_ns > 0.0, "gate.dt_ns must be > 0");
    require(g.grid_points >= 40, "gate.grid_points must be >= 40");
    require(g.window_factor >= 1.0, "gate.window_factor must be >= 1");
    for (double t1 : g.t1_us) require(t1 > 0.0, "gate.t1_us entries must be > 0");
  } else if (study == "variance") {
    const VarianceStudyConfig& v = cfg.variance;
    require(v.sigma_rel >= 0.0 && v.sigma_rel < 0.2, "variance.sigma_rel must lie in [0, 0.2)");
    require(v.n_realizations >= 1, "variance.n_realizations must be >= 1");
    require(!v.omega_q_ghz.empty(), "variance.omega_q_ghz is empty");
    require(v.max_distance >= 1 && v.max_distance < d.n_qubits,
            "variance.max_distance out of range");
  }
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw ValidationError(msg);
  }
}

namespace {

std::string num(double v) { return fmt::format("{:.12g}", v); }

std::string list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
  return out + "]";
}

}  // namespace

std::string describe(const RunConfig& c) {
  const BusDesign& d = c.design;
  std::string s;
  auto line = [&s](const std::string& l) { s += l + "\n"; };
  line("design:");
  line("  xi: " + num(d.xi));
  line("  kappa_a: " + num(d.kappa_a));
  line("  kappa_b: " + num(d.kappa_b));
  line("  eps: " + num(d.eps));
  line("  omega_q_idle_ghz: " + num(angular_to_ghz(d.omega_q_idle)));
  line("  omega_a_ghz: " + num(angular_to_ghz(d.omega_a)));
  line("  omega_b_ghz: " + num(angular_to_ghz(d.omega_b)));
  line(fmt::format("  n_qubits: {}", d.n_qubits));
  line("  boundary: " + to_string(d.boundary));
  line("synthesis:");
  line("  c_bar_ff: " + num(c.synthesis.c_bar));
  line("  ground_q_ff: " + num(c.synthesis.ground_q));
  line(fmt::format("seed: {}", c.seed));
  line("spectrum:");
  line(fmt::format("  sites: {}", c.spectrum.sites));
  line("jeff_sweep:");
  line("  omega_q_ghz: " + list(c.sweep.omega_q_ghz));
  line(fmt::format("  max_distance: {}", c.sweep.max_distance));
  line(std::string("  model: ") + to_string(c.sweep.model));
  const GateConfig& g = c.gate;
  line("gate:");
  line(fmt::format("  n_qubits: {}", g.n_qubits));
  line(fmt::format("  distances: [{}]", fmt::join(g.distances, ", ")));
  line("  omega_on_ghz: " + list(g.omega_on_ghz));
  line("  ramp_ns: " + list(g.ramp_ns));
  line("  dt_ns: " + num(g.dt_ns));
  line(fmt::format("  grid_points: {}", g.grid_points));
  line("  window_factor: " + num(g.window_factor));
  line(std::string("  target: ") + to_string(g.target));
  line("  spectator_stagger_mhz: " + num(g.spectator_stagger_mhz));
  line("  t1_us: " + list(g.t1_us));
  const VarianceStudyConfig& v = c.variance;
  line("variance:");
  line("  sigma_rel: " + num(v.sigma_rel));
  line(fmt::format("  n_realizations: {}", v.n_realizations));
  line("  omega_q_ghz: " + list(v.omega_q_ghz));
  line(fmt::format("  max_distance: {}", v.max_distance));
  line(fmt::format("  perturb_capacitors: {}", v.perturb_capacitors));
  line(fmt::format("  perturb_josephson: {}", v.perturb_josephson));
  line(fmt::format("  raw: {}", v.raw));
  return s;
}

}  // namespace qbus

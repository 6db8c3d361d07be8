#include "qbus/studies.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "qbus/csv.hpp"
#include "qbus/parallel.hpp"
#include "qbus/spin_model.hpp"

namespace qbus {

std::vector<double> dropoff_row(const InverseCapacitance& inv, Array x) {
  const auto idx = inv.indices(x, Mode::kMinus);
  std::vector<double> row;
  for (int i : idx) row.push_back(inv.matrix(idx.front(), i));
  return row;
}

DesignReport design_report(const BusDesign& d, const SynthesisOptions& opt) {
  DesignReport r;
  r.capacitors = nominal_capacitors(d, opt);
  const CircuitRealization circuit = synthesize_capacitances(d, opt);
  r.josephson_q = circuit.q.josephson.front();
  r.josephson_a = circuit.a.josephson.front();
  r.josephson_b = circuit.b.josephson.front();

  const InverseCapacitance inv = invert_spd(assemble_capacitance_matrix(circuit));
  r.both_buses = verify_direct_cancellation(inv);
  r.single_bus_a = verify_direct_cancellation(
      invert_spd(assemble_capacitance_matrix(circuit, {.include_a = true, .include_b = false})));

  const bool ring = d.boundary == Boundary::kPeriodic;
  std::optional<EffectiveParams> idle;
  if (d.eps > 0.0) {
    try {
      idle = effective_params(d, d.omega_q_idle);
    } catch (const BandEdgeError&) {
    }
  }
  for (Bus bus : {Bus::kA, Bus::kB}) {
    BusReport& b = bus == Bus::kA ? r.a : r.b;
    const NominalCapacitors& c = r.capacitors;
    const double link = bus == Bus::kA ? c.link_a : c.link_b;
    const double ground = bus == Bus::kA ? c.ground_a : c.ground_b;
    b.ground_to_coupling = link > 0.0 ? ground / link : std::numeric_limits<double>::quiet_NaN();
    b.ground_to_coupling_formula = d.xi > 0.0 ? ground_to_coupling_ratio(d, bus)
                                              : std::numeric_limits<double>::quiet_NaN();
    const auto row = dropoff_row(inv, array_of(bus));
    if (row.size() >= 6) b.fit = fit_dropoff(row, ring);
    const double w = bus == Bus::kA ? d.omega_a : d.omega_b;
    b.operating_limit = std::sqrt(std::abs(d.kappa_a * d.kappa_b)) * w / 8.0;
    b.coupling_at_idle = idle ? idle->bus(bus).coupling : std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

std::vector<SpectrumRow> spectrum_table(const BusDesign& d, int sites) {
  BusDesign ring = d;
  ring.n_qubits = sites;
  ring.boundary = Boundary::kPeriodic;
  ring.eps = 0.0;
  const SpinModel model = hamiltonian_from_design(ring);

  std::vector<SpectrumRow> rows;
  for (Bus bus : {Bus::kA, Bus::kB}) {
    const auto idx = model.array_sites(array_of(bus));
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd h(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        h(i, j) = i == j ? model.omega(idx[i]) : model.coupling(idx[i], idx[j]);
    const Eigen::VectorXd numeric = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues();

    std::vector<double> ks(static_cast<std::size_t>(sites)), analytic(ks.size());
    for (int j = 0; j < sites; ++j) {
      double k = 2.0 * std::numbers::pi * j / sites;
      if (k > std::numbers::pi) k -= 2.0 * std::numbers::pi;
      ks[static_cast<std::size_t>(j)] = k;
      analytic[static_cast<std::size_t>(j)] = aux_band(d, bus, k);
    }
    std::vector<int> order(ks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
      return analytic[static_cast<std::size_t>(l)] < analytic[static_cast<std::size_t>(r)];
    });
    std::vector<double> matched(ks.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank)
      matched[static_cast<std::size_t>(order[rank])] = numeric(static_cast<Eigen::Index>(rank));

    for (std::size_t j = 0; j < ks.size(); ++j)
      rows.push_back({bus, "mode", ks[j], analytic[j], matched[j]});
    const auto [lo, hi] = band_edges(d, bus);
    const double k_lo = aux_band(d, bus, 0.0) <= aux_band(d, bus, std::numbers::pi) ? 0.0 : std::numbers::pi;
    const double k_hi = k_lo == 0.0 ? std::numbers::pi : 0.0;
    rows.push_back({bus, "edge_low", k_lo, lo, numeric.minCoeff()});
    rows.push_back({bus, "edge_high", k_hi, hi, numeric.maxCoeff()});
  }
  return rows;
}

std::vector<GateRow> gate_study(const BusDesign& d, const GateConfig& g, int threads) {
  BusDesign design = d;
  design.n_qubits = g.n_qubits;
  std::vector<GateRow> rows;
  for (int dist : g.distances)
    for (double f : g.omega_on_ghz)
      for (double ramp : g.ramp_ns) rows.push_back({dist, ghz_to_angular(f), ramp, {}});

  HoldSearch search;
  search.grid_points = g.grid_points;
  search.window_factor = g.window_factor;
  search.target = g.target;
  search.dt = g.dt_ns;
  parallel_for(static_cast<int>(rows.size()), threads, [&](int i) {
    GateRow& row = rows[static_cast<std::size_t>(i)];
    ScheduleSpec spec;
    spec.qubit_i = 0;
    spec.qubit_j = row.distance;
    spec.omega_on = row.omega_on;
    spec.omega_idle = design.omega_q_idle;
    spec.ramp_time = row.ramp;
    spec.spectator_stagger = mhz_to_angular(g.spectator_stagger_mhz);
    row.optimum = optimize_hold_time(design, spec, search);
  });
  return rows;
}

const std::vector<std::string>& study_names() {
  static const std::vector<std::string> names{"design-report", "spectrum", "jeff-sweep", "gate",
                                              "variance"};
  return names;
}

namespace {

const char* bus_name(Bus b) { return b == Bus::kA ? "a" : "b"; }

std::string output_path(const RunConfig& cfg, const std::string& file) {
  return (std::filesystem::path(cfg.output_dir) / file).string();
}

std::vector<std::string> write_design_report(const RunConfig& cfg, const std::string& meta) {
  const DesignReport r = design_report(cfg.design, cfg.synthesis);
  const std::string path = output_path(cfg, "design_report.csv");
  CsvWriter csv(path, "design-report", meta, {"quantity", "array", "value", "unit"});
  const NominalCapacitors& c = r.capacitors;
  csv.row("shunt", "q", c.shunt_q, "fF");
  csv.row("ground", "q", c.ground_q, "fF");
  csv.row("shunt", "a", c.shunt_a, "fF");
  csv.row("ground", "a", c.ground_a, "fF");
  csv.row("link", "a", c.link_a, "fF");
  csv.row("data_coupling", "a", c.data_a, "fF");
  csv.row("shunt", "b", c.shunt_b, "fF");
  csv.row("ground", "b", c.ground_b, "fF");
  csv.row("link", "b", c.link_b, "fF");
  csv.row("data_coupling", "b", c.data_b, "fF");
  csv.row("josephson", "q", angular_to_ghz(r.josephson_q), "GHz");
  csv.row("josephson", "a", angular_to_ghz(r.josephson_a), "GHz");
  csv.row("josephson", "b", angular_to_ghz(r.josephson_b), "GHz");
  for (Bus bus : {Bus::kA, Bus::kB}) {
    const BusReport& b = bus == Bus::kA ? r.a : r.b;
    csv.row("ground_to_coupling", bus_name(bus), b.ground_to_coupling, "1");
    csv.row("ground_to_coupling_formula", bus_name(bus), b.ground_to_coupling_formula, "1");
    csv.row("dropoff_kappa_fit", bus_name(bus), b.fit.kappa, "1");
    csv.row("dropoff_xi_fit", bus_name(bus), b.fit.xi, "1");
    csv.row("dropoff_scale_fit", bus_name(bus), b.fit.c_scale, "fF");
    csv.row("dropoff_fit_residual", bus_name(bus), b.fit.max_residual, "1");
    csv.row("coupling_at_idle", bus_name(bus), angular_to_mhz(b.coupling_at_idle), "MHz");
    csv.row("operating_limit", bus_name(bus), angular_to_mhz(b.operating_limit), "MHz");
  }
  csv.row("offdiag_max", "q", r.both_buses.max_offdiag_qq, "1/fF");
  csv.row("offdiag_ratio", "q", r.both_buses.ratio_to_diag, "1");
  csv.row("offdiag_ratio_single_bus", "q", r.single_bus_a.ratio_to_diag, "1");
  csv.close();
  return {path};
}

std::vector<std::string> write_spectrum(const RunConfig& cfg, const std::string& meta) {
  const auto rows = spectrum_table(cfg.design, cfg.spectrum.sites);
  const std::string path = output_path(cfg, "spectrum.csv");
  CsvWriter csv(path, "spectrum", meta, {"bus", "kind", "k", "analytic_ghz", "numeric_ghz"});
  for (const auto& r : rows)
    csv.row(bus_name(r.bus), r.kind, r.k, angular_to_ghz(r.analytic), angular_to_ghz(r.numeric));
  csv.close();
  return {path};
}

std::vector<std::string> write_sweep(const RunConfig& cfg, const std::string& meta) {
  std::vector<double> grid;
  for (double f : cfg.sweep.omega_q_ghz) grid.push_back(ghz_to_angular(f));
  SweepOptions opt;
  opt.max_distance = cfg.sweep.max_distance;
  opt.model = cfg.sweep.model;
  opt.synthesis = cfg.synthesis;
  opt.threads = cfg.threads;
  const auto rows = sweep_jeff(cfg.design, grid, opt);
  const std::string path = output_path(cfg, "jeff_sweep.csv");
  CsvWriter csv(path, "jeff-sweep", meta,
                {"omega_q_ghz", "distance", "jeff_analytic_mhz", "jeff_numeric_mhz", "zeta_a",
                 "zeta_b", "hybridized", "data_weight"});
  for (const auto& r : rows)
    csv.row(angular_to_ghz(r.omega_q), r.distance, angular_to_mhz(r.jeff_analytic),
            angular_to_mhz(r.jeff_numeric), r.zeta_a, r.zeta_b, r.hybridized, r.data_weight);
  csv.close();
  return {path};
}

std::vector<std::string> write_gate(const RunConfig& cfg, const std::string& meta) {
  const auto rows = gate_study(cfg.design, cfg.gate, cfg.threads);
  std::vector<std::string> columns{"distance", "omega_on_ghz", "ramp_ns", "hold_ns", "total_ns",
                                   "error", "leakage", "swap_error", "phase_i", "phase_j",
                                   "global_phase", "convergence", "at_boundary", "coupling_mhz"};
  for (double t1 : cfg.gate.t1_us) columns.push_back(fmt::format("decoherence_t1_{:g}us", t1));
  const std::string path = output_path(cfg, "gate.csv");
  CsvWriter csv(path, "gate", meta, columns);
  for (const auto& r : rows) {
    const HoldOptimum& o = r.optimum;
    std::vector<std::string> f{csv_field(r.distance),
                               csv_field(angular_to_ghz(r.omega_on)),
                               csv_field(r.ramp),
                               csv_field(o.hold_time),
                               csv_field(o.total_time),
                               csv_field(o.result.error),
                               csv_field(o.result.leakage),
                               csv_field(o.swap_error),
                               csv_field(o.result.phase_i),
                               csv_field(o.result.phase_j),
                               csv_field(o.result.global_phase),
                               csv_field(o.result.convergence),
                               csv_field(o.at_boundary),
                               csv_field(angular_to_mhz(o.coupling_estimate))};
    for (double t1 : cfg.gate.t1_us) f.push_back(csv_field(decoherence_error(o.total_time, t1 * 1e3, 2)));
    csv.write_row(f);
  }
  csv.close();
  return {path};
}

std::vector<std::string> write_variance(const RunConfig& cfg, const std::string& meta) {
  VarianceConfig vc;
  const VarianceStudyConfig& v = cfg.variance;
  vc.sigma_rel = v.sigma_rel;
  vc.n_realizations = v.n_realizations;
  vc.seed = cfg.seed;
  for (double f : v.omega_q_ghz) vc.omega_q_grid.push_back(ghz_to_angular(f));
  vc.max_distance = v.max_distance;
  vc.perturb_capacitors = v.perturb_capacitors;
  vc.perturb_josephson = v.perturb_josephson;
  vc.keep_raw = v.raw;
  vc.synthesis = cfg.synthesis;
  vc.threads = cfg.threads;
  const QuantileTable t = variance_study(cfg.design, vc);

  std::vector<std::string> written;
  const std::string path = output_path(cfg, "variance.csv");
  CsvWriter csv(path, "variance", meta,
                {"omega_q_ghz", "distance", "q10_mhz", "q50_mhz", "q90_mhz", "nominal_mhz",
                 "median_abs_mhz", "n_valid", "n_failed"});
  for (const auto& r : t.rows)
    csv.row(angular_to_ghz(r.omega_q), r.distance, angular_to_mhz(r.q10), angular_to_mhz(r.q50),
            angular_to_mhz(r.q90), angular_to_mhz(r.nominal), angular_to_mhz(r.median_abs),
            r.n_valid, r.n_failed);
  csv.close();
  written.push_back(path);

  if (v.raw) {
    const std::string raw_path = output_path(cfg, "variance_raw.csv");
    CsvWriter raw(raw_path, "variance", meta, {"realization", "omega_q_ghz", "distance", "jeff_mhz"});
    for (const auto& s : t.raw)
      raw.row(s.realization, angular_to_ghz(s.omega_q), s.distance, angular_to_mhz(s.value));
    raw.close();
    written.push_back(raw_path);
  }
  return written;
}

}  // namespace

std::vector<std::string> run_study(const std::string& study, const RunConfig& cfg) {
  const std::string meta = describe(cfg);
  std::filesystem::create_directories(cfg.output_dir);
  if (study == "design-report") return write_design_report(cfg, meta);
  if (study == "spectrum") return write_spectrum(cfg, meta);
  if (study == "jeff-sweep") return write_sweep(cfg, meta);
  if (study == "gate") return write_gate(cfg, meta);
  if (study == "variance") return write_variance(cfg, meta);
  throw std::invalid_argument("unknown study '" + study + "'");
}

}  // namespace qbus

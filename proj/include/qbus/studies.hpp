#pragma once

// The five batch studies behind the CLI subcommands. Each has a pure
// computation returning rows and a writer producing the documented CSV.

#include <string>
#include <vector>

#include "qbus/cap_algebra.hpp"
#include "qbus/circuit.hpp"
#include "qbus/config.hpp"
#include "qbus/dynamics.hpp"
#include "qbus/effective.hpp"
#include "qbus/montecarlo.hpp"

namespace qbus {

/// Row of C^{-1} for bus array x (minus coordinates) from site 0, by distance
/// index 0..L-1.
std::vector<double> dropoff_row(const InverseCapacitance& inv, Array x);

struct BusReport {
  double ground_to_coupling = 0.0;          // synthesized C_G / C_c
  double ground_to_coupling_formula = 0.0;  // closed form
  DropoffFit fit;                           // fit of the realized network
  double coupling_at_idle = 0.0;            // J_alpha at omega_q_idle, rad/ns
  double operating_limit = 0.0;             // sqrt|kappa_a kappa_b| omega_alpha / 8, rad/ns
};

struct DesignReport {
  NominalCapacitors capacitors;
  double josephson_q = 0.0, josephson_a = 0.0, josephson_b = 0.0;  // site 0, rad/ns
  BusReport a, b;
  CancellationReport both_buses;
  CancellationReport single_bus_a;  // b array removed
};

DesignReport design_report(const BusDesign& d, const SynthesisOptions& opt = {});

struct SpectrumRow {
  Bus bus = Bus::kA;
  std::string kind;  // "mode", "edge_low" or "edge_high"
  double k = 0.0;
  double analytic = 0.0;  // rad/ns
  double numeric = 0.0;   // rad/ns, dense diagonalization of the isolated ring
};

/// Isolated-bus rings of `sites` sites: one row per wavenumber 2 pi j / sites
/// (mapped into (-pi, pi]) and the two band edges per bus.
std::vector<SpectrumRow> spectrum_table(const BusDesign& d, int sites);

struct GateRow {
  int distance = 0;
  double omega_on = 0.0;
  double ramp = 0.0;
  HoldOptimum optimum;
};

/// Every (distance, omega_on, ramp) combination with the pair (0, distance).
std::vector<GateRow> gate_study(const BusDesign& d, const GateConfig& g, int threads);

/// Runs one study from a validated configuration, writing into
/// cfg.output_dir. Returns the paths written.
std::vector<std::string> run_study(const std::string& study, const RunConfig& cfg);

const std::vector<std::string>& study_names();

}  // namespace qbus

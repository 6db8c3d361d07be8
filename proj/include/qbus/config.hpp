#pragma once

// Run configuration: one YAML file per experiment. Frequencies are given as
// omega / 2 pi in GHz, couplings in MHz, times in ns.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbus/circuit.hpp"
#include "qbus/dynamics.hpp"
#include "qbus/effective.hpp"
#include "qbus/params.hpp"

namespace qbus {

/// Malformed or unreadable configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed configuration that violates a physical or study constraint
/// (CLI exit code 3).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// start, start + step, ... up to stop inclusive (within step / 1000).
std::vector<double> linear_grid(double start, double stop, double step);

struct SpectrumConfig {
  int sites = 101;  // ring size used for the dense check
};

struct SweepConfig {
  std::vector<double> omega_q_ghz = linear_grid(3.2, 4.8, 0.01);
  int max_distance = 4;
  SweepModel model = SweepModel::kDesign;
};

struct GateConfig {
  int n_qubits = 7;  // replaces design.n_qubits for the gate study
  std::vector<int> distances{1, 2, 3};
  std::vector<double> omega_on_ghz{4.70, 4.72, 4.74, 4.75};
  std::vector<double> ramp_ns{10, 20, 30, 40, 50};
  double dt_ns = 0.02;
  int grid_points = 200;
  double window_factor = 1.0;
  GateTarget target = GateTarget::kISwap;
  double spectator_stagger_mhz = 30.0;
  std::vector<double> t1_us{10, 100, 1000};
};

struct VarianceStudyConfig {
  double sigma_rel = 0.02;
  int n_realizations = 100;
  std::vector<double> omega_q_ghz = linear_grid(3.6, 4.4, 0.02);
  int max_distance = 1;
  bool perturb_capacitors = true;
  bool perturb_josephson = true;
  bool raw = false;
};

struct RunConfig {
  BusDesign design;
  SynthesisOptions synthesis;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string output_dir = ".";
  SpectrumConfig spectrum;
  SweepConfig sweep;
  GateConfig gate;
  VarianceStudyConfig variance;
};

/// Parses a YAML document. Throws ConfigError on syntax errors, wrong types and
/// unknown keys. Does not validate the physics.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Throws ValidationError listing every design violation and invalid study
/// parameter for the named study.
void validate_config(const RunConfig& cfg, const std::string& study);

/// Canonical YAML rendering of the resolved configuration. Parsing the result
/// yields the same RunConfig except for output_dir and threads, which do not
/// affect results and are left out so reruns stay byte-identical.
std::string describe(const RunConfig& cfg);

const char* to_string(SweepModel m);
const char* to_string(GateTarget t);

}  // namespace qbus

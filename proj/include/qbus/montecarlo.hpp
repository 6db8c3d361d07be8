#pragma once

// Fabrication-variance Monte Carlo: independent normal perturbations of every
// circuit element, exact rebuild of the circuit-level model, quantiles of the
// numerically extracted effective couplings.

#include <cstdint>
#include <vector>

#include "qbus/circuit.hpp"
#include "qbus/params.hpp"

namespace qbus {

struct VarianceConfig {
  double sigma_rel = 0.02;
  int n_realizations = 100;
  std::uint64_t seed = 1;
  std::vector<double> omega_q_grid;  // rad/ns
  int max_distance = 1;
  bool perturb_capacitors = true;
  bool perturb_josephson = true;
  bool keep_raw = false;
  SynthesisOptions synthesis;
  int threads = 1;
};

struct SampledRealization {
  CircuitRealization circuit;
  int resamples = 0;  // non-positive draws that were redrawn
};

/// Multiplies every capacitor and Josephson energy by an independent N(1, sigma)
/// factor, redrawing non-positive factors. The stream depends only on
/// (seed, index).
SampledRealization sample_realization(const CircuitRealization& nominal, double sigma_rel,
                                      std::uint64_t index, std::uint64_t seed,
                                      bool perturb_capacitors = true,
                                      bool perturb_josephson = true);

/// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double p);

struct QuantileRow {
  double omega_q = 0.0;
  int distance = 0;
  double q10 = 0.0, q50 = 0.0, q90 = 0.0;
  double nominal = 0.0;
  double median_abs = 0.0;
  int n_valid = 0;
  int n_failed = 0;  // realizations excluded by a failed projection
};

struct RawSample {
  int realization = 0;
  double omega_q = 0.0;
  int distance = 0;
  double value = 0.0;  // NaN when the projection failed
};

struct QuantileTable {
  std::vector<QuantileRow> rows;  // grid-major, then distance
  std::vector<RawSample> raw;     // filled when keep_raw is set
  int total_resamples = 0;
};

/// The coupling reported for distance d is the effective Hamiltonian entry
/// between data qubits 0 and d of each realization. Data qubits are retuned to
/// each grid frequency; their Josephson energies do not enter.
QuantileTable variance_study(const BusDesign& d, const VarianceConfig& cfg);

}  // namespace qbus

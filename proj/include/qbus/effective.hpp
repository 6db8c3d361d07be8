#pragma once

// Effective data-qubit theory after eliminating both buses: the closed-form
// second-order result and a numerical extraction from exact diagonalization.

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qbus/circuit.hpp"
#include "qbus/params.hpp"
#include "qbus/spin_model.hpp"

namespace qbus {

/// Single-excitation band of an isolated bus at wavenumber k, rad/ns.
double aux_band(const BusDesign& d, Bus bus, double k);

/// Lower and upper band edges of one bus, rad/ns.
std::pair<double, double> band_edges(const BusDesign& d, Bus bus);

class BandEdgeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BusEffective {
  double delta_0 = 0.0;      // omega_q - E_0
  double delta_pi = 0.0;     // omega_q - E_pi
  double delta_half = 0.0;   // omega_q - E_{pi/2}
  double delta_tilde = 0.0;  // effective detuning
  double coupling = 0.0;     // J_alpha
  double zeta = 0.0;         // effective drop-off
  double shift = 0.0;        // contribution to omega_q_bar - omega_q
};

struct EffectiveParams {
  double omega_q = 0.0;
  double omega_q_bar = 0.0;
  BusEffective a, b;
  // omega_q lies inside (or on) at least one band; values are then NaN.
  bool hybridized = false;

  const BusEffective& bus(Bus x) const { return x == Bus::kA ? a : b; }
  /// Diagonal of the effective Hamiltonian: omega_q_bar plus the distance-zero
  /// term J_a - J_b.
  double onsite() const { return omega_q_bar + a.coupling - b.coupling; }
};

/// Throws BandEdgeError when omega_q sits on a band edge.
EffectiveParams effective_params(const BusDesign& d, double omega_q);

/// J_a zeta_a^dist - J_b zeta_b^dist.
double analytic_jeff(const EffectiveParams& p, int dist);
double analytic_jeff(const BusDesign& d, double omega_q, int dist);

class HybridizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EffectiveHamiltonian {
  Eigen::MatrixXd matrix;          // over data sites, rad/ns
  std::vector<double> j_by_distance;  // d = 0..L/2 (periodic) or 0..L-1 (open)
  double omega_q_bar = 0.0;        // mean diagonal
  Eigen::VectorXd selected_energies;
  Eigen::VectorXd selected_weights;  // data-subspace weight of each selected mode
  Eigen::VectorXd all_weights;       // weight of every sector-1 eigenvector, by energy
};

/// Projects the single-excitation sector onto the data qubits: the L
/// eigenvectors with the largest data weight are selected (each must exceed
/// 0.5 and be separated from the next candidate by at least 1e-6), their data
/// components are Loewdin-orthonormalized and H_eff = W diag(E) W^T.
EffectiveHamiltonian numeric_effective_hamiltonian(const SpinModel& model);

enum class SweepModel { kDesign, kCircuit };

struct SweepRow {
  double omega_q = 0.0;
  int distance = 0;
  double jeff_analytic = 0.0;  // NaN when hybridized
  double jeff_numeric = 0.0;   // NaN when the projection fails
  double zeta_a = 0.0;
  double zeta_b = 0.0;
  bool hybridized = false;
  double data_weight = 0.0;  // smallest selected data weight, NaN on failure
};

struct SweepOptions {
  int max_distance = 4;
  SweepModel model = SweepModel::kDesign;
  SynthesisOptions synthesis;  // circuit model only
  int threads = 1;
};

/// One row per (grid point, distance 1..max_distance), grid-major.
std::vector<SweepRow> sweep_jeff(const BusDesign& d, std::span<const double> omega_q_grid,
                                 const SweepOptions& opt = {});

}  // namespace qbus

#pragma once

// Two-level, excitation-conserving spin model of the three arrays and its
// fixed-excitation sectors. Energies are measured from the all-ground state.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qbus/cap_algebra.hpp"
#include "qbus/circuit.hpp"
#include "qbus/params.hpp"

namespace qbus {

/// E_J / hbar (rad/ns) that gives a transmon with inverse capacitance c_inv
/// (1/fF) the angular frequency omega, from omega = sqrt(8 E_C E_J).
double josephson_for_frequency(double omega, double c_inv);
double transmon_frequency(double josephson, double c_inv);

struct SiteLabel {
  Array array = Array::kQ;
  int index = 0;

  bool operator==(const SiteLabel&) const = default;
};

struct SpinModel {
  int n_qubits = 0;  // L, sites per array
  Boundary boundary = Boundary::kPeriodic;
  std::vector<SiteLabel> sites;
  Eigen::VectorXd omega;     // rad/ns
  Eigen::MatrixXd coupling;  // flip-flop J_mn, rad/ns

  int n_sites() const { return static_cast<int>(sites.size()); }
  std::optional<int> site_index(Array x, int index) const;
  /// Site indices of one array ordered by position.
  std::vector<int> array_sites(Array x) const;
};

/// Circuit-level model from the minus-coordinate block of C^{-1}. The Josephson
/// energies are taken from the realization. When data_omega is given, data
/// qubit m is tuned to data_omega[m] instead (as a flux bias would).
SpinModel hamiltonian_from_circuit(const InverseCapacitance& inv, const CircuitRealization& r,
                                   std::optional<std::span<const double>> data_omega = {});

/// Assembles, inverts and builds the model in one step.
SpinModel hamiltonian_from_circuit(const CircuitRealization& r,
                                   std::optional<std::span<const double>> data_omega = {});

/// Design-level model. data_omega overrides the idle frequency per data qubit.
/// Ring distances use the minimum image.
SpinModel hamiltonian_from_design(const BusDesign& d,
                                  std::optional<std::span<const double>> data_omega = {});

class SectorBasis {
 public:
  SectorBasis(int n_sites, int n_excitations);

  int n_sites() const { return n_sites_; }
  int n_excitations() const { return k_; }
  int size() const { return static_cast<int>(states_.size()); }
  /// Excited sites of state i, ascending.
  const std::vector<int>& state(int i) const { return states_[static_cast<std::size_t>(i)]; }
  /// Index of a sorted site list, or -1 when it is not a state of this basis.
  int lookup(const std::vector<int>& sites) const;

 private:
  int n_sites_;
  int k_;
  std::vector<std::vector<int>> states_;
  std::map<std::vector<int>, int> index_;
};

Eigen::MatrixXd sector_matrix(const SpinModel& model, const SectorBasis& basis);

}  // namespace qbus

#pragma once

// Circuit synthesis: concrete capacitor and Josephson values for a BusDesign,
// and assembly of the capacitance matrix in the (minus, plus) pad basis.
//
// Every transmon has two pads, "up" and "down". For each site the node fluxes
// are recombined into Phi_minus = Phi_up - Phi_down (the junction phase, the
// qubit coordinate) and Phi_plus = Phi_up + Phi_down (an extraneous coordinate
// without an inductive term).

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbus/params.hpp"

namespace qbus {

enum class Array { kQ, kA, kB };
enum class Mode { kMinus, kPlus };

const char* to_string(Array a);
Array array_of(Bus b);

struct Coordinate {
  Array array = Array::kQ;
  Mode mode = Mode::kMinus;
  int site = 0;

  bool operator==(const Coordinate&) const = default;
};

/// Per-element values of one array. Link m joins site m to site m+1 (mod L on
/// a ring); the data array carries no links.
struct ArrayElements {
  std::vector<double> shunt;        // C_Q, fF
  std::vector<double> ground_up;    // C_G on the up pad, fF
  std::vector<double> ground_down;  // C_G on the down pad, fF
  std::vector<double> link;         // C_c, fF
  std::vector<double> josephson;    // E_J / hbar, rad/ns
};

struct CircuitRealization {
  int n_sites = 0;
  Boundary boundary = Boundary::kPeriodic;
  double c_bar = 0.0;  // normalization capacitance, fF

  ArrayElements q, a, b;
  // Data-bus coupling capacitors, one per pad pair.
  std::vector<double> data_a_up, data_a_down;
  std::vector<double> data_b_up, data_b_down;

  const ArrayElements& elements(Array x) const;
  ArrayElements& elements(Array x);
  int n_links() const;
};

/// Uniform (design-level) capacitor values, fF.
struct NominalCapacitors {
  double c_bar = 0.0;
  double shunt_q = 0.0, ground_q = 0.0;
  double shunt_a = 0.0, ground_a = 0.0, link_a = 0.0;
  double shunt_b = 0.0, ground_b = 0.0, link_b = 0.0;
  double data_a = 0.0, data_b = 0.0;
};

struct SynthesisOptions {
  double c_bar = 100.0;    // common C-bar for all three arrays, fF
  double ground_q = 10.0;  // data-array pad-to-ground capacitance, fF
};

class SynthesisError : public std::runtime_error {
 public:
  SynthesisError(const std::string& element, const std::string& why)
      : std::runtime_error("synthesis: " + element + ": " + why), element_(element) {}
  const std::string& element() const { return element_; }

 private:
  std::string element_;
};

/// Closed-form capacitor values. With equal C-bar on every array the balance
/// condition kappa_a C_qa^2 = |kappa_b| C_qb^2 and the definition of eps fix
/// C_qa = 2 eps C (|kb|/ka)^{1/4} and C_qb = 2 eps C (ka/|kb|)^{1/4}.
NominalCapacitors nominal_capacitors(const BusDesign& d, const SynthesisOptions& opt = {});

/// Full realization including Josephson energies, which are solved so that the
/// circuit reproduces the design frequencies exactly at every site.
CircuitRealization synthesize_capacitances(const BusDesign& d, const SynthesisOptions& opt = {});

/// Builds a realization with uniform values and zero Josephson energies.
CircuitRealization uniform_realization(const NominalCapacitors& c, int n_sites, Boundary boundary);

struct CapacitanceNetwork {
  Eigen::MatrixXd matrix;
  std::vector<Coordinate> labels;
  Boundary boundary = Boundary::kPeriodic;
  int n_sites = 0;

  std::optional<int> index_of(const Coordinate& c) const;
  std::vector<int> indices(Array x, Mode m) const;
  std::vector<int> indices(Mode m) const;
};

struct AssemblyOptions {
  bool include_a = true;
  bool include_b = true;
};

/// Stamps every capacitor between its two nodes (or node and ground) and
/// transforms to the (minus, plus) basis. Coordinates whose row vanishes
/// identically (a massless, uncoupled plus mode) are dropped.
CapacitanceNetwork assemble_capacitance_matrix(const CircuitRealization& r,
                                               const AssemblyOptions& opt = {});

/// C_G / C_c for one bus: (1 - xi)^2 (1 + kappa / kappa_max) / (2 xi), with
/// kappa signed so both buses follow the synthesized values.
double ground_to_coupling_ratio(const BusDesign& d, Bus bus);

}  // namespace qbus

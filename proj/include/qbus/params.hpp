#pragma once

// Design parameters, unit conventions and physical constants for the two-bus
// data-qubit coupler.
//
// Units: hbar = 1. Frequencies and energies are angular frequencies in rad/ns.
// Capacitances are in femtofarads. User-facing I/O uses GHz (omega / 2 pi) and
// MHz; conversions live here and nowhere else.

#include <numbers>
#include <string>
#include <vector>

namespace qbus {

enum class Boundary { kPeriodic, kOpen };

/// The two auxiliary arrays: "a" is the A-A bus (kappa > 0), "b" the A-B bus.
enum class Bus { kA, kB };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

struct BusDesign {
  double xi = 0.0;       // engineered geometric drop-off
  double kappa_a = 0.0;  // A-A bus strength, >= 0
  double kappa_b = 0.0;  // A-B bus strength, <= 0
  double eps = 0.0;      // data-bus coupling scale
  double omega_q_idle = 0.0;
  double omega_a = 0.0;
  double omega_b = 0.0;
  int n_qubits = 1;
  Boundary boundary = Boundary::kPeriodic;
};

namespace constants {

inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kHbar = kPlanck / (2.0 * std::numbers::pi);
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);
inline constexpr double kFemtofarad = 1e-15;

/// Charging energy E_C = e^2 / 2C of a 1 fF capacitor, as E_C/hbar in rad/ns.
inline constexpr double kChargingRate1fF =
    kElementaryCharge * kElementaryCharge / (2.0 * kFemtofarad * kHbar) * 1e-9;

/// Same quantity as E_C/h in GHz.
inline constexpr double kChargingGhz1fF =
    kElementaryCharge * kElementaryCharge / (2.0 * kFemtofarad * kPlanck) * 1e-9;

}  // namespace constants

struct Violation {
  std::string constraint;
  double actual = 0.0;
  double bound = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& constraint) const;
  std::string summary() const;
};

/// Largest |kappa| an array with drop-off xi can realize: (1 - xi) / (1 + xi).
/// Throws std::domain_error outside 0 <= xi < 1.
double kappa_max(double xi);

ValidationReport validate_design(const BusDesign& d);

constexpr double ghz_to_angular(double f_ghz) { return 2.0 * std::numbers::pi * f_ghz; }
constexpr double angular_to_ghz(double w) { return w / (2.0 * std::numbers::pi); }
constexpr double mhz_to_angular(double f_mhz) { return ghz_to_angular(f_mhz * 1e-3); }
constexpr double angular_to_mhz(double w) { return angular_to_ghz(w) * 1e3; }

/// The reference design: xi = 0.3,
/// kappa_a = -kappa_b = 0.1, eps = 0.01, buses at 3 and 5 GHz, data idle at 4 GHz.
BusDesign reference_design(int n_qubits = 11);

}  // namespace qbus

#include "qbus/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qbus {

std::string to_string(Boundary b) {
  return b == Boundary::kPeriodic ? "periodic" : "open";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::kPeriodic;
  if (s == "open") return Boundary::kOpen;
  throw std::invalid_argument("unknown boundary '" + s + "' (expected periodic or open)");
}

bool ValidationReport::has(const std::string& constraint) const {
  for (const auto& v : violations)
    if (v.constraint == constraint) return true;
  return false;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].constraint << " (actual " << violations[i].actual << ", bound "
       << violations[i].bound << ")";
  }
  return os.str();
}

double kappa_max(double xi) {
  if (!(xi >= 0.0 && xi < 1.0))
    throw std::domain_error("kappa_max: xi must lie in [0, 1)");
  return (1.0 - xi) / (1.0 + xi);
}

ValidationReport validate_design(const BusDesign& d) {
  ValidationReport r;
  auto add = [&r](const char* name, double actual, double bound) {
    r.violations.push_back({name, actual, bound});
  };

  if (!(d.xi >= 0.0 && d.xi < 1.0)) {
    add("xi range", d.xi, d.xi < 0.0 ? 0.0 : 1.0);
  } else {
    const double km = kappa_max(d.xi);
    if (std::abs(d.kappa_a) > km) add("kappa bound", d.kappa_a, km);
    if (std::abs(d.kappa_b) > km) add("kappa bound", d.kappa_b, km);
  }
  if (d.kappa_a < 0.0) add("kappa sign", d.kappa_a, 0.0);
  if (d.kappa_b > 0.0) add("kappa sign", d.kappa_b, 0.0);
  if (d.eps < 0.0) add("eps sign", d.eps, 0.0);

  if (d.omega_q_idle != 0.0 && d.omega_a != 0.0 && d.omega_b != 0.0) {
    if (!(d.omega_a < d.omega_q_idle)) add("frequency ordering", d.omega_a, d.omega_q_idle);
    if (!(d.omega_q_idle < d.omega_b)) add("frequency ordering", d.omega_b, d.omega_q_idle);
  }
  if (d.omega_q_idle < 0.0 || d.omega_a < 0.0 || d.omega_b < 0.0)
    add("frequency sign", std::min({d.omega_q_idle, d.omega_a, d.omega_b}), 0.0);

  if (d.n_qubits < 1) add("n_qubits", d.n_qubits, 1);
  if (d.boundary == Boundary::kPeriodic && d.n_qubits >= 1 && d.n_qubits < 3)
    add("ring size", d.n_qubits, 3);
  return r;
}

BusDesign reference_design(int n_qubits) {
  BusDesign d;
  d.xi = 0.3;
  d.kappa_a = 0.1;
  d.kappa_b = -0.1;
  d.eps = 0.01;
  d.omega_q_idle = ghz_to_angular(4.0);
  d.omega_a = ghz_to_angular(3.0);
  d.omega_b = ghz_to_angular(5.0);
  d.n_qubits = n_qubits;
  d.boundary = Boundary::kPeriodic;
  return d;
}

}  // namespace qbus

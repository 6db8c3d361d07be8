#pragma once

// Inverse-capacitance algebra: SPD inversion, Schur-complement effective
// capacitance, geometric drop-off fitting and direct-coupling diagnostics.

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qbus/circuit.hpp"

namespace qbus {

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InverseCapacitance {
  Eigen::MatrixXd matrix;  // 1/fF
  std::vector<Coordinate> labels;
  int n_sites = 0;
  Boundary boundary = Boundary::kPeriodic;

  std::optional<int> index_of(const Coordinate& c) const;
  std::vector<int> indices(Array x, Mode m) const;
  std::vector<int> indices(Mode m) const;
  /// Sub-block between two coordinate families, rows by site.
  Eigen::MatrixXd block(Array row, Mode row_mode, Array col, Mode col_mode) const;
};

/// Inverse through a Cholesky factorization. Throws FactorizationError when the
/// input is not symmetric positive definite.
Eigen::MatrixXd invert_spd(const Eigen::MatrixXd& c);
InverseCapacitance invert_spd(const CapacitanceNetwork& c);

/// Schur complement C_kk - C_kx C_xx^{-1} C_xk over the kept coordinates, in
/// the order given.
Eigen::MatrixXd effective_capacitance(const Eigen::MatrixXd& c, std::span<const int> kept);

struct DropoffFit {
  double c_scale = 0.0;  // C_A, fF
  double kappa = 0.0;
  double xi = 0.0;
  // Largest |model - data| over the fitted distances, relative to the
  // diagonal entry.
  double max_residual = 0.0;
};

/// Fits row[d] = (delta_{d0} + kappa g_d(xi)) / C_A where row[d] is the
/// inverse-capacitance entry at distance d from a reference site. On a ring of
/// L = row.size() sites g_d sums every periodic image,
/// g_d = (xi^d + xi^{L-d}) / (1 - xi^L), and distances 0..L/2 are fitted; on an
/// open chain g_d = xi^d over the whole row.
DropoffFit fit_dropoff(std::span<const double> row, bool periodic);

struct CancellationReport {
  double max_offdiag_qq = 0.0;  // 1/fF
  double ratio_to_diag = 0.0;
};

/// Largest |off-diagonal| of the data (q minus) block of C^{-1} and its ratio
/// to the mean diagonal.
CancellationReport verify_direct_cancellation(const InverseCapacitance& inv);

}  // namespace qbus

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qbus/effective.hpp"

using namespace qbus;

namespace {

double ghz(double f) { return ghz_to_angular(f); }

}  // namespace

TEST_CASE("band edges") {
  const BusDesign d = reference_design();
  for (Bus bus : {Bus::kA, Bus::kB}) {
    const double w = bus == Bus::kA ? d.omega_a : d.omega_b;
    const double k = bus == Bus::kA ? d.kappa_a : d.kappa_b;
    const double r = k / (1.0 + k);
    // k = 0 and k = pi of the band, summed geometric series in closed form.
    const double e0 = w * (1.0 + r * d.xi / (1.0 - d.xi));
    const double epi = w * (1.0 - r * d.xi / (1.0 + d.xi));
    CHECK(aux_band(d, bus, 0.0) == doctest::Approx(e0).epsilon(1e-14));
    CHECK(aux_band(d, bus, std::numbers::pi) == doctest::Approx(epi).epsilon(1e-14));
    CHECK(aux_band(d, bus, std::acos(d.xi)) == doctest::Approx(w).epsilon(1e-14));
  }
  const auto [alo, ahi] = band_edges(d, Bus::kA);
  const auto [blo, bhi] = band_edges(d, Bus::kB);
  CHECK(std::abs(angular_to_ghz(alo) - 2.9371) < 5e-5);
  CHECK(std::abs(angular_to_ghz(ahi) - 3.1169) < 5e-5);
  CHECK(std::abs(angular_to_ghz(blo) - 4.7619) < 5e-5);
  CHECK(std::abs(angular_to_ghz(bhi) - 5.1282) < 5e-5);
}

TEST_CASE("effective drop-off") {
  const BusDesign d = reference_design();
  CHECK(std::abs(effective_params(d, ghz(4.0)).a.zeta - 0.34) < 0.005);

  const auto far = effective_params(d, ghz(100.0));
  CHECK(std::abs(far.a.zeta - d.xi) < 1e-3);
  CHECK(std::abs(far.b.zeta - d.xi) < 1e-3);

  const double delta = ghz(1e-5);
  const auto [alo, ahi] = band_edges(d, Bus::kA);
  const auto [blo, bhi] = band_edges(d, Bus::kB);
  CHECK(effective_params(d, ahi + delta).a.zeta > 0.95);
  CHECK(effective_params(d, alo - delta).a.zeta < -0.95);
  CHECK(effective_params(d, blo - delta).b.zeta > 0.95);
  CHECK(effective_params(d, bhi + delta).b.zeta < -0.95);

  CHECK_THROWS_AS(effective_params(d, blo), BandEdgeError);
}

TEST_CASE("hybridized frequencies are flagged") {
  const BusDesign d = reference_design();
  const auto p = effective_params(d, ghz(4.9));
  CHECK(p.hybridized);
  CHECK(std::isnan(p.b.coupling));
  CHECK(std::isnan(analytic_jeff(p, 1)));
  CHECK_FALSE(effective_params(d, ghz(4.0)).hybridized);
}

TEST_CASE("the two buses cancel far from both bands") {
  const BusDesign d = reference_design();
  double prev = 1.0;
  for (double f : {20.0, 50.0, 100.0, 200.0}) {
    const auto p = effective_params(d, ghz(f));
    const double residual = std::abs(analytic_jeff(p, 1)) / std::abs(p.a.coupling);
    // What survives is of order omega_alpha / omega_q.
    CHECK(residual < d.omega_b / ghz(f));
    CHECK(residual < prev);
    prev = residual;
  }
}

TEST_CASE("numeric projection in the detuned regime") {
  const BusDesign d = reference_design();
  const double wq = ghz(4.0);
  const auto p = effective_params(d, wq);
  const auto eff = numeric_effective_hamiltonian(hamiltonian_from_design(d));

  CHECK((eff.matrix - eff.matrix.transpose()).norm() == 0.0);
  CHECK(eff.matrix.trace() == doctest::Approx(eff.selected_energies.sum()).epsilon(1e-12));
  CHECK(eff.selected_weights.minCoeff() > 0.99);
  Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(eff.matrix).eigenvalues();
  Eigen::VectorXd sel = eff.selected_energies;
  std::sort(sel.begin(), sel.end());
  CHECK((ev - sel).cwiseAbs().maxCoeff() < 1e-12);

  for (int dist = 1; dist <= 4; ++dist) {
    const double a = analytic_jeff(p, dist);
    CHECK(std::abs(eff.j_by_distance[static_cast<std::size_t>(dist)] - a) < 0.05 * std::abs(a));
  }
  CHECK(eff.j_by_distance.size() == 6);
  // Diagonal shift relative to the bare data frequency.
  const double shift_numeric = eff.omega_q_bar - wq;
  const double shift_analytic = p.onsite() - wq;
  CHECK(std::abs(shift_numeric - shift_analytic) < 0.1 * std::abs(shift_analytic));
}

TEST_CASE("projection fails at full hybridization") {
  // One data qubit resonant with one bus site: both modes are half data.
  SpinModel m;
  m.n_qubits = 1;
  m.boundary = Boundary::kOpen;
  m.sites = {{Array::kQ, 0}, {Array::kA, 0}};
  m.omega = Eigen::Vector2d(ghz(4.0), ghz(4.0));
  m.coupling = Eigen::Matrix2d{{0.0, 0.1}, {0.1, 0.0}};
  CHECK_THROWS_AS(numeric_effective_hamiltonian(m), HybridizationError);
  m.omega(1) = ghz(4.5);
  const auto eff = numeric_effective_hamiltonian(m);
  CHECK(eff.selected_weights(0) > 0.9);
  // Second-order shift of a detuned pair.
  const double shift = eff.matrix(0, 0) - ghz(4.0);
  CHECK(shift == doctest::Approx(0.01 / (ghz(4.0) - ghz(4.5))).epsilon(0.01));
}

TEST_CASE("sweep rows") {
  const BusDesign d = reference_design();
  const std::vector<double> grid{ghz(3.8), ghz(4.0), ghz(4.9)};
  SweepOptions opt;
  opt.max_distance = 3;
  opt.threads = 2;
  const auto rows = sweep_jeff(d, grid, opt);
  REQUIRE(rows.size() == 9);
  CHECK(rows[4].omega_q == grid[1]);
  CHECK(rows[4].distance == 2);
  CHECK_FALSE(rows[4].hybridized);
  CHECK(rows[8].hybridized);
  CHECK(std::isnan(rows[8].jeff_analytic));

  opt.model = SweepModel::kCircuit;
  const auto circ = sweep_jeff(d, grid, opt);
  for (int i = 0; i < 6; ++i) {
    const auto& r = circ[static_cast<std::size_t>(i)];
    CHECK(std::abs(r.jeff_numeric - r.jeff_analytic) < 0.2 * std::abs(r.jeff_analytic));
  }
}

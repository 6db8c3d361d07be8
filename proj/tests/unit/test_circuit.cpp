#include <doctest.h>

#include <cmath>
#include <random>

#include "qbus/cap_algebra.hpp"
#include "qbus/circuit.hpp"
#include "qbus/spin_model.hpp"

using namespace qbus;

namespace {

// 1/2 sum C (dPhi)^2 over every capacitor of the realization, evaluated from
// pad fluxes in the (minus, plus) coordinates x.
double element_energy(const CircuitRealization& r, const CapacitanceNetwork& net,
                      const Eigen::VectorXd& x) {
  auto coord = [&](Array a, Mode m, int site) {
    const auto i = net.index_of({a, m, site});
    return i ? x(*i) : 0.0;
  };
  auto up = [&](Array a, int s) { return 0.5 * (coord(a, Mode::kPlus, s) + coord(a, Mode::kMinus, s)); };
  auto down = [&](Array a, int s) { return 0.5 * (coord(a, Mode::kPlus, s) - coord(a, Mode::kMinus, s)); };
  auto sq = [](double v) { return v * v; };

  double e = 0.0;
  const int L = r.n_sites;
  for (Array a : {Array::kQ, Array::kA, Array::kB}) {
    const auto& el = r.elements(a);
    for (int m = 0; m < L; ++m) {
      const auto s = static_cast<std::size_t>(m);
      e += el.shunt[s] * sq(up(a, m) - down(a, m));
      e += el.ground_up[s] * sq(up(a, m)) + el.ground_down[s] * sq(down(a, m));
    }
    for (std::size_t k = 0; k < el.link.size(); ++k) {
      const int m = static_cast<int>(k);
      const int n = (m + 1) % L;
      const double from = a == Array::kA ? down(a, m) : up(a, m);
      e += el.link[k] * sq(from - down(a, n));
    }
  }
  for (int m = 0; m < L; ++m) {
    const auto s = static_cast<std::size_t>(m);
    e += r.data_a_up[s] * sq(up(Array::kA, m) - up(Array::kQ, m));
    e += r.data_a_down[s] * sq(down(Array::kA, m) - down(Array::kQ, m));
    e += r.data_b_up[s] * sq(up(Array::kB, m) - up(Array::kQ, m));
    e += r.data_b_down[s] * sq(down(Array::kB, m) - down(Array::kQ, m));
  }
  return 0.5 * e;
}

}  // namespace

TEST_CASE("nominal capacitors of the reference design") {
  const auto c = nominal_capacitors(reference_design());
  CHECK(c.data_a == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(c.data_b == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(c.shunt_q == doctest::Approx(93.0).epsilon(1e-12));
  CHECK(c.shunt_a == doctest::Approx(67.6746987952).epsilon(1e-9));
  CHECK(c.ground_a == doctest::Approx(31.3253012048).epsilon(1e-9));
  CHECK(c.shunt_b == doctest::Approx(99.0).epsilon(1e-12));
  // Balance: kappa_a C_qa^2 = |kappa_b| C_qb^2.
  const auto d = reference_design();
  CHECK(d.kappa_a * c.data_a * c.data_a == doctest::Approx(-d.kappa_b * c.data_b * c.data_b));
}

TEST_CASE("ground-to-coupling ratio follows the closed form") {
  for (double xi : {0.1, 0.3, 0.5}) {
    for (double kappa : {0.05, 0.1}) {
      BusDesign d = reference_design();
      d.xi = xi;
      d.kappa_a = kappa;
      d.kappa_b = -kappa;
      const auto c = nominal_capacitors(d);
      CHECK(c.ground_a / c.link_a == doctest::Approx(ground_to_coupling_ratio(d, Bus::kA)).epsilon(1e-12));
      CHECK(c.ground_b / c.link_b == doctest::Approx(ground_to_coupling_ratio(d, Bus::kB)).epsilon(1e-12));
    }
  }
}

TEST_CASE("synthesis rejects infeasible designs") {
  BusDesign d = reference_design();
  d.eps = 0.5;
  try {
    synthesize_capacitances(d);
    FAIL("expected SynthesisError");
  } catch (const SynthesisError& e) {
    CHECK(e.element() == "shunt_q");
  }
  BusDesign bad = reference_design();
  bad.kappa_a = 0.9;
  CHECK_THROWS_AS(synthesize_capacitances(bad), SynthesisError);
}

TEST_CASE("assembled matrix reproduces the element energy") {
  for (Boundary b : {Boundary::kPeriodic, Boundary::kOpen}) {
    BusDesign d = reference_design(5);
    d.boundary = b;
    CircuitRealization r = synthesize_capacitances(d);
    // Break uniformity so every element is tested in its own slot.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.8, 1.2);
    for (Array a : {Array::kQ, Array::kA, Array::kB}) {
      auto& el = r.elements(a);
      for (auto* v : {&el.shunt, &el.ground_up, &el.ground_down, &el.link})
        for (double& x : *v) x *= u(rng);
    }
    for (auto* v : {&r.data_a_up, &r.data_a_down, &r.data_b_up, &r.data_b_down})
      for (double& x : *v) x *= u(rng);

    const auto net = assemble_capacitance_matrix(r);
    CHECK(net.matrix.rows() == 6 * d.n_qubits);
    CHECK((net.matrix - net.matrix.transpose()).norm() == 0.0);
    CHECK(net.matrix.llt().info() == Eigen::Success);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd x(net.matrix.rows());
      for (auto& v : x) v = g(rng);
      const double quad = 0.5 * x.dot(net.matrix * x);
      CHECK(quad == doctest::Approx(element_energy(r, net, x)).epsilon(1e-12));
    }
    CHECK(r.n_links() == (b == Boundary::kPeriodic ? 5 : 4));
  }
}

TEST_CASE("link orientation fixes the sign of the neighbor entries") {
  const BusDesign d = reference_design(6);
  const auto r = synthesize_capacitances(d);
  const auto c = nominal_capacitors(d);
  const auto net = assemble_capacitance_matrix(r);
  const int a0 = *net.index_of({Array::kA, Mode::kMinus, 0});
  const int a1 = *net.index_of({Array::kA, Mode::kMinus, 1});
  const int b0 = *net.index_of({Array::kB, Mode::kMinus, 0});
  const int b1 = *net.index_of({Array::kB, Mode::kMinus, 1});
  CHECK(net.matrix(a0, a1) == doctest::Approx(-c.link_a / 4.0).epsilon(1e-12));
  CHECK(net.matrix(b0, b1) == doctest::Approx(c.link_b / 4.0).epsilon(1e-12));
  const int bp0 = *net.index_of({Array::kB, Mode::kPlus, 0});
  const int bp1 = *net.index_of({Array::kB, Mode::kPlus, 1});
  CHECK(net.matrix(bp0, b1) == doctest::Approx(c.link_b / 4.0).epsilon(1e-12));
  CHECK(net.matrix(b0, bp1) == doctest::Approx(-c.link_b / 4.0).epsilon(1e-12));
}

TEST_CASE("massless plus modes are dropped") {
  BusDesign d = reference_design(4);
  d.eps = 0.0;
  SynthesisOptions opt;
  opt.ground_q = 0.0;
  const auto net = assemble_capacitance_matrix(synthesize_capacitances(d, opt));
  CHECK(net.matrix.rows() == 5 * 4);
  CHECK_FALSE(net.index_of({Array::kQ, Mode::kPlus, 0}).has_value());
  CHECK(net.indices(Array::kQ, Mode::kMinus).size() == 4);
}

TEST_CASE("synthesized Josephson energies hit the design frequencies") {
  const BusDesign d = reference_design();
  const auto r = synthesize_capacitances(d);
  const auto inv = invert_spd(assemble_capacitance_matrix(r));
  for (Array x : {Array::kQ, Array::kA, Array::kB}) {
    const double target = x == Array::kQ ? d.omega_q_idle : x == Array::kA ? d.omega_a : d.omega_b;
    for (int m = 0; m < d.n_qubits; ++m) {
      const int i = *inv.index_of({x, Mode::kMinus, m});
      const double w = transmon_frequency(r.elements(x).josephson[static_cast<std::size_t>(m)],
                                          inv.matrix(i, i));
      CHECK(w == doctest::Approx(target).epsilon(1e-12));
    }
  }
}

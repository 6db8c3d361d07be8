#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "qbus/dynamics.hpp"

using namespace qbus;
using cd = std::complex<double>;

namespace {

// Hard-core exchange of two resonant qubits for a time t, basis |00>, |01>,
// |10>, |11>.
Eigen::Matrix4cd exchange(double coupling, double t) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  m(1, 1) = m(2, 2) = std::cos(coupling * t);
  m(1, 2) = m(2, 1) = cd(0.0, -std::sin(coupling * t));
  return m;
}

ScheduleSpec spec_for(const BusDesign& d, int i, int j, double on_ghz, double ramp, double hold) {
  ScheduleSpec s;
  s.qubit_i = i;
  s.qubit_j = j;
  s.omega_on = ghz_to_angular(on_ghz);
  s.omega_idle = d.omega_q_idle;
  s.ramp_time = ramp;
  s.hold_time = hold;
  return s;
}

}  // namespace

TEST_CASE("gate error of fixed operators") {
  Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
  swap(0, 0) = swap(3, 3) = 1.0;
  swap(1, 2) = swap(2, 1) = 1.0;
  CHECK(gate_error(swap, GateTarget::kSwap).error < 1e-12);
  CHECK(gate_error(Eigen::Matrix4cd::Identity(), GateTarget::kSwap).error == doctest::Approx(0.6).epsilon(1e-9));

  // Virtual-Z phases absorb the local phases of the exchange at pi / (2 J).
  const double j = mhz_to_angular(2.0);
  const Eigen::Matrix4cd full = exchange(j, std::numbers::pi / (2.0 * j));
  CHECK(gate_error(full, GateTarget::kISwap).error < 1e-12);
  CHECK(gate_error(full, GateTarget::kISwap).leakage < 1e-12);
  CHECK(gate_error(full, GateTarget::kSwap).error == doctest::Approx(0.4).epsilon(1e-9));

  // A diagonal phase pattern is free.
  Eigen::Matrix4cd phased = swap;
  phased.row(1) *= std::polar(1.0, 0.3);
  phased.row(2) *= std::polar(1.0, -1.1);
  phased.row(3) *= std::polar(1.0, 0.3 - 1.1);
  phased *= std::polar(1.0, 0.7);
  CHECK(gate_error(phased, GateTarget::kSwap).error < 1e-12);

  // Leakage: a quarter of the norm lost on one state.
  Eigen::Matrix4cd lossy = swap;
  lossy(3, 3) = 0.0;
  CHECK(gate_error(lossy, GateTarget::kSwap).leakage == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("exchange time of the toy pair") {
  const double j = mhz_to_angular(2.0);
  CHECK(std::numbers::pi / (2.0 * j) == doctest::Approx(125.0).epsilon(1e-12));
  CHECK(std::abs(exchange(j, 125.0)(2, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  double best_t = 0.0, best_e = 2.0;
  for (int s = 0; s <= 2000; ++s) {
    const double t = 0.1 * s;
    const double e = gate_error(exchange(j, t), GateTarget::kISwap).error;
    if (e < best_e) {
      best_e = e;
      best_t = t;
    }
  }
  CHECK(best_t == doctest::Approx(125.0).epsilon(1e-3));
}

TEST_CASE("schedule shape") {
  const BusDesign d = reference_design(7);
  const GateSchedule s = build_schedule(spec_for(d, 0, 2, 4.74, 10.0, 30.0), 7);
  CHECK(s.total_time() == 50.0);
  CHECK(s.active_frequency(0.0) == doctest::Approx(d.omega_q_idle).epsilon(1e-15));
  CHECK(s.active_frequency(10.0) == doctest::Approx(ghz_to_angular(4.74)).epsilon(1e-15));
  CHECK(s.active_frequency(25.0) == doctest::Approx(ghz_to_angular(4.74)).epsilon(1e-15));
  CHECK(s.active_frequency(50.0) == doctest::Approx(d.omega_q_idle).epsilon(1e-15));
  CHECK(s.active_frequency(5.0) == doctest::Approx(0.5 * (d.omega_q_idle + ghz_to_angular(4.74))).epsilon(1e-14));
  CHECK(s.active_frequency(3.0) == doctest::Approx(s.active_frequency(47.0)).epsilon(1e-14));
  const double stagger = mhz_to_angular(30.0);
  const std::vector<double> expect{0.0, stagger, 0.0, -stagger, stagger, -stagger, stagger};
  for (int m = 0; m < 7; ++m)
    CHECK(s.spectator_detunings[static_cast<std::size_t>(m)] == doctest::Approx(expect[static_cast<std::size_t>(m)]));
  const auto f = s.data_frequencies(20.0);
  CHECK(f[0] == f[2]);
  CHECK(f[1] == doctest::Approx(d.omega_q_idle + stagger));
}

TEST_CASE("sector propagators are unitary") {
  const BusDesign d = reference_design(4);
  const GateSchedule s = build_schedule(spec_for(d, 0, 1, 4.74, 5.0, 10.0), 4);
  for (int k = 0; k <= 2; ++k) {
    const Eigen::MatrixXcd u = propagate(d, s, k, 0.05);
    const auto n = u.rows();
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("fast gate evaluation matches direct propagation") {
  const BusDesign d = reference_design(4);
  for (double ramp : {0.0, 6.0}) {
    const ScheduleSpec spec = spec_for(d, 0, 2, 4.74, ramp, 23.0);
    const GateSchedule s = build_schedule(spec, 4);
    const double dt = 0.05;
    const Eigen::MatrixXcd u0 = propagate(d, s, 0, dt);
    const Eigen::MatrixXcd u1 = propagate(d, s, 1, dt);
    const Eigen::MatrixXcd u2 = propagate(d, s, 2, dt);
    const GateResult direct = swap_error(u0, u1, u2, 12, s.pair, GateTarget::kISwap);
    const GateResult fast = GateSimulator(d, spec, dt).evaluate(23.0, GateTarget::kISwap);
    CHECK(fast.error == doctest::Approx(direct.error).epsilon(1e-8));
    CHECK(fast.leakage == doctest::Approx(direct.leakage).epsilon(1e-8));
  }
}

TEST_CASE("decoupled data qubits only acquire phases") {
  BusDesign d = reference_design(4);
  d.eps = 0.0;
  const ScheduleSpec spec = spec_for(d, 0, 1, 4.74, 10.0, 40.0);
  const GateSimulator sim(d, spec, 0.05);
  const Eigen::Matrix4cd m = sim.projected(40.0);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) CHECK(std::abs(std::abs(m(r, c)) - (r == c ? 1.0 : 0.0)) < 1e-10);
  CHECK(sim.evaluate(40.0, GateTarget::kSwap).error == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(sim.coupling_estimate() < 1e-12);
}

TEST_CASE("hold-time optimization near the b band") {
  const BusDesign d = reference_design(7);
  HoldSearch search;
  search.dt = 0.05;
  const HoldOptimum opt = optimize_hold_time(d, spec_for(d, 0, 1, 4.74, 20.0, 0.0), search);
  CHECK(opt.result.error < 1e-2);
  CHECK(opt.total_time > 100.0);
  CHECK(opt.total_time < 200.0);
  CHECK(opt.result.convergence < 1e-4);
  CHECK_FALSE(opt.at_boundary);
  CHECK(opt.swap_error > 0.3);
  CHECK(opt.total_time == doctest::Approx(opt.hold_time + 40.0));
}

TEST_CASE("decoherence estimate") {
  CHECK(decoherence_error(200.0, 1e4, 2) == doctest::Approx(1.0 - std::exp(-0.04)).epsilon(1e-14));
  CHECK(std::abs(decoherence_error(200.0, 1e4, 2) - 0.0392) < 1e-4);
  CHECK(decoherence_error(200.0, 1e6, 2) == doctest::Approx(4e-4).epsilon(1e-3));
  CHECK(decoherence_error(0.0, 1e4, 2) == 0.0);
}

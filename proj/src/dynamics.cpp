#include "qbus/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qbus {

using cd = std::complex<double>;

double GateSchedule::active_frequency(double t) const {
  const double total = total_time();
  double f = 0.0;
  if (t <= 0.0 || t >= total) {
    f = 0.0;
  } else if (t < ramp_time) {
    f = 0.5 * (1.0 - std::cos(std::numbers::pi * t / ramp_time));
  } else if (t <= ramp_time + hold_time) {
    f = 1.0;
  } else {
    f = 0.5 * (1.0 - std::cos(std::numbers::pi * (total - t) / ramp_time));
  }
  return omega_idle + f * (omega_on - omega_idle);
}

std::vector<double> GateSchedule::data_frequencies(double t) const {
  std::vector<double> w(static_cast<std::size_t>(n_qubits));
  const double active = active_frequency(t);
  for (int m = 0; m < n_qubits; ++m) {
    const auto s = static_cast<std::size_t>(m);
    w[s] = m == pair.first || m == pair.second ? active : omega_idle + spectator_detunings[s];
  }
  return w;
}

GateSchedule build_schedule(const ScheduleSpec& spec, int n_qubits) {
  if (spec.qubit_i == spec.qubit_j || spec.qubit_i < 0 || spec.qubit_j < 0 ||
      spec.qubit_i >= n_qubits || spec.qubit_j >= n_qubits)
    throw std::invalid_argument("build_schedule: invalid qubit pair");
  if (!(spec.ramp_time >= 0.0 && spec.ramp_time <= 1000.0))
    throw std::invalid_argument("build_schedule: ramp_time must lie in [0, 1000] ns");
  if (!(spec.hold_time >= 0.0)) throw std::invalid_argument("build_schedule: negative hold_time");

  GateSchedule s;
  s.n_qubits = n_qubits;
  s.pair = {spec.qubit_i, spec.qubit_j};
  s.omega_on = spec.omega_on;
  s.omega_idle = spec.omega_idle;
  s.ramp_time = spec.ramp_time;
  s.hold_time = spec.hold_time;
  s.spectator_detunings.assign(static_cast<std::size_t>(n_qubits), 0.0);
  int rank = 0;
  for (int m = 0; m < n_qubits; ++m) {
    if (m == spec.qubit_i || m == spec.qubit_j) continue;
    s.spectator_detunings[static_cast<std::size_t>(m)] =
        (rank++ % 2 == 0 ? 1.0 : -1.0) * spec.spectator_stagger;
  }
  return s;
}

namespace {

// Fixed hopping structure of one sector; values come from a SpinModel.
class SectorOperator {
 public:
  explicit SectorOperator(const SectorBasis& basis) : dim_(basis.size()) {
    const int n = basis.n_sites();
    for (int s = 0; s < dim_; ++s) {
      const auto& st = basis.state(s);
      for (std::size_t slot = 0; slot < st.size(); ++slot) {
        for (int to = 0; to < n; ++to) {
          if (std::find(st.begin(), st.end(), to) != st.end()) continue;
          auto next = st;
          next[slot] = to;
          std::sort(next.begin(), next.end());
          hops_.push_back({basis.lookup(next), s, st[slot], to});
        }
      }
      occupied_.push_back(st);
    }
  }

  void load(const SpinModel& m, double shift) {
    diag_.resize(dim_);
    for (int s = 0; s < dim_; ++s) {
      double e = -shift;
      for (int site : occupied_[static_cast<std::size_t>(s)]) e += m.omega(site);
      diag_(s) = e;
    }
    values_.resize(hops_.size());
    for (std::size_t h = 0; h < hops_.size(); ++h) values_[h] = m.coupling(hops_[h].from, hops_[h].to);
  }

  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    y = diag_.cwiseProduct(x);
    for (std::size_t h = 0; h < hops_.size(); ++h) {
      if (values_[h] == 0.0) continue;
      y(hops_[h].row) += values_[h] * x(hops_[h].col);
    }
  }

  /// x <- exp(-i H dt) x by Taylor series.
  void step(Eigen::VectorXcd& x, double dt) const {
    Eigen::VectorXcd term = x, next(dim_);
    Eigen::VectorXcd sum = x;
    for (int k = 1; k < 60; ++k) {
      apply(term, next);
      term = next * cd(0.0, -dt / k);
      sum += term;
      if (term.norm() <= 1e-17 * sum.norm()) break;
    }
    x = sum;
  }

 private:
  struct Hop {
    int row, col, from, to;
  };
  int dim_;
  std::vector<Hop> hops_;
  std::vector<std::vector<int>> occupied_;
  Eigen::VectorXd diag_;
  std::vector<double> values_;
};

int steps_for(double duration, double dt) {
  if (duration <= 0.0) return 0;
  return std::max(1, static_cast<int>(std::ceil(duration / dt - 1e-9)));
}

Eigen::MatrixXcd expm_symmetric(const Eigen::MatrixXd& h, double t) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::VectorXcd phases =
      (es.eigenvalues() * cd(0.0, -t)).unaryExpr([](cd z) { return std::exp(z); });
  const Eigen::MatrixXcd v = es.eigenvectors().cast<cd>();
  return v * phases.asDiagonal() * v.transpose();
}

double golden_minimize(const auto& f, double lo, double hi, int iterations, double* fmin) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iterations; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  if (fc < fd) {
    *fmin = fc;
    return c;
  }
  *fmin = fd;
  return d;
}

}  // namespace

Eigen::MatrixXcd propagate(const BusDesign& d, const GateSchedule& s, int excitations, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be > 0");
  if (excitations < 0 || excitations > 2) throw std::invalid_argument("propagate: k must be 0, 1 or 2");
  if (s.n_qubits != d.n_qubits) throw std::invalid_argument("propagate: schedule size mismatch");

  const SectorBasis basis(3 * d.n_qubits, excitations);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(basis.size(), basis.size());
  auto segment = [&](double start, double duration) {
    const int n = steps_for(duration, dt);
    const double h = n > 0 ? duration / n : 0.0;
    for (int k = 0; k < n; ++k) {
      const auto w = s.data_frequencies(start + (k + 0.5) * h);
      const Eigen::MatrixXd hm = sector_matrix(hamiltonian_from_design(d, w), basis);
      u = expm_symmetric(hm, h) * u;
    }
  };
  segment(0.0, s.ramp_time);
  segment(s.ramp_time, s.hold_time);
  segment(s.ramp_time + s.hold_time, s.ramp_time);
  return u;
}

Eigen::Matrix4cd projected_operator(const Eigen::MatrixXcd& u0, const Eigen::MatrixXcd& u1,
                                    const Eigen::MatrixXcd& u2, int n_sites,
                                    std::pair<int, int> pair) {
  const auto [i, j] = pair;
  const SectorBasis two(n_sites, 2);
  if (u0.rows() != 1 || u1.rows() != n_sites || u2.rows() != two.size())
    throw std::invalid_argument("projected_operator: sector dimension mismatch");
  const int k = two.lookup({std::min(i, j), std::max(i, j)});
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = u0(0, 0);
  m(1, 1) = u1(j, j);
  m(1, 2) = u1(j, i);
  m(2, 1) = u1(i, j);
  m(2, 2) = u1(i, i);
  m(3, 3) = u2(k, k);
  return m;
}

GateResult gate_error(const Eigen::Matrix4cd& m, GateTarget target) {
  // Tr(T^dag D M) = e^{i phi} [a + b u + v (c + e u)], u = e^{i z_i}, v = e^{i z_j}.
  const cd swap_phase = target == GateTarget::kISwap ? cd(0.0, -1.0) : cd(1.0, 0.0);
  const cd a = m(0, 0), e = m(3, 3);
  const cd b = swap_phase * m(2, 1);
  const cd c = swap_phase * m(1, 2);
  auto g = [&](double z) {
    const cd u = std::polar(1.0, z);
    return std::abs(a + b * u) + std::abs(c + e * u);
  };

  constexpr int kGrid = 720;
  int best = 0;
  double best_g = -1.0;
  for (int s = 0; s < kGrid; ++s) {
    const double v = g(2.0 * std::numbers::pi * s / kGrid);
    if (v > best_g) {
      best_g = v;
      best = s;
    }
  }
  const double step = 2.0 * std::numbers::pi / kGrid;
  double neg = 0.0;
  double z = golden_minimize([&](double x) { return -g(x); }, (best - 1) * step, (best + 1) * step,
                             80, &neg);
  if (-neg < best_g) z = best * step;

  GateResult r;
  const cd u = std::polar(1.0, z);
  const cd left = a + b * u, right = c + e * u;
  const double trace = std::abs(left) + std::abs(right);
  const double norm = m.squaredNorm();
  r.phase_i = std::remainder(z, 2.0 * std::numbers::pi);
  r.phase_j = std::remainder(std::arg(left) - std::arg(right), 2.0 * std::numbers::pi);
  r.global_phase = std::remainder(-std::arg(left), 2.0 * std::numbers::pi);
  r.error = std::max(0.0, 1.0 - (norm + trace * trace) / 20.0);
  r.leakage = std::max(0.0, 1.0 - norm / 4.0);
  return r;
}

GateResult swap_error(const Eigen::MatrixXcd& u0, const Eigen::MatrixXcd& u1,
                      const Eigen::MatrixXcd& u2, int n_sites, std::pair<int, int> pair,
                      GateTarget target) {
  return gate_error(projected_operator(u0, u1, u2, n_sites, pair), target);
}

GateSimulator::GateSimulator(const BusDesign& d, const ScheduleSpec& spec, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("GateSimulator: dt must be > 0");
  ScheduleSpec s = spec;
  s.hold_time = 0.0;
  schedule_ = build_schedule(s, d.n_qubits);
  const auto [i, j] = schedule_.pair;
  const int n_sites = 3 * d.n_qubits;
  const SectorBasis b1(n_sites, 1), b2(n_sites, 2);

  const double ref = schedule_.omega_idle;
  const int n = steps_for(schedule_.ramp_time, dt);
  const double h = n > 0 ? schedule_.ramp_time / n : 0.0;
  ramp_phase_ = ref * schedule_.ramp_time;

  std::vector<Eigen::VectorXcd> psi1(2, Eigen::VectorXcd::Zero(b1.size()));
  psi1[0](j) = 1.0;  // |01>
  psi1[1](i) = 1.0;  // |10>
  std::vector<Eigen::VectorXcd> psi2(1, Eigen::VectorXcd::Zero(b2.size()));
  psi2[0](b2.lookup({std::min(i, j), std::max(i, j)})) = 1.0;

  SectorOperator op1(b1), op2(b2);
  for (int k = 0; k < n; ++k) {
    const SpinModel model = hamiltonian_from_design(d, schedule_.data_frequencies((k + 0.5) * h));
    op1.load(model, ref);
    op2.load(model, 2.0 * ref);
    for (auto& v : psi1) op1.step(v, h);
    for (auto& v : psi2) op2.step(v, h);
  }

  std::vector<double> on = schedule_.data_frequencies(0.0);
  on[static_cast<std::size_t>(i)] = schedule_.omega_on;
  on[static_cast<std::size_t>(j)] = schedule_.omega_on;
  const SpinModel hold = hamiltonian_from_design(d, on);
  auto diagonalize = [](const Eigen::MatrixXd& m, const std::vector<Eigen::VectorXcd>& psi, Sector& out,
                        Eigen::MatrixXd* vectors) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    out.energies = es.eigenvalues();
    for (const auto& v : psi) out.amplitudes.push_back(es.eigenvectors().transpose().cast<cd>() * v);
    if (vectors) *vectors = es.eigenvectors();
  };
  Eigen::MatrixXd v1;
  diagonalize(sector_matrix(hold, b1), psi1, one_, &v1);
  diagonalize(sector_matrix(hold, b2), psi2, two_, nullptr);

  // Two eigenmodes with the largest weight on the active pair.
  std::vector<std::pair<double, int>> pair_weight;
  for (int c = 0; c < v1.cols(); ++c)
    pair_weight.push_back({v1(i, c) * v1(i, c) + v1(j, c) * v1(j, c), c});
  std::sort(pair_weight.rbegin(), pair_weight.rend());
  coupling_estimate_ =
      0.5 * std::abs(one_.energies(pair_weight[0].second) - one_.energies(pair_weight[1].second));
}

Eigen::Matrix4cd GateSimulator::projected(double hold_time) const {
  if (!(hold_time >= 0.0)) throw std::invalid_argument("GateSimulator: negative hold time");
  auto element = [&](const Sector& s, int to, int from, int k) {
    const Eigen::VectorXcd phases =
        (s.energies * cd(0.0, -hold_time)).unaryExpr([](cd z) { return std::exp(z); });
    const cd sum = (s.amplitudes[static_cast<std::size_t>(to)].array() *
                    s.amplitudes[static_cast<std::size_t>(from)].array() * phases.array())
                       .sum();
    return sum * std::polar(1.0, -2.0 * k * ramp_phase_);
  };
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = 1.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(1 + r, 1 + c) = element(one_, r, c, 1);
  m(3, 3) = element(two_, 0, 0, 2);
  return m;
}

GateResult GateSimulator::evaluate(double hold_time, GateTarget target) const {
  return gate_error(projected(hold_time), target);
}

HoldOptimum optimize_hold_time(const BusDesign& d, const ScheduleSpec& spec, const HoldSearch& search) {
  if (search.grid_points < 40) throw std::invalid_argument("optimize_hold_time: need >= 40 grid points");
  const GateSimulator sim(d, spec, search.dt);
  HoldOptimum out;
  out.coupling_estimate = sim.coupling_estimate();
  if (!(out.coupling_estimate > 0.0))
    throw std::runtime_error("optimize_hold_time: the active pair is not coupled");
  const double t_max = search.window_factor * std::numbers::pi / out.coupling_estimate;

  auto error_at = [&](double h) { return sim.evaluate(h, search.target).error; };
  const int g = search.grid_points;
  int best = 0;
  double best_err = 2.0;
  for (int k = 0; k < g; ++k) {
    const double e = error_at(t_max * k / (g - 1));
    if (e < best_err) {
      best_err = e;
      best = k;
    }
  }
  const double step = t_max / (g - 1);
  double refined_err = 0.0;
  double hold = golden_minimize(error_at, std::max(0.0, (best - 1) * step),
                                std::min(t_max, (best + 1) * step), 60, &refined_err);
  if (refined_err > best_err) hold = best * step;

  out.hold_time = hold;
  out.total_time = 2.0 * spec.ramp_time + hold;
  out.at_boundary = best == 0 || best == g - 1;
  out.result = sim.evaluate(hold, search.target);
  out.swap_error = sim.evaluate(hold, GateTarget::kSwap).error;

  const GateSimulator fine(d, spec, search.dt / 2.0);
  out.result.convergence = std::abs(fine.evaluate(hold, search.target).error - out.result.error);
  return out;
}

double decoherence_error(double total_time, double t1, int n_active) {
  if (!(t1 > 0.0)) throw std::invalid_argument("decoherence_error: T1 must be > 0");
  return -std::expm1(-n_active * total_time / t1);
}

}  // namespace qbus

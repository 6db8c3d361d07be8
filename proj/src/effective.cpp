#include "qbus/effective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "qbus/cap_algebra.hpp"
#include "qbus/parallel.hpp"

namespace qbus {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double bus_kappa(const BusDesign& d, Bus bus) { return bus == Bus::kA ? d.kappa_a : d.kappa_b; }
double bus_omega(const BusDesign& d, Bus bus) { return bus == Bus::kA ? d.omega_a : d.omega_b; }

BusEffective bus_effective(const BusDesign& d, Bus bus, double wq) {
  const double xi = d.xi;
  const double w = bus_omega(d, bus);
  const double kappa = bus_kappa(d, bus);
  const double kk = std::sqrt(std::abs(d.kappa_a * d.kappa_b));

  BusEffective e;
  e.delta_0 = wq - aux_band(d, bus, 0.0);
  e.delta_pi = wq - aux_band(d, bus, std::numbers::pi);
  e.delta_half = wq - aux_band(d, bus, std::numbers::pi / 2.0);
  const double scale = 1e-12 * std::abs(w);
  if (std::abs(e.delta_0) <= scale || std::abs(e.delta_pi) <= scale)
    throw BandEdgeError("effective_params: data frequency sits on a band edge");

  const double root = std::sqrt(e.delta_0 * e.delta_pi);  // NaN inside the band
  const double h = 0.5 * (1.0 + xi * xi);
  e.delta_tilde = e.delta_half * (h + 0.5 * (1.0 - xi * xi) * root / std::abs(e.delta_half));

  const double sum = e.delta_pi + e.delta_0;
  const double diff = e.delta_pi - e.delta_0;
  e.zeta = (xi * sum + h * diff) / (xi * diff + h * sum) * h * std::abs(e.delta_half) /
           std::abs(e.delta_tilde);

  const double eps2 = d.eps * d.eps;
  const double detune = wq - 0.5 * w;
  e.coupling = 0.5 * eps2 * kk * wq * (xi / e.zeta) * detune * detune /
               (std::abs(e.delta_tilde) * root);
  e.shift = eps2 * wq * kk / (4.0 * std::abs(kappa) * (1.0 + kappa)) * (xi / e.zeta) * w /
            e.delta_tilde;
  return e;
}

}  // namespace

double aux_band(const BusDesign& d, Bus bus, double k) {
  const double xi = d.xi;
  const double kappa = bus_kappa(d, bus);
  const double c = std::cos(k);
  return bus_omega(d, bus) *
         (1.0 + kappa / (1.0 + kappa) * xi * (c - xi) / (1.0 + xi * xi - 2.0 * xi * c));
}

std::pair<double, double> band_edges(const BusDesign& d, Bus bus) {
  const double e0 = aux_band(d, bus, 0.0);
  const double epi = aux_band(d, bus, std::numbers::pi);
  return {std::min(e0, epi), std::max(e0, epi)};
}

EffectiveParams effective_params(const BusDesign& d, double omega_q) {
  if (d.kappa_a == 0.0 || d.kappa_b == 0.0)
    throw std::invalid_argument("effective_params: both buses must be present");
  EffectiveParams p;
  p.omega_q = omega_q;
  p.a = bus_effective(d, Bus::kA, omega_q);
  p.b = bus_effective(d, Bus::kB, omega_q);
  for (Bus bus : {Bus::kA, Bus::kB}) {
    const auto [lo, hi] = band_edges(d, bus);
    if (omega_q >= lo && omega_q <= hi) p.hybridized = true;
  }
  p.omega_q_bar = omega_q + p.a.shift + p.b.shift;
  if (p.hybridized) {
    for (BusEffective* e : {&p.a, &p.b}) {
      e->coupling = kNaN;
      e->zeta = kNaN;
      e->shift = kNaN;
    }
    p.omega_q_bar = kNaN;
  }
  return p;
}

double analytic_jeff(const EffectiveParams& p, int dist) {
  if (dist < 0) throw std::invalid_argument("analytic_jeff: negative distance");
  return p.a.coupling * std::pow(p.a.zeta, dist) - p.b.coupling * std::pow(p.b.zeta, dist);
}

double analytic_jeff(const BusDesign& d, double omega_q, int dist) {
  return analytic_jeff(effective_params(d, omega_q), dist);
}

EffectiveHamiltonian numeric_effective_hamiltonian(const SpinModel& model) {
  const auto data = model.array_sites(Array::kQ);
  const int L = static_cast<int>(data.size());
  const int n = model.n_sites();
  if (L == 0) throw std::invalid_argument("numeric_effective_hamiltonian: no data sites");

  // The single-excitation sector in site order.
  Eigen::MatrixXd h = model.coupling;
  h.diagonal() = model.omega;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success)
    throw HybridizationError("numeric_effective_hamiltonian: diagonalization failed");
  const Eigen::MatrixXd& v = es.eigenvectors();

  Eigen::VectorXd weight = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < n; ++c)
    for (int s : data) weight(c) += v(s, c) * v(s, c);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) { return weight(l) > weight(r); });
  const double last = weight(order[static_cast<std::size_t>(L - 1)]);
  if (!(last > 0.5))
    throw HybridizationError("numeric_effective_hamiltonian: data weight " +
                             std::to_string(last) + " of a selected mode is below 0.5");
  if (L < n && last - weight(order[static_cast<std::size_t>(L)]) < 1e-6)
    throw HybridizationError("numeric_effective_hamiltonian: ambiguous mode selection");

  std::vector<int> sel(order.begin(), order.begin() + L);
  std::sort(sel.begin(), sel.end());

  Eigen::MatrixXd w(L, L);
  EffectiveHamiltonian out;
  out.selected_energies.resize(L);
  out.selected_weights.resize(L);
  for (int c = 0; c < L; ++c) {
    const int col = sel[static_cast<std::size_t>(c)];
    for (int r = 0; r < L; ++r) w(r, c) = v(data[static_cast<std::size_t>(r)], col);
    out.selected_energies(c) = es.eigenvalues()(col);
    out.selected_weights(c) = weight(col);
  }
  out.all_weights = weight;

  // Symmetric orthonormalization: W S^{-1/2} with S = W^T W.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ss(w.transpose() * w);
  const Eigen::MatrixXd s_inv_half = ss.eigenvectors() *
                                     ss.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                     ss.eigenvectors().transpose();
  const Eigen::MatrixXd wt = w * s_inv_half;
  out.matrix = wt * out.selected_energies.asDiagonal() * wt.transpose();
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
  out.omega_q_bar = out.matrix.diagonal().mean();

  const bool ring = model.boundary == Boundary::kPeriodic;
  const int max_d = ring ? L / 2 : L - 1;
  for (int dist = 0; dist <= max_d; ++dist) {
    double sum = 0.0;
    int count = 0;
    for (int m = 0; m < L; ++m) {
      const int other = m + dist;
      if (!ring && other >= L) break;
      sum += out.matrix(m, other % L);
      ++count;
    }
    out.j_by_distance.push_back(sum / count);
  }
  return out;
}

std::vector<SweepRow> sweep_jeff(const BusDesign& d, std::span<const double> omega_q_grid,
                                 const SweepOptions& opt) {
  const int n_points = static_cast<int>(omega_q_grid.size());
  const int dmax = opt.max_distance;
  if (dmax < 1) throw std::invalid_argument("sweep_jeff: max_distance must be >= 1");
  std::vector<SweepRow> rows(static_cast<std::size_t>(n_points * dmax));

  std::optional<CircuitRealization> circuit;
  std::optional<InverseCapacitance> inverse;
  if (opt.model == SweepModel::kCircuit) {
    circuit = synthesize_capacitances(d, opt.synthesis);
    inverse = invert_spd(assemble_capacitance_matrix(*circuit));
  }

  parallel_for(n_points, opt.threads, [&](int i) {
    const double wq = omega_q_grid[static_cast<std::size_t>(i)];
    std::optional<EffectiveParams> p;
    try {
      p = effective_params(d, wq);
    } catch (const BandEdgeError&) {
    }

    std::optional<EffectiveHamiltonian> eff;
    try {
      const std::vector<double> tuned(static_cast<std::size_t>(d.n_qubits), wq);
      const SpinModel model = circuit ? hamiltonian_from_circuit(*inverse, *circuit, tuned)
                                      : hamiltonian_from_design(d, tuned);
      eff = numeric_effective_hamiltonian(model);
    } catch (const HybridizationError&) {
    }

    for (int dist = 1; dist <= dmax; ++dist) {
      SweepRow& r = rows[static_cast<std::size_t>(i * dmax + dist - 1)];
      r.omega_q = wq;
      r.distance = dist;
      r.hybridized = !p || p->hybridized || !eff;
      r.jeff_analytic = p && !p->hybridized ? analytic_jeff(*p, dist) : kNaN;
      r.zeta_a = p ? p->a.zeta : kNaN;
      r.zeta_b = p ? p->b.zeta : kNaN;
      const bool in_range = eff && dist < static_cast<int>(eff->j_by_distance.size());
      r.jeff_numeric = in_range ? eff->j_by_distance[static_cast<std::size_t>(dist)] : kNaN;
      r.data_weight = eff ? eff->selected_weights.minCoeff() : kNaN;
    }
  });
  return rows;
}

}  // namespace qbus

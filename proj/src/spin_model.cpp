#include "qbus/spin_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qbus {

double josephson_for_frequency(double omega, double c_inv) {
  if (!(c_inv > 0.0)) throw std::invalid_argument("josephson_for_frequency: c_inv must be > 0");
  return omega * omega / (8.0 * constants::kChargingRate1fF * c_inv);
}

double transmon_frequency(double josephson, double c_inv) {
  if (!(c_inv > 0.0)) throw std::invalid_argument("transmon_frequency: c_inv must be > 0");
  if (josephson < 0.0) throw std::invalid_argument("transmon_frequency: negative E_J");
  return std::sqrt(8.0 * constants::kChargingRate1fF * c_inv * josephson);
}

std::optional<int> SpinModel::site_index(Array x, int index) const {
  for (std::size_t i = 0; i < sites.size(); ++i)
    if (sites[i].array == x && sites[i].index == index) return static_cast<int>(i);
  return std::nullopt;
}

std::vector<int> SpinModel::array_sites(Array x) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < sites.size(); ++i)
    if (sites[i].array == x) out.push_back(static_cast<int>(i));
  std::sort(out.begin(), out.end(), [&](int l, int r) {
    return sites[static_cast<std::size_t>(l)].index < sites[static_cast<std::size_t>(r)].index;
  });
  return out;
}

namespace {

void check_data_omega(std::optional<std::span<const double>> data_omega, int n) {
  if (data_omega && static_cast<int>(data_omega->size()) != n)
    throw std::invalid_argument("data frequency overrides must have one entry per data qubit");
}

}  // namespace

SpinModel hamiltonian_from_circuit(const InverseCapacitance& inv, const CircuitRealization& r,
                                   std::optional<std::span<const double>> data_omega) {
  check_data_omega(data_omega, r.n_sites);
  const auto idx = inv.indices(Mode::kMinus);

  SpinModel m;
  m.n_qubits = r.n_sites;
  m.boundary = r.boundary;
  const auto n = static_cast<Eigen::Index>(idx.size());
  m.omega.resize(n);
  Eigen::VectorXd diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Coordinate& c = inv.labels[static_cast<std::size_t>(idx[i])];
    m.sites.push_back({c.array, c.site});
    diag(i) = inv.matrix(idx[i], idx[i]);
    if (!(diag(i) > 0.0))
      throw std::invalid_argument("hamiltonian_from_circuit: non-positive inverse capacitance");
    const auto s = static_cast<std::size_t>(c.site);
    if (c.array == Array::kQ && data_omega)
      m.omega(i) = (*data_omega)[s];
    else
      m.omega(i) = transmon_frequency(r.elements(c.array).josephson[s], diag(i));
  }

  m.coupling = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j)
        m.coupling(i, j) = 0.5 * std::sqrt(m.omega(i) * m.omega(j)) * inv.matrix(idx[i], idx[j]) /
                           std::sqrt(diag(i) * diag(j));
  return m;
}

SpinModel hamiltonian_from_circuit(const CircuitRealization& r,
                                   std::optional<std::span<const double>> data_omega) {
  return hamiltonian_from_circuit(invert_spd(assemble_capacitance_matrix(r)), r, data_omega);
}

SpinModel hamiltonian_from_design(const BusDesign& d,
                                  std::optional<std::span<const double>> data_omega) {
  const auto report = validate_design(d);
  if (!report.ok()) throw std::invalid_argument("hamiltonian_from_design: " + report.summary());
  const int L = d.n_qubits;
  check_data_omega(data_omega, L);
  if (d.eps > 0.0 && (d.kappa_a == 0.0 || d.kappa_b == 0.0))
    throw std::invalid_argument("hamiltonian_from_design: eps > 0 needs both buses");

  SpinModel m;
  m.n_qubits = L;
  m.boundary = d.boundary;
  const int n = 3 * L;
  m.omega.resize(n);
  m.coupling = Eigen::MatrixXd::Zero(n, n);
  for (Array x : {Array::kQ, Array::kA, Array::kB})
    for (int s = 0; s < L; ++s) m.sites.push_back({x, s});

  auto base = [L](Array x) { return x == Array::kQ ? 0 : x == Array::kA ? L : 2 * L; };
  auto distance = [&](int i, int j) {
    const int raw = std::abs(i - j);
    return d.boundary == Boundary::kPeriodic ? std::min(raw, L - raw) : raw;
  };

  for (int s = 0; s < L; ++s) {
    m.omega(s) = data_omega ? (*data_omega)[static_cast<std::size_t>(s)] : d.omega_q_idle;
    m.omega(L + s) = d.omega_a;
    m.omega(2 * L + s) = d.omega_b;
  }

  for (Bus bus : {Bus::kA, Bus::kB}) {
    const Array x = array_of(bus);
    const double kappa = bus == Bus::kA ? d.kappa_a : d.kappa_b;
    const double other = bus == Bus::kA ? d.kappa_b : d.kappa_a;
    const double w = bus == Bus::kA ? d.omega_a : d.omega_b;
    const double intra = kappa * w / (2.0 * (1.0 + kappa));
    const double pref = d.eps > 0.0 ? d.eps * std::pow(std::abs(other / kappa), 0.25) /
                                          (2.0 * std::sqrt(1.0 + kappa))
                                    : 0.0;
    for (int i = 0; i < L; ++i) {
      for (int j = 0; j < L; ++j) {
        const double g = std::pow(d.xi, distance(i, j));
        if (i != j) m.coupling(base(x) + i, base(x) + j) = intra * g;
        const double jq = pref * std::sqrt(m.omega(i) * w) * ((i == j ? 1.0 : 0.0) + kappa * g);
        m.coupling(i, base(x) + j) = jq;
        m.coupling(base(x) + j, i) = jq;
      }
    }
  }
  return m;
}

SectorBasis::SectorBasis(int n_sites, int n_excitations) : n_sites_(n_sites), k_(n_excitations) {
  if (n_sites < 0 || n_excitations < 0 || n_excitations > n_sites)
    throw std::invalid_argument("SectorBasis: need 0 <= k <= n_sites");
  std::vector<int> cur(static_cast<std::size_t>(k_));
  for (int i = 0; i < k_; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    index_.emplace(cur, static_cast<int>(states_.size()));
    states_.push_back(cur);
    // Next k-subset in lexicographic order.
    int pos = k_ - 1;
    while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == n_sites_ - k_ + pos) --pos;
    if (pos < 0) break;
    ++cur[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k_; ++i)
      cur[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i - 1)] + 1;
  }
}

int SectorBasis::lookup(const std::vector<int>& sites) const {
  const auto it = index_.find(sites);
  return it == index_.end() ? -1 : it->second;
}

Eigen::MatrixXd sector_matrix(const SpinModel& model, const SectorBasis& basis) {
  if (basis.n_sites() != model.n_sites())
    throw std::invalid_argument("sector_matrix: basis does not match model");
  const int dim = basis.size();
  const int n = model.n_sites();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<char> occupied(static_cast<std::size_t>(n), 0);

  for (int s = 0; s < dim; ++s) {
    const auto& st = basis.state(s);
    for (int site : st) {
      h(s, s) += model.omega(site);
      occupied[static_cast<std::size_t>(site)] = 1;
    }
    for (std::size_t slot = 0; slot < st.size(); ++slot) {
      const int from = st[slot];
      for (int to = 0; to < n; ++to) {
        if (occupied[static_cast<std::size_t>(to)]) continue;
        const double j = model.coupling(from, to);
        if (j == 0.0) continue;
        auto next = st;
        next[slot] = to;
        std::sort(next.begin(), next.end());
        h(basis.lookup(next), s) = j;
      }
    }
    for (int site : st) occupied[static_cast<std::size_t>(site)] = 0;
  }
  return h;
}

}  // namespace qbus

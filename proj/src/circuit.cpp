#include "qbus/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qbus/cap_algebra.hpp"
#include "qbus/spin_model.hpp"

namespace qbus {

const char* to_string(Array a) {
  switch (a) {
    case Array::kQ: return "q";
    case Array::kA: return "a";
    case Array::kB: return "b";
  }
  return "?";
}

Array array_of(Bus b) { return b == Bus::kA ? Array::kA : Array::kB; }

const ArrayElements& CircuitRealization::elements(Array x) const {
  switch (x) {
    case Array::kQ: return q;
    case Array::kA: return a;
    case Array::kB: return b;
  }
  return q;
}

ArrayElements& CircuitRealization::elements(Array x) {
  return const_cast<ArrayElements&>(std::as_const(*this).elements(x));
}

int CircuitRealization::n_links() const {
  return boundary == Boundary::kPeriodic ? n_sites : std::max(n_sites - 1, 0);
}

namespace {

void require_nonnegative(const char* name, double value) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw SynthesisError(name, "negative or non-finite value " + std::to_string(value) + " fF");
}

}  // namespace

NominalCapacitors nominal_capacitors(const BusDesign& d, const SynthesisOptions& opt) {
  const auto report = validate_design(d);
  if (!report.ok()) throw SynthesisError("design", report.summary());

  const double km = kappa_max(d.xi);
  const double cb = opt.c_bar;
  const double ka = d.kappa_a;
  const double kb = std::abs(d.kappa_b);
  const double drop = 4.0 * d.xi / ((1.0 - d.xi) * (1.0 - d.xi));

  NominalCapacitors c;
  c.c_bar = cb;

  if (d.eps > 0.0) {
    if (ka == 0.0 || kb == 0.0)
      throw SynthesisError("data coupling", "eps > 0 requires both kappa_a and kappa_b nonzero");
    c.data_a = 2.0 * d.eps * cb * std::pow(kb / ka, 0.25);
    c.data_b = 2.0 * d.eps * cb * std::pow(ka / kb, 0.25);
  }

  const double ra = ka / km;
  c.shunt_a = (1.0 - ra) / (1.0 + ra) * cb - c.data_a / 2.0;
  c.ground_a = 2.0 * ra / (1.0 + ra) * cb;
  c.link_a = drop * ra / ((1.0 + ra) * (1.0 + ra)) * cb;

  if (kb >= km) throw SynthesisError("link_b", "|kappa_b| must be strictly below kappa_max");
  c.shunt_b = cb - c.data_b / 2.0;
  c.ground_b = 2.0 * km * kb / (1.0 - km * kb) * cb;
  c.link_b = drop * kb * km / ((1.0 - km * kb) * (1.0 - kb / km)) * cb;

  c.ground_q = opt.ground_q;
  c.shunt_q = cb - opt.ground_q / 2.0 - c.data_a / 2.0 - c.data_b / 2.0;

  require_nonnegative("shunt_q", c.shunt_q);
  require_nonnegative("ground_q", c.ground_q);
  require_nonnegative("shunt_a", c.shunt_a);
  require_nonnegative("ground_a", c.ground_a);
  require_nonnegative("link_a", c.link_a);
  require_nonnegative("shunt_b", c.shunt_b);
  require_nonnegative("ground_b", c.ground_b);
  require_nonnegative("link_b", c.link_b);
  require_nonnegative("data_a", c.data_a);
  require_nonnegative("data_b", c.data_b);
  return c;
}

CircuitRealization uniform_realization(const NominalCapacitors& c, int n_sites, Boundary boundary) {
  CircuitRealization r;
  r.n_sites = n_sites;
  r.boundary = boundary;
  r.c_bar = c.c_bar;
  const auto L = static_cast<std::size_t>(n_sites);
  const auto links = static_cast<std::size_t>(r.n_links());

  auto fill = [&](ArrayElements& e, double shunt, double ground, double link, bool has_links) {
    e.shunt.assign(L, shunt);
    e.ground_up.assign(L, ground);
    e.ground_down.assign(L, ground);
    e.link.assign(has_links ? links : 0, link);
    e.josephson.assign(L, 0.0);
  };
  fill(r.q, c.shunt_q, c.ground_q, 0.0, false);
  fill(r.a, c.shunt_a, c.ground_a, c.link_a, true);
  fill(r.b, c.shunt_b, c.ground_b, c.link_b, true);
  r.data_a_up.assign(L, c.data_a);
  r.data_a_down.assign(L, c.data_a);
  r.data_b_up.assign(L, c.data_b);
  r.data_b_down.assign(L, c.data_b);
  return r;
}

CircuitRealization synthesize_capacitances(const BusDesign& d, const SynthesisOptions& opt) {
  CircuitRealization r = uniform_realization(nominal_capacitors(d, opt), d.n_qubits, d.boundary);

  const auto net = assemble_capacitance_matrix(r);
  const auto inv = invert_spd(net);
  for (Array x : {Array::kQ, Array::kA, Array::kB}) {
    const double target = x == Array::kQ ? d.omega_q_idle : x == Array::kA ? d.omega_a : d.omega_b;
    auto& e = r.elements(x);
    for (int m = 0; m < r.n_sites; ++m) {
      const int i = *net.index_of({x, Mode::kMinus, m});
      e.josephson[static_cast<std::size_t>(m)] = josephson_for_frequency(target, inv.matrix(i, i));
    }
  }
  return r;
}

std::optional<int> CapacitanceNetwork::index_of(const Coordinate& c) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == c) return static_cast<int>(i);
  return std::nullopt;
}

std::vector<int> CapacitanceNetwork::indices(Array x, Mode m) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i].array == x && labels[i].mode == m) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> CapacitanceNetwork::indices(Mode m) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i].mode == m) out.push_back(static_cast<int>(i));
  return out;
}

CapacitanceNetwork assemble_capacitance_matrix(const CircuitRealization& r,
                                               const AssemblyOptions& opt) {
  const int L = r.n_sites;
  std::vector<Array> arrays{Array::kQ};
  if (opt.include_a) arrays.push_back(Array::kA);
  if (opt.include_b) arrays.push_back(Array::kB);
  const int n_arrays = static_cast<int>(arrays.size());
  const int n = 2 * L * n_arrays;

  auto block_of = [&](Array x) {
    for (int i = 0; i < n_arrays; ++i)
      if (arrays[static_cast<std::size_t>(i)] == x) return i;
    return -1;
  };
  auto up = [&](Array x, int m) { return 2 * L * block_of(x) + 2 * m; };
  auto down = [&](Array x, int m) { return 2 * L * block_of(x) + 2 * m + 1; };

  Eigen::MatrixXd nodes = Eigen::MatrixXd::Zero(n, n);
  auto to_ground = [&](int i, double c) { nodes(i, i) += c; };
  auto between = [&](int i, int j, double c) {
    nodes(i, i) += c;
    nodes(j, j) += c;
    nodes(i, j) -= c;
    nodes(j, i) -= c;
  };

  for (Array x : arrays) {
    const auto& e = r.elements(x);
    for (int m = 0; m < L; ++m) {
      const auto s = static_cast<std::size_t>(m);
      between(up(x, m), down(x, m), e.shunt[s]);
      to_ground(up(x, m), e.ground_up[s]);
      to_ground(down(x, m), e.ground_down[s]);
    }
    if (x == Array::kQ) continue;

    for (int link = 0; link < static_cast<int>(e.link.size()); ++link) {
      const int next = (link + 1) % L;
      // A-A: down pad to the neighbor's down pad. A-B: up pad to the neighbor's down pad.
      const int from = x == Array::kA ? down(x, link) : up(x, link);
      between(from, down(x, next), e.link[static_cast<std::size_t>(link)]);
    }
    const auto& cu = x == Array::kA ? r.data_a_up : r.data_b_up;
    const auto& cd = x == Array::kA ? r.data_a_down : r.data_b_down;
    for (int m = 0; m < L; ++m) {
      const auto s = static_cast<std::size_t>(m);
      between(up(x, m), up(Array::kQ, m), cu[s]);
      between(down(x, m), down(Array::kQ, m), cd[s]);
    }
  }

  // Phi_up = (P + M) / 2, Phi_down = (P - M) / 2.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  std::vector<Coordinate> labels;
  labels.reserve(static_cast<std::size_t>(n));
  int col = 0;
  for (Array x : arrays) {
    for (Mode mode : {Mode::kMinus, Mode::kPlus}) {
      for (int m = 0; m < L; ++m, ++col) {
        t(up(x, m), col) = 0.5;
        t(down(x, m), col) = mode == Mode::kMinus ? -0.5 : 0.5;
        labels.push_back({x, mode, m});
      }
    }
  }
  const Eigen::MatrixXd full = t.transpose() * nodes * t;

  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (full.row(i).cwiseAbs().maxCoeff() > 0.0) keep.push_back(i);

  CapacitanceNetwork net;
  net.boundary = r.boundary;
  net.n_sites = L;
  const auto k = static_cast<Eigen::Index>(keep.size());
  net.matrix.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) net.matrix(i, j) = full(keep[i], keep[j]);
    net.labels.push_back(labels[static_cast<std::size_t>(keep[i])]);
  }
  // The congruence transform is symmetric in exact arithmetic; make it so bitwise.
  net.matrix = 0.5 * (net.matrix + net.matrix.transpose()).eval();
  return net;
}

double ground_to_coupling_ratio(const BusDesign& d, Bus bus) {
  if (!(d.xi > 0.0)) throw std::domain_error("ground_to_coupling_ratio: xi must be > 0");
  const double km = kappa_max(d.xi);
  const double kappa = bus == Bus::kA ? d.kappa_a : d.kappa_b;
  if (std::abs(kappa) > km) throw std::domain_error("ground_to_coupling_ratio: |kappa| > kappa_max");
  return (1.0 - d.xi) * (1.0 - d.xi) * (1.0 + kappa / km) / (2.0 * d.xi);
}

}  // namespace qbus

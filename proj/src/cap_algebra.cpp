#include "qbus/cap_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace qbus {

std::optional<int> InverseCapacitance::index_of(const Coordinate& c) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == c) return static_cast<int>(i);
  return std::nullopt;
}

std::vector<int> InverseCapacitance::indices(Array x, Mode m) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i].array == x && labels[i].mode == m) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> InverseCapacitance::indices(Mode m) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i].mode == m) out.push_back(static_cast<int>(i));
  return out;
}

Eigen::MatrixXd InverseCapacitance::block(Array row, Mode row_mode, Array col,
                                          Mode col_mode) const {
  const auto r = indices(row, row_mode);
  const auto c = indices(col, col_mode);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) out(i, j) = matrix(r[i], c[j]);
  return out;
}

Eigen::MatrixXd invert_spd(const Eigen::MatrixXd& c) {
  if (c.rows() != c.cols()) throw FactorizationError("invert_spd: matrix is not square");
  if (c.rows() == 0) return c;
  const Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success)
    throw FactorizationError("invert_spd: matrix is not positive definite");
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(c.rows(), c.cols()));
  return 0.5 * (inv + inv.transpose());
}

InverseCapacitance invert_spd(const CapacitanceNetwork& c) {
  InverseCapacitance out;
  out.matrix = invert_spd(c.matrix);
  out.labels = c.labels;
  out.n_sites = c.n_sites;
  out.boundary = c.boundary;
  return out;
}

Eigen::MatrixXd effective_capacitance(const Eigen::MatrixXd& c, std::span<const int> kept) {
  const auto n = c.rows();
  std::vector<char> is_kept(static_cast<std::size_t>(n), 0);
  for (int k : kept) {
    if (k < 0 || k >= n) throw std::out_of_range("effective_capacitance: kept index out of range");
    is_kept[static_cast<std::size_t>(k)] = 1;
  }
  std::vector<int> dropped;
  for (int i = 0; i < n; ++i)
    if (!is_kept[static_cast<std::size_t>(i)]) dropped.push_back(i);

  const auto nk = static_cast<Eigen::Index>(kept.size());
  const auto nx = static_cast<Eigen::Index>(dropped.size());
  Eigen::MatrixXd ckk(nk, nk), ckx(nk, nx), cxx(nx, nx);
  for (Eigen::Index i = 0; i < nk; ++i) {
    for (Eigen::Index j = 0; j < nk; ++j) ckk(i, j) = c(kept[i], kept[j]);
    for (Eigen::Index j = 0; j < nx; ++j) ckx(i, j) = c(kept[i], dropped[j]);
  }
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < nx; ++j) cxx(i, j) = c(dropped[i], dropped[j]);
  if (nx == 0) return ckk;

  const Eigen::LLT<Eigen::MatrixXd> llt(cxx);
  if (llt.info() != Eigen::Success)
    throw FactorizationError("effective_capacitance: discarded block is singular");
  Eigen::MatrixXd schur = ckk - ckx * llt.solve(ckx.transpose());
  return 0.5 * (schur + schur.transpose());
}

namespace {

struct ImageModel {
  int n = 0;  // ring size, 0 for an open chain
  double g(int d, double xi) const {
    if (n == 0) return std::pow(xi, d);
    return (std::pow(xi, d) + std::pow(xi, n - d)) / (1.0 - std::pow(xi, n));
  }
  double dg(int d, double xi) const {
    auto dpow = [xi](int p) { return p == 0 ? 0.0 : p * std::pow(xi, p - 1); };
    if (n == 0) return dpow(d);
    const double den = 1.0 - std::pow(xi, n);
    const double num = std::pow(xi, d) + std::pow(xi, n - d);
    return ((dpow(d) + dpow(n - d)) * den + num * dpow(n)) / (den * den);
  }
};

double max_relative_residual(std::span<const double> row, int n_fit, const ImageModel& model,
                             double inv_scale, double kappa_scaled, double xi) {
  double worst = 0.0;
  for (int d = 0; d < n_fit; ++d) {
    const double m = (d == 0 ? inv_scale : 0.0) + kappa_scaled * model.g(d, xi);
    worst = std::max(worst, std::abs(m - row[static_cast<std::size_t>(d)]));
  }
  return worst / std::abs(row[0]);
}

}  // namespace

DropoffFit fit_dropoff(std::span<const double> row, bool periodic) {
  const int L = static_cast<int>(row.size());
  if (L < 6) throw std::invalid_argument("fit_dropoff: need at least 6 sites");
  if (!(row[0] > 0.0)) throw std::invalid_argument("fit_dropoff: diagonal entry must be positive");

  const ImageModel model{periodic ? L : 0};
  const int n_fit = periodic ? L / 2 + 1 : L;

  double off = 0.0;
  for (int d = 1; d < n_fit; ++d) off = std::max(off, std::abs(row[static_cast<std::size_t>(d)]));
  if (off < 1e-15 * row[0]) return {1.0 / row[0], 0.0, 0.0, 0.0};

  // Seed: xi from the distance-2 / distance-1 ratio, kappa from distance 1.
  double xi = row[2] / row[1];
  if (!(xi > 1e-6 && xi < 0.999)) xi = std::clamp(std::abs(xi), 1e-6, 0.999);
  // Parameters p = (1/C_A, kappa/C_A, xi).
  double b = row[1] / model.g(1, xi);
  double a = row[0] - b * model.g(0, xi);

  // Gauss-Newton refinement on the residuals normalized by the diagonal.
  const double w = 1.0 / row[0];
  Eigen::MatrixXd jac(n_fit, 3);
  Eigen::VectorXd res(n_fit);
  auto evaluate = [&](double aa, double bb, double xx) {
    double sum = 0.0;
    for (int d = 0; d < n_fit; ++d) {
      const double m = (d == 0 ? aa : 0.0) + bb * model.g(d, xx);
      const double r = (m - row[static_cast<std::size_t>(d)]) * w;
      sum += r * r;
    }
    return sum;
  };
  double cost = evaluate(a, b, xi);
  for (int it = 0; it < 100; ++it) {
    for (int d = 0; d < n_fit; ++d) {
      const double g = model.g(d, xi);
      res(d) = ((d == 0 ? a : 0.0) + b * g - row[static_cast<std::size_t>(d)]) * w;
      jac(d, 0) = d == 0 ? w : 0.0;
      jac(d, 1) = g * w;
      jac(d, 2) = b * model.dg(d, xi) * w;
    }
    const Eigen::Vector3d step = jac.colPivHouseholderQr().solve(-res);
    double scale = 1.0;
    bool improved = false;
    for (int half = 0; half < 40; ++half, scale *= 0.5) {
      const double nx = xi + scale * step(2);
      if (!(nx > 0.0 && nx < 1.0)) continue;
      const double nc = evaluate(a + scale * step(0), b + scale * step(1), nx);
      if (nc <= cost) {
        a += scale * step(0);
        b += scale * step(1);
        xi = nx;
        improved = nc < cost;
        cost = nc;
        break;
      }
    }
    if (!improved || step.norm() < 1e-15) break;
  }

  DropoffFit fit;
  fit.c_scale = 1.0 / a;
  fit.kappa = b / a;
  fit.xi = xi;
  fit.max_residual = max_relative_residual(row, n_fit, model, a, b, xi);
  return fit;
}

CancellationReport verify_direct_cancellation(const InverseCapacitance& inv) {
  const Eigen::MatrixXd qq = inv.block(Array::kQ, Mode::kMinus, Array::kQ, Mode::kMinus);
  CancellationReport out;
  if (qq.rows() == 0) return out;
  for (Eigen::Index i = 0; i < qq.rows(); ++i)
    for (Eigen::Index j = 0; j < qq.cols(); ++j)
      if (i != j) out.max_offdiag_qq = std::max(out.max_offdiag_qq, std::abs(qq(i, j)));
  out.ratio_to_diag = out.max_offdiag_qq / qq.diagonal().mean();
  return out;
}

}  // namespace qbus

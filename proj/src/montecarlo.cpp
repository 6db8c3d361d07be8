#include "qbus/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "qbus/cap_algebra.hpp"
#include "qbus/effective.hpp"
#include "qbus/parallel.hpp"
#include "qbus/spin_model.hpp"

namespace qbus {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class FactorSource {
 public:
  FactorSource(std::uint64_t seed, std::uint64_t index, double sigma)
      : rng_(splitmix64(splitmix64(seed) ^ index)), normal_(1.0, sigma), sigma_(sigma) {}

  double draw() {
    if (sigma_ == 0.0) return 1.0;
    double f = normal_(rng_);
    while (f <= 0.0) {
      ++resamples;
      f = normal_(rng_);
    }
    return f;
  }

  void scale(std::vector<double>& values) {
    for (double& v : values) v *= draw();
  }

  int resamples = 0;

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  double sigma_;
};

}  // namespace

SampledRealization sample_realization(const CircuitRealization& nominal, double sigma_rel,
                                      std::uint64_t index, std::uint64_t seed,
                                      bool perturb_capacitors, bool perturb_josephson) {
  if (!(sigma_rel >= 0.0)) throw std::invalid_argument("sample_realization: sigma must be >= 0");
  if (sigma_rel >= 0.2) throw std::invalid_argument("sample_realization: sigma must be < 0.2");
  SampledRealization out{nominal, 0};
  FactorSource src(seed, index, sigma_rel);
  CircuitRealization& r = out.circuit;
  for (Array x : {Array::kQ, Array::kA, Array::kB}) {
    ArrayElements& e = r.elements(x);
    if (perturb_capacitors) {
      src.scale(e.shunt);
      src.scale(e.ground_up);
      src.scale(e.ground_down);
      src.scale(e.link);
    }
    if (perturb_josephson) src.scale(e.josephson);
  }
  if (perturb_capacitors) {
    src.scale(r.data_a_up);
    src.scale(r.data_a_down);
    src.scale(r.data_b_up);
    src.scale(r.data_b_down);
  }
  out.resamples = src.resamples;
  return out;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Couplings between data qubit 0 and qubit dist, per grid point; NaN on failure.
std::vector<double> couplings_of(const CircuitRealization& r, std::span<const double> grid,
                                 int max_distance) {
  const InverseCapacitance inv = invert_spd(assemble_capacitance_matrix(r));
  std::vector<double> out;
  out.reserve(grid.size() * static_cast<std::size_t>(max_distance));
  for (double wq : grid) {
    const std::vector<double> tuned(static_cast<std::size_t>(r.n_sites), wq);
    try {
      const auto eff = numeric_effective_hamiltonian(hamiltonian_from_circuit(inv, r, tuned));
      for (int dist = 1; dist <= max_distance; ++dist)
        out.push_back(eff.matrix(0, dist % r.n_sites));
    } catch (const HybridizationError&) {
      out.insert(out.end(), static_cast<std::size_t>(max_distance), kNaN);
    }
  }
  return out;
}

}  // namespace

QuantileTable variance_study(const BusDesign& d, const VarianceConfig& cfg) {
  if (cfg.n_realizations < 1) throw std::invalid_argument("variance_study: need >= 1 realization");
  if (cfg.max_distance < 1 || cfg.max_distance >= d.n_qubits)
    throw std::invalid_argument("variance_study: max_distance out of range");

  const CircuitRealization nominal = synthesize_capacitances(d, cfg.synthesis);
  const auto& grid = cfg.omega_q_grid;
  const std::vector<double> nominal_j = couplings_of(nominal, grid, cfg.max_distance);

  const auto n = static_cast<std::size_t>(cfg.n_realizations);
  std::vector<std::vector<double>> samples(n);
  std::vector<int> resamples(n, 0);
  parallel_for(cfg.n_realizations, cfg.threads, [&](int i) {
    const auto s = sample_realization(nominal, cfg.sigma_rel, static_cast<std::uint64_t>(i),
                                      cfg.seed, cfg.perturb_capacitors, cfg.perturb_josephson);
    samples[static_cast<std::size_t>(i)] = couplings_of(s.circuit, grid, cfg.max_distance);
    resamples[static_cast<std::size_t>(i)] = s.resamples;
  });

  QuantileTable table;
  for (int r : resamples) table.total_resamples += r;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (int dist = 1; dist <= cfg.max_distance; ++dist) {
      const std::size_t k = g * static_cast<std::size_t>(cfg.max_distance) +
                            static_cast<std::size_t>(dist - 1);
      std::vector<double> values, magnitudes;
      QuantileRow row;
      row.omega_q = grid[g];
      row.distance = dist;
      row.nominal = nominal_j[k];
      for (std::size_t i = 0; i < n; ++i) {
        const double v = samples[i][k];
        if (cfg.keep_raw) table.raw.push_back({static_cast<int>(i), grid[g], dist, v});
        if (std::isnan(v)) {
          ++row.n_failed;
          continue;
        }
        values.push_back(v);
        magnitudes.push_back(std::abs(v));
      }
      row.n_valid = static_cast<int>(values.size());
      row.q10 = quantile(values, 0.1);
      row.q50 = quantile(values, 0.5);
      row.q90 = quantile(values, 0.9);
      row.median_abs = quantile(magnitudes, 0.5);
      table.rows.push_back(row);
    }
  }
  return table;
}

}  // namespace qbus

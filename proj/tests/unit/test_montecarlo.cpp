#include <doctest.h>

#include <cmath>
#include <vector>

#include "qbus/montecarlo.hpp"

using namespace qbus;

namespace {

VarianceConfig small_config() {
  VarianceConfig cfg;
  cfg.sigma_rel = 0.02;
  cfg.n_realizations = 40;
  cfg.seed = 99;
  cfg.omega_q_grid = {ghz_to_angular(3.9), ghz_to_angular(4.0)};
  cfg.max_distance = 2;
  return cfg;
}

}  // namespace

TEST_CASE("quantile") {
  const std::vector<double> v{5.0, 1.0, 4.0, 2.0, 3.0};
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 1.0) == 5.0);
  CHECK(quantile(v, 0.5) == 3.0);
  CHECK(quantile(v, 0.1) == doctest::Approx(1.4).epsilon(1e-14));
  CHECK(quantile(v, 0.9) == doctest::Approx(4.6).epsilon(1e-14));
  CHECK(std::isnan(quantile({}, 0.5)));
  CHECK_THROWS(quantile(v, 1.5));
}

TEST_CASE("sampling streams") {
  const CircuitRealization nominal = synthesize_capacitances(reference_design(5));
  const auto a = sample_realization(nominal, 0.02, 3, 17);
  const auto b = sample_realization(nominal, 0.02, 3, 17);
  const auto c = sample_realization(nominal, 0.02, 4, 17);
  CHECK(a.circuit.a.link == b.circuit.a.link);
  CHECK(a.circuit.q.josephson == b.circuit.q.josephson);
  CHECK(a.circuit.a.link != c.circuit.a.link);

  const auto zero = sample_realization(nominal, 0.0, 3, 17);
  CHECK(zero.circuit.b.shunt == nominal.b.shunt);
  CHECK(zero.circuit.data_a_up == nominal.data_a_up);

  const auto caps_only = sample_realization(nominal, 0.02, 3, 17, true, false);
  CHECK(caps_only.circuit.a.josephson == nominal.a.josephson);
  CHECK(caps_only.circuit.a.shunt != nominal.a.shunt);

  CHECK_THROWS(sample_realization(nominal, 0.2, 0, 1));
  CHECK_THROWS(sample_realization(nominal, -0.01, 0, 1));
}

TEST_CASE("perturbation factors are N(1, sigma)") {
  const CircuitRealization nominal = synthesize_capacitances(reference_design(5));
  const double sigma = 0.05;
  double sum = 0.0, sum2 = 0.0;
  int n = 0;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const auto s = sample_realization(nominal, sigma, i, 5);
    for (std::size_t m = 0; m < 5; ++m) {
      const double f = s.circuit.a.shunt[m] / nominal.a.shunt[m];
      sum += f;
      sum2 += f * f;
      ++n;
    }
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(std::abs(mean - 1.0) < 3.0 * sigma / std::sqrt(static_cast<double>(n)));
  CHECK(sd == doctest::Approx(sigma).epsilon(0.05));
}

TEST_CASE("zero variance reproduces the nominal couplings") {
  VarianceConfig cfg = small_config();
  cfg.sigma_rel = 0.0;
  cfg.n_realizations = 3;
  const auto t = variance_study(reference_design(), cfg);
  REQUIRE(t.rows.size() == 4);
  for (const auto& r : t.rows) {
    CHECK(r.q10 == r.nominal);
    CHECK(r.q90 == r.nominal);
    CHECK(r.n_valid == 3);
  }
  CHECK(t.rows[1].omega_q == cfg.omega_q_grid[0]);
  CHECK(t.rows[1].distance == 2);
  CHECK(t.total_resamples == 0);
}

TEST_CASE("variance study") {
  VarianceConfig cfg = small_config();
  cfg.keep_raw = true;
  const auto one = variance_study(reference_design(), cfg);
  cfg.threads = 4;
  const auto four = variance_study(reference_design(), cfg);
  REQUIRE(one.rows.size() == four.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    const auto& r = one.rows[i];
    CHECK(r.q10 == four.rows[i].q10);
    CHECK(r.q50 == four.rows[i].q50);
    CHECK(r.q90 == four.rows[i].q90);
    CHECK(r.q10 <= r.q50);
    CHECK(r.q50 <= r.q90);
    CHECK(r.n_valid + r.n_failed == cfg.n_realizations);
  }
  CHECK(one.raw.size() == 2 * 2 * 40);
}

TEST_CASE("Josephson-only variance leaves the idle coupling nearly unchanged") {
  VarianceConfig cfg = small_config();
  cfg.omega_q_grid = {ghz_to_angular(4.0)};
  cfg.max_distance = 1;
  cfg.n_realizations = 60;
  const auto full = variance_study(reference_design(), cfg);
  cfg.perturb_capacitors = false;
  const auto ej = variance_study(reference_design(), cfg);
  const auto& f = full.rows[0];
  const auto& e = ej.rows[0];
  const double inflation_full = f.median_abs - std::abs(f.nominal);
  const double inflation_ej = std::abs(e.median_abs - std::abs(e.nominal));
  CHECK(inflation_full > 0.0);
  CHECK(inflation_ej < 0.5 * inflation_full);
}

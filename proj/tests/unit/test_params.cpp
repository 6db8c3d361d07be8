#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qbus/params.hpp"

using namespace qbus;

TEST_CASE("charging energy of 1 fF") {
  CHECK(std::abs(constants::kChargingGhz1fF - 19.37) < 0.01);
  CHECK(constants::kChargingRate1fF ==
        doctest::Approx(2.0 * std::numbers::pi * constants::kChargingGhz1fF).epsilon(1e-14));
}

TEST_CASE("unit conversions") {
  CHECK(ghz_to_angular(0.0) == 0.0);
  CHECK(ghz_to_angular(4.0) == doctest::Approx(8.0 * std::numbers::pi).epsilon(1e-15));
  CHECK(ghz_to_angular(1.0 / (2.0 * std::numbers::pi)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(angular_to_mhz(mhz_to_angular(3.5)) == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(angular_to_ghz(ghz_to_angular(4.7)) == doctest::Approx(4.7).epsilon(1e-15));
}

TEST_CASE("kappa_max") {
  CHECK(kappa_max(0.0) == 1.0);
  CHECK(kappa_max(0.3) == doctest::Approx(7.0 / 13.0).epsilon(1e-15));
  CHECK(kappa_max(0.999) < 1e-3);
  double prev = kappa_max(0.0);
  for (int i = 1; i < 100; ++i) {
    const double k = kappa_max(0.0099 * i);
    CHECK(k < prev);
    prev = k;
  }
  CHECK_THROWS_AS(kappa_max(-0.1), std::domain_error);
  CHECK_THROWS_AS(kappa_max(1.0), std::domain_error);
}

TEST_CASE("validate_design") {
  const BusDesign ref = reference_design();
  CHECK(validate_design(ref).ok());
  CHECK(ref.n_qubits == 11);
  CHECK(angular_to_ghz(ref.omega_q_idle) == doctest::Approx(4.0));

  SUBCASE("kappa bound") {
    BusDesign d = ref;
    d.kappa_a = kappa_max(d.xi) + 0.01;
    const auto r = validate_design(d);
    CHECK(r.has("kappa bound"));
    CHECK_FALSE(r.ok());
    CHECK(validate_design(d).summary() == r.summary());
  }
  SUBCASE("kappa sign") {
    BusDesign d = ref;
    d.kappa_a = -0.1;
    d.kappa_b = 0.1;
    CHECK(validate_design(d).has("kappa sign"));
  }
  SUBCASE("frequency ordering") {
    BusDesign d = ref;
    d.omega_a = ghz_to_angular(4.5);
    CHECK(validate_design(d).has("frequency ordering"));
  }
  SUBCASE("xi range") {
    BusDesign d = ref;
    d.xi = 1.2;
    CHECK(validate_design(d).has("xi range"));
  }
  SUBCASE("degenerate buses are allowed") {
    BusDesign d = ref;
    d.kappa_a = 0.0;
    d.kappa_b = 0.0;
    d.eps = 0.0;
    CHECK(validate_design(d).ok());
  }
}

TEST_CASE("boundary names") {
  CHECK(boundary_from_string(to_string(Boundary::kOpen)) == Boundary::kOpen);
  CHECK(boundary_from_string(to_string(Boundary::kPeriodic)) == Boundary::kPeriodic);
  CHECK_THROWS_AS(boundary_from_string("twisted"), std::invalid_argument);
}

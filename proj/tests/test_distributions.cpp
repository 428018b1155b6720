#include "doctest.h"

#include "momentdet/distributions.hpp"

using namespace momentdet;

TEST_SUITE_BEGIN("distributions");

TEST_CASE("densities are nonnegative and integrate to one") {
  for (const auto& dist : {gaussian_reference(), sech_reference()}) {
    const auto m = reference_moments(dist, 0);
    CHECK(std::abs(m.even_moments[0] - 1.0) < 1e-8);
    for (double x = -30.0; x <= 30.0; x += 0.37) CHECK(dist.density(x) >= 0.0);
  }
}

TEST_CASE("Gaussian moments are the double factorials") {
  const auto m = reference_moments(gaussian_reference(), 3).even_moments;
  CHECK(scaled_deviation(m[0], 1.0) < 1e-9);
  CHECK(scaled_deviation(m[1], 1.0) < 1e-9);
  CHECK(scaled_deviation(m[2], 3.0) < 1e-9);
  CHECK(scaled_deviation(m[3], 15.0) < 1e-9);
  const auto m5 = reference_moments(gaussian_reference(), 5).even_moments;
  CHECK(scaled_deviation(m5[4], 105.0) < 1e-9);
  CHECK(scaled_deviation(m5[5], 945.0) < 1e-9);
}

TEST_CASE("hyperbolic secant moments (Euler numbers)") {
  const auto m = reference_moments(sech_reference(), 4).even_moments;
  CHECK(scaled_deviation(m[0], 1.0) < 1e-7);
  CHECK(scaled_deviation(m[1], 1.0) < 1e-7);
  CHECK(scaled_deviation(m[2], 5.0) < 1e-7);
  CHECK(scaled_deviation(m[3], 61.0) < 1e-7);
  CHECK(scaled_deviation(m[4], 1385.0) < 1e-7);
}

TEST_CASE("normalization alone: N = 0") {
  const auto m = reference_moments(sech_reference(), 0).even_moments;
  REQUIRE(m.size() == 1);
  CHECK(m[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("validate_reference: gaussian against omega_n = n") {
  const auto report = validate_reference(gaussian_reference(), 5, 1e-7);
  CHECK(report.max_deviation < 1e-9);
}

TEST_CASE("validate_reference: sech against omega_n = n^2") {
  const auto report = validate_reference(sech_reference(), 4, 1e-7);
  CHECK(report.max_deviation < 1e-7);
}

TEST_CASE("validate_reference flags a wrong Jacobi sequence") {
  auto wrong = sech_reference();
  wrong.jacobi = JacobiSequence::power(1.0);  // Gaussian sequence under a sech density
  try {
    validate_reference(wrong, 4, 1e-7);
    FAIL("expected MismatchBeyondTolerance");
  } catch (const MismatchBeyondTolerance& e) {
    CHECK(e.index == 2);  // M_4: 3 (walk) vs 5 (density)
  }
}

TEST_CASE("moment window limits are enforced") {
  CHECK_THROWS_AS(reference_moments(sech_reference(), 11), InvalidParameter);
  CHECK_THROWS_AS(reference_moments(sech_reference(), -1), InvalidParameter);
  auto qmeta = reference_distributions()[2];
  CHECK_THROWS_AS(reference_moments(qmeta, 2), InvalidParameter);  // no density
}

TEST_CASE("a too-small window fails loudly rather than silently") {
  QuadratureParams params;
  params.half_window = 6.0;  // e^{-pi 6/2} tail is far above 1e-9 at high degree
  CHECK_THROWS_AS(reference_moments(sech_reference(), 8, params), QuadratureNotConverged);
}

TEST_CASE("known verdicts agree with the analyzer") {
  for (const auto& dist : reference_distributions()) {
    const auto report = decide_sc(dist.jacobi, 300, 1e-10);
    CHECK(report.verdict == dist.known_verdict);
  }
}

TEST_SUITE_END();

#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fklab/quadrature.hpp"

using namespace fklab;

TEST_CASE("Gauss-Kronrod is exact for polynomials of degree <= 31 on one panel") {
  QuadratureSpec q;
  q.max_subdivisions = 1;
  for (int k : {0, 5, 20, 31}) {
    const QuadratureResult r = integrate([k](double x) { return (k + 1) * std::pow(x, k); }, 0.0, 1.0, q);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("adaptive integration reaches the tolerance on smooth and kinked integrands") {
  const QuadratureSpec q;
  CHECK(integrate_checked([](double x) { return std::exp(-x); }, 0.0, 30.0, q, "exp") ==
        doctest::Approx(1 - std::exp(-30.0)).epsilon(1e-10));
  const double bp[] = {-2.0, 0.0, 3.0};
  CHECK(integrate_checked([](double x) { return std::abs(x); }, bp, q, "abs") == doctest::Approx(6.5).epsilon(1e-12));
  CHECK(integrate_checked([](double x) { return 1 / std::sqrt(x); }, 0.0, 1.0, q, "sqrt") ==
        doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("failure to converge is reported with the achieved error") {
  QuadratureSpec q;
  q.max_subdivisions = 3;
  try {
    integrate_checked([](double x) { return std::sin(1 / x) / x; }, 1e-4, 1.0, q, "oscillatory");
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.achieved_error > 0);
  }
  QuadratureSpec bad;
  bad.abs_tol = -1;
  CHECK_THROWS(bad.validate());
}

#include "doctest.h"

#include <cmath>

#include "fklab/ids.hpp"

using namespace fklab;

TEST_CASE("tilt time solves its defining equation") {
  for (double alpha : {1.5, 2.0, 2.5}) {
    const ConstantsBundle c = compute_constants(1, alpha);
    for (double lambda : {0.3, 1.0, 2.5}) {
      const double t = lifshitz_tilt_time(lambda, 1, alpha);
      const double lhs = c.a1 / alpha * std::pow(t, -(alpha - 1) / alpha) +
                         c.a2 * (alpha - 1) / (2 * alpha) * std::pow(t, -(alpha + 1) / (2 * alpha));
      CHECK(lhs == doctest::Approx(lambda).epsilon(1e-10));
    }
  }
  CHECK_THROWS(lifshitz_tilt_time(-1, 1, 2.0));
}

TEST_CASE("two-term Lifshitz exponent") {
  const ConstantsBundle c = compute_constants(1, 2.0);
  CHECK(lifshitz_minus_log(0.5, 1, 2.0) == doctest::Approx(c.l1 * 2 + c.l2 * std::pow(2.0, 0.5)));
}

TEST_CASE("density of states is deterministic and box independent") {
  const std::vector<double> lambdas{0.8};
  const IdsCurve a = ids_estimate(lambdas, 1, 1.5, 32, 300, 9);
  const IdsCurve b = ids_estimate(lambdas, 1, 1.5, 32, 300, 9);
  CHECK(a.points[0].N == b.points[0].N);
  const IdsCurve big = ids_estimate(lambdas, 1, 1.5, 64, 300, 10);
  const double sa = (a.points[0].hi - a.points[0].lo) / 3.92, sb = (big.points[0].hi - big.points[0].lo) / 3.92;
  CHECK(a.points[0].N > 0);
  CHECK(std::abs(a.points[0].N - big.points[0].N) < 3 * std::hypot(sa, sb));
}

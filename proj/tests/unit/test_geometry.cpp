#include "doctest.h"

#include <cmath>

#include "fklab/geometry.hpp"

using namespace fklab;

TEST_CASE("box containment and inner distance") {
  const Box b = Box::cube(2, 1.0);
  CHECK(b.volume() == doctest::Approx(4.0));
  const Point in{0.5, -0.25}, out{1.5, 0.0};
  CHECK(b.contains(in));
  CHECK_FALSE(b.contains(out));
  CHECK(b.inner_distance(in) == doctest::Approx(0.5));
  CHECK(b.inner_distance(out) < 0);
  CHECK(b.contains(Box::cube(Point{0.1, 0.1}, 0.5)));
  const Point shift{1.0, 2.0};
  CHECK(b.translated(shift).center[1] == doctest::Approx(2.0));
}

TEST_CASE("discrete measure normalizes weights and computes moments") {
  const DiscreteMeasure mu(1, {-1.0, 1.0, 3.0}, {1.0, 1.0, 2.0});
  CHECK(mu.weight(2) == doctest::Approx(0.5));
  CHECK(mu.barycenter()[0] == doctest::Approx(1.5));
  CHECK(mu.centered_second_moment() == doctest::Approx(0.25 * 6.25 + 0.25 * 0.25 + 0.5 * 2.25));
  const Point s{2.0};
  CHECK(mu.translated(s).barycenter()[0] == doctest::Approx(3.5));
  CHECK(mu.translated(s).centered_second_moment() == doctest::Approx(mu.centered_second_moment()));
  CHECK(DiscreteMeasure::dirac(Point{4.0}).centered_second_moment() == doctest::Approx(0.0));
}

TEST_CASE("Gauss-Hermite rule integrates normal moments exactly") {
  std::vector<double> x, w;
  gauss_hermite_normal(12, x, w);
  const double exact[] = {1, 0, 1, 0, 3, 0, 15, 0, 105, 0, 945};
  for (int k = 0; k <= 10; ++k) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
    CHECK(s == doctest::Approx(exact[k]).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("Gauss-Hermite nu_0 has the predicted second moment") {
  const Model m({1, 2.0, 1.0});
  const DiscreteMeasure nu = gauss_hermite_nu(m, 3.0, Point{1.0});
  CHECK(nu.size() == 32);
  CHECK(nu.barycenter()[0] == doctest::Approx(1.0));
  CHECK(nu.centered_second_moment() == doctest::Approx(9.0 * m.nu0_coordinate_variance()).epsilon(1e-12));
  const Model m2({2, 3.0, 1.0});
  const DiscreteMeasure nu2 = gauss_hermite_nu(m2, 1.0, Point{0.0, 0.0});
  CHECK(nu2.centered_second_moment() == doctest::Approx(m2.nu0_second_moment()).epsilon(1e-12));
}

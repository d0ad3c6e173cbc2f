#include "doctest.h"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "fklab/laplace.hpp"

using namespace fklab;

// log E exp(-s V(0)) in d = 1 through Boost's quadrature (independent of the library integrator)
double boost_log_mgf(double s, double a) {
  using namespace boost::math::quadrature;
  const double inner = gauss_kronrod<double, 61>::integrate([&](double) { return 1 - std::exp(-s); }, 0.0, 1.0);
  exp_sinh<double> es;
  const double outer = es.integrate([&](double y) {
    const double u = std::pow(1 + y, -a);
    return -std::expm1(-s * u);
  });
  return -2 * (inner + outer);
}

TEST_CASE("log-MGF agrees with an independent Boost evaluation") {
  for (double a : {1.5, 2.0, 2.5})
    for (double s : {0.1, 1.0, 10.0, 1e3}) {
      const Model m({1, a, 1.0});
      CHECK(exact_mgf_V0(s, m) == doctest::Approx(boost_log_mgf(s, a)).epsilon(1e-8));
    }
}

TEST_CASE("log-MGF tends to -a1 s^{d/alpha}") {
  const Model m({1, 2.0, 1.0});
  CHECK(exact_mgf_V0(1e4, m) == doctest::Approx(-m.constants().a1 * 100).epsilon(1e-12));
  const Model m2({2, 3.0, 1.0});
  CHECK(std::abs(exact_mgf_V0(100, m2) + m2.constants().a1 * std::pow(100.0, 2.0 / 3)) < 1e-6);
}

TEST_CASE("Laplace functional: sign, translation invariance, monotone and concave in t") {
  const DiscreteMeasure mu(1, {-1.0, 0.5, 2.0}, {0.2, 0.5, 0.3});
  const Point s{7.25};
  double prev = 0, prev_slope = INFINITY;
  for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const Model m({1, 2.0, t});
    const double v = exact_log_laplace(mu, m);
    CHECK(v > 0);
    CHECK(exact_log_laplace(mu.translated(s), m) == doctest::Approx(v).epsilon(1e-10));
    CHECK(v > prev);
    const double slope = (v - prev) / (t / 2);
    CHECK(slope < prev_slope);
    prev = v;
    prev_slope = slope;
  }
}

TEST_CASE("second-order term of the Laplace functional") {
  const DiscreteMeasure mu(1, {-1.0, 1.0}, {1.0, 1.0});
  const Model m({1, 2.0, 1e6});
  const double ratio = (exact_log_laplace(mu, m) - m.constants().a1 * 1e3) / (1e-3 * mu.centered_second_moment());
  CHECK(ratio == doctest::Approx(m.constants().C).epsilon(0.05));
  // the prediction depends on mu only through M2
  const DiscreteMeasure nu(1, {-2.0, 0.0, 2.0}, {0.125, 0.75, 0.125});
  CHECK(predicted_log_laplace(mu, m) == doctest::Approx(predicted_log_laplace(nu, m)));
}

TEST_CASE("two-point bound") {
  const Model m({1, 2.0, 1e4});
  const Point x{0.0}, y{5.0};
  const TwoPointCheck c = two_point_bound_check(x, y, m);
  CHECK(c.holds);
  CHECK(c.margin > 0);
}

TEST_CASE("tilted mean and variance") {
  const Model m0({1, 2.0, 0.0});
  const DiscreteMeasure d0 = DiscreteMeasure::dirac(Point{0.0});
  const Point x{0.0}, xm{-0.7}, xp{0.7};
  CHECK(tilted_mean_V(d0, x, m0) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(tilted_variance_V(d0, x, m0).variance == doctest::Approx(8.0 / 3).epsilon(1e-9));
  const Model m({1, 2.0, 50.0});
  const DiscreteMeasure mu(1, {-1.0, 1.0}, {1.0, 1.0});
  CHECK(tilted_mean_V(mu, xm, m) == doctest::Approx(tilted_mean_V(mu, xp, m)).epsilon(1e-10));
  CHECK(tilted_variance_V(mu, xp, m).variance <= tilted_mean_V(mu, xp, m));
  // delta tilt at large t: mean close to h_t
  const Model big({1, 2.0, 1e6});
  CHECK(tilted_mean_V(d0, x, big) == doctest::Approx(big.h_t()).epsilon(1e-3));
  // box-restricted cumulants never exceed the full-space ones
  const Box b = Box::cube(1, 10.0);
  CHECK(tilted_mean_V(mu, x, m, {}, b) < tilted_mean_V(mu, x, m));
  CHECK(tilted_cumulant(3, mu, x, m, {}, b) > 0);
}

#include "doctest.h"

#include <cmath>

#include "fklab/potential.hpp"

using namespace fklab;

TEST_CASE("potential view sums the in-box points and adds the tail mean") {
  const Model m({1, 2.0, 100.0});
  PointConfig c = sample_homogeneous(Box::cube(1, 400.0), 1.0, 5, 0);
  const Box win = Box::cube(1, 20.0);
  const PotentialView plain(c, win, m, {1.0, false});
  const PotentialView shifted(c, win, m, {1.0, true});
  for (double x : {-19.0, 0.0, 3.3}) {
    double s = 0;
    for (double y : c.coords) s += std::min(1.0, 1 / ((x - y) * (x - y)));
    const double at[1] = {x};
    CHECK(plain(at) == doctest::Approx(s).epsilon(1e-13));
    // tail mean = integral of |x-y|^{-2} outside the box
    const double tail = 1 / (x + 400) + 1 / (400 - x);
    CHECK(shifted(at) - plain(at) == doctest::Approx(tail).epsilon(1e-12));
    std::vector<double> out(1);
    plain.evaluate_many(at, out);
    CHECK(out[0] == doctest::Approx(plain(at)).epsilon(1e-13));
  }
  const double outside[1] = {25.0};
  CHECK_THROWS_AS(plain(outside), std::out_of_range);
  // the tail bound must beat the tolerance
  CHECK_THROWS_AS(PotentialView(c, win, m, {1e-6, false}), std::invalid_argument);
}

TEST_CASE("local minimum and profile deviation") {
  const Model m({1, 2.0, 1e3});
  PointConfig c;
  c.box = Box::cube(Point{3.0}, 1e4);
  // a gap around 3 in an otherwise dense lattice, symmetric about 3
  for (double y = -9987; y <= 9993; y += 0.5)
    if (std::abs(y - 3) > 6) c.coords.push_back(y);
  const PotentialView v(c, Box::cube(1, 50.0), m, {1.0, false});
  const MinimizerResult r = find_local_min(v, 0.05, 1e-9);
  CHECK(r.m[0] == doctest::Approx(3.0).epsilon(1e-6));
  const double mc[1] = {1.5};
  const ScalarField q = [&](std::span<const double> x) {
    const double z = x[0] - 1.5;
    return 2.0 + m.quadratic_profile(std::span<const double>(&z, 1));
  };
  CHECK(profile_deviation(q, Box::cube(1, 50.0), mc, 10.0, m) < 1e-13);
  const ScalarField bumped = [&](std::span<const double> x) { return q(x) + 0.1 * std::sin(x[0]); };
  CHECK(profile_deviation(bumped, Box::cube(1, 50.0), mc, 10.0, m) > 0.05);
}

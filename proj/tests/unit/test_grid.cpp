#include "doctest.h"

#include <cmath>

#include "fklab/grid.hpp"

using namespace fklab;

TEST_CASE("fitted grid spacing divides the box") {
  const Grid g = Grid::fitted(Box::cube(1, 3.0), 0.07);
  CHECK(g.spacing() <= 0.07);
  const double n = 6.0 / g.spacing();
  CHECK(std::abs(n - std::round(n)) < 1e-9);
  CHECK(g.size() == std::size_t(std::round(n)) - 1);
  CHECK(g.coord(0, 0) == doctest::Approx(-3 + g.spacing()));
}

TEST_CASE("delta, integral, nearest node") {
  const Grid g(Box::cube(2, 1.0), 0.25);
  CHECK(g.size() == 49);
  const Point x{0.3, -0.6};
  const GridField d = GridField::delta(g, x);
  CHECK(d.integral() == doctest::Approx(1.0));
  std::vector<double> c(2);
  g.node(g.nearest_node(x), c.data());
  CHECK(c[0] == doctest::Approx(0.25));
  CHECK(c[1] == doctest::Approx(-0.5));
  const GridField f = GridField::from_function(g, [](std::span<const double> p) { return p[0] + 2 * p[1]; });
  CHECK(f.integral() == doctest::Approx(0.0).scale(1.0));
  CHECK(f.inner(f) == doctest::Approx(f.norm() * f.norm()));
}

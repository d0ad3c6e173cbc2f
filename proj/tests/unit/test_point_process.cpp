#include "doctest.h"

#include <cmath>
#include <sstream>

#include "fklab/point_process.hpp"
#include "fklab/stats.hpp"

using namespace fklab;

TEST_CASE("homogeneous sampling: count law, containment, determinism") {
  const Box b(Point{1.0, -2.0}, {3.0, 1.5});
  std::vector<double> counts;
  for (std::uint64_t s = 0; s < 400; ++s) {
    const PointConfig c = sample_homogeneous(b, 2.0, 11, s);
    counts.push_back(double(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(b.contains(c.point(i)));
  }
  const double lam = 2.0 * b.volume();
  CHECK(std::abs(mean(counts) - lam) < 5 * std::sqrt(lam / counts.size()));
  CHECK(variance(counts) == doctest::Approx(lam).epsilon(0.2));
  const PointConfig x = sample_homogeneous(b, 2.0, 11, 5), y = sample_homogeneous(b, 2.0, 11, 5);
  CHECK(x.coords == y.coords);
}

TEST_CASE("tilted sampling thins by the tilt acceptance") {
  const Model m({1, 2.0, 3.0});
  const DiscreteMeasure mu(1, {-1.0, 1.0}, {1.0, 1.0});
  const Box b = Box::cube(1, 6.0);
  // count of points in [0.5, 1.5] against the integral of the acceptance
  double hits = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const PointConfig c = sample_tilted(mu, m, b, 3, i);
    for (std::size_t k = 0; k < c.size(); ++k) hits += (c.coords[k] >= 0.5 && c.coords[k] < 1.5);
  }
  double expect = 0;
  const int steps = 20000;
  for (int j = 0; j < steps; ++j) {
    const double y = 0.5 + (j + 0.5) / steps;
    expect += tilt_acceptance(std::span<const double>(&y, 1), mu, m) / steps;
  }
  expect *= n;
  CHECK(std::abs(hits - expect) < 4 * std::sqrt(expect));
  const PointConfig c = sample_tilted(mu, m, b, 3, 0);
  CHECK(std::holds_alternative<TiltedIntensity>(c.intensity));
}

TEST_CASE("config text round trip") {
  const PointConfig c = sample_homogeneous(Box::cube(2, 2.0), 1.0, 4, 1);
  std::stringstream ss;
  write_config(ss, c);
  const PointConfig r = read_config(ss);
  REQUIRE(r.size() == c.size());
  for (std::size_t i = 0; i < c.coords.size(); ++i) CHECK(r.coords[i] == c.coords[i]);
  CHECK(r.seed == c.seed);
  CHECK(r.box.half_widths == c.box.half_widths);
}

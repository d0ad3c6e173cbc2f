#include "doctest.h"

#include <cmath>

#include "fklab/annealed.hpp"

using namespace fklab;

TEST_CASE("far-field margin meets its tolerance") {
  const Model model({1, 2.0, 100.0});
  const double sd = model.constants().sigma_d;
  for (double tol : {1e-2, 1e-3}) {
    const double R = far_field_margin(model, {tol, false});
    // tail mean of sum over |y| > R of |y|^-alpha
    CHECK(sd * std::pow(R, 1 - 2.0) / (2.0 - 1) == doctest::Approx(0.5 * tol));
    const double Rs = far_field_margin(model, {tol, true});
    CHECK(std::sqrt(sd * std::pow(Rs, 1 - 4.0) / 3.0) == doctest::Approx(0.5 * tol));
    CHECK(Rs < R);
  }
  AnnealedOptions o;
  o.sampling_margin = 7;
  const Box b = sampling_box(model, Box::cube(1, 3.0), o);
  CHECK(b.half_widths[0] == doctest::Approx(10.0));
}

TEST_CASE("importance and plain sampling agree on the annealed partition") {
  const Model model({1, 2.0, 2.0});
  EvolutionSpec spec;
  spec.engine = Engine::eigen;
  AnnealedOptions is, plain;
  plain.importance = false;
  const AnnealedEstimate a = annealed_partition(model, spec, 1500, 3, is);
  const AnnealedEstimate b = annealed_partition(model, spec, 1500, 4, plain);
  CHECK(std::abs(a.log_value - b.log_value) < 3 * std::hypot(a.se_log, b.se_log) + 1e-3);
  CHECK(a.lo <= a.value);
  CHECK(a.value <= a.hi);
}

TEST_CASE("confinement masses increase with the radius") {
  const Grid g(Box::cube(1, 6.0), 0.02);
  const GridField V = GridField::from_function(g, [](std::span<const double> x) { return 0.3 * x[0] * x[0]; });
  EvolutionSpec spec;
  spec.engine = Engine::eigen;
  const std::vector<double> radii{0.5, 1.0, 2.0, 4.0, 10.0};
  const std::vector<double> lm = confinement_log_masses(V, spec, 5.0, radii);
  REQUIRE(lm.size() == radii.size() + 1);
  for (std::size_t k = 2; k < lm.size(); ++k) CHECK(lm[k] >= lm[k - 1]);
  for (std::size_t k = 1; k < lm.size(); ++k) CHECK(lm[k] <= lm[0] + 1e-12);
  CHECK(lm.back() == lm.front());
}

TEST_CASE("crossing radius interpolates in log L") {
  const std::vector<double> L{1, 2, 4, 8};
  const std::vector<double> p{0.1, 0.4, 0.6, 0.9};
  CHECK(crossing_radius(L, p) == doctest::Approx(std::sqrt(8.0)));
  const std::vector<double> low{0.1, 0.2, 0.3, 0.4};
  CHECK(std::isnan(crossing_radius(L, low)));
}

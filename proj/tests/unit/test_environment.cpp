#include "doctest.h"

#include <cmath>

#include "fklab/environment.hpp"
#include "fklab/laplace.hpp"
#include "fklab/stats.hpp"

using namespace fklab;

TEST_CASE("center laws are normalized") {
  for (const CenterLaw& law : {CenterLaw::gaussian(1, 0.7, 0.1, 2.0), CenterLaw::gaussian(2, 1.0, 0.5, 2.0),
                               CenterLaw::uniform(Box::cube(1, 3.0), 0.4), CenterLaw::single(Point{1.5})}) {
    double s = 0;
    for (double p : law.probs) s += p;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(law.centers.size() == law.size() * static_cast<std::size_t>(law.dim));
  }
  const CenterLaw u = CenterLaw::uniform(Box::cube(1, 3.0), 0.4);
  CHECK(u.size() == 15);
  CHECK(u.centers.front() == doctest::Approx(-3.0 + 0.2));
}

TEST_CASE("homogeneous sampler carries zero log weight") {
  const HomogeneousSampler s(Box::cube(1, 10.0), 5);
  const EnvironmentDraw a = s.draw(3), b = s.draw(3);
  CHECK(a.log_weight == 0.0);
  CHECK(a.config.coords == b.config.coords);
}

// With no points only the normalizer survives: log dq/dP = Lambda_box(mu).
TEST_CASE("mixture density of the empty configuration") {
  const Model model({1, 2.0, 4.0});
  const Box box = Box::cube(1, 15.0);
  const DiscreteMeasure mu0 = gauss_hermite_nu(model, model.scale(), Point{0.0});
  const Point c{1.25};
  const TiltedMixtureSampler s(model, mu0, CenterLaw::single(c), box, 1);
  PointConfig empty;
  empty.box = box;
  CHECK(s.log_dq_dP(empty) == doctest::Approx(exact_log_laplace_in_box(mu0.translated(c), model, box)).epsilon(1e-8));
}

// dP/dq has unit mean under q, and reweighting recovers Poisson expectations (mild tilt,
// so the weights have a usable second moment).
TEST_CASE("tilted mixture weights are unbiased") {
  const Model model({1, 2.0, 0.3});
  const Box box = Box::cube(1, 8.0);
  const auto sampler = make_annealed_proposal(model, box, 11);
  const std::size_t n = 4000;
  std::vector<double> w(n), wn(n);
  for (std::size_t i = 0; i < n; ++i) {
    const EnvironmentDraw e = sampler->draw(i);
    w[i] = std::exp(e.log_weight);
    wn[i] = w[i] * static_cast<double>(e.config.size());
  }
  const double m = mean(w), se = std::sqrt(variance(w) / n);
  CHECK(std::abs(m - 1) < 3 * se + 1e-3);
  const double mn = mean(wn), sen = std::sqrt(variance(wn) / n);
  CHECK(std::abs(mn - box.volume()) < 3 * sen + 1e-3 * box.volume());
  CHECK(log_mean_exp(std::vector<double>(n, 0.0)).ess == doctest::Approx(double(n)));
}

TEST_CASE("log_sum_exp is stable") {
  CHECK(log_sum_exp({1000.0, 1000.0}) == doctest::Approx(1000 + std::log(2.0)));
  CHECK(log_sum_exp({-INFINITY, 0.0}) == doctest::Approx(0.0));
}

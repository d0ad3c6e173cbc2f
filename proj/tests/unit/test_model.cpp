#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fklab/model.hpp"

using namespace fklab;

TEST_CASE("constants for d = 1, alpha = 2 match frozen oracle values") {
  const ConstantsBundle c = compute_constants(1, 2.0);
  CHECK(c.a1 == doctest::Approx(3.5449077018).epsilon(1e-10));
  CHECK(c.C == doctest::Approx(2.6586807764).epsilon(1e-10));
  CHECK(c.a2 == doctest::Approx(1.1529702460).epsilon(1e-10));
  CHECK(c.l1 == doctest::Approx(std::numbers::pi).epsilon(1e-10));
  CHECK(c.l2 == doctest::Approx(1.5349900619).epsilon(1e-10));
  CHECK(c.omega_d == doctest::Approx(2.0));
  CHECK(c.sigma_d == doctest::Approx(2.0));
}

TEST_CASE("ball volume and sphere area") {
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
  CHECK(unit_sphere_area(2) == doctest::Approx(2 * std::numbers::pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4 * std::numbers::pi / 3));
}

TEST_CASE("regime validation names the constraint") {
  CHECK_THROWS_AS(ModelParams({1, 1.0, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams({1, 3.0, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams({1, 2.0, -1.0}).validate(), std::invalid_argument);
  CHECK_NOTHROW(ModelParams({2, 3.5, 0.0}).validate());
  try {
    ModelParams({1, 1.0, 1.0}).validate();
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("alpha") != std::string::npos);
  }
}

TEST_CASE("shape kernel agrees with the direct formula in every mode") {
  for (double a : {1.5, 2.0, 2.5, 3.0, 2.3}) {
    const ShapeKernel k(a);
    for (double r : {0.0, 0.5, 1.0, 1.7, 10.0, 123.4}) {
      const double expect = r <= 1 ? 1.0 : std::pow(r, -a);
      CHECK(k(r * r) == doctest::Approx(expect).epsilon(1e-13));
    }
  }
}

TEST_CASE("scales and profile") {
  const Model m({1, 2.0, 16.0});
  CHECK(m.scale() == doctest::Approx(std::pow(16.0, 0.375)));
  CHECK(m.h_t() == doctest::Approx(m.constants().a1 * 0.5 * std::pow(16.0, -0.5)));
  const double x = 2.0;
  CHECK(m.quadratic_profile(std::span<const double>(&x, 1)) ==
        doctest::Approx(m.constants().C * std::pow(16.0, -1.5) * 4));
  CHECK(m.ou_rate() == doctest::Approx(std::sqrt(2 * m.constants().C)));
  CHECK(m.nu0_second_moment() == doctest::Approx(1 / std::sqrt(8 * m.constants().C)));
  const Model m2({2, 3.0, 1.0});
  CHECK(m2.nu0_second_moment() == doctest::Approx(2 / std::sqrt(8 * m2.constants().C)));
}

TEST_CASE("nu density is the squared ground state and integrates to one") {
  const Model m({1, 2.0, 1.0});
  const double c = 0;
  double s = 0;
  const double h = 1e-3;
  for (double x = -8; x <= 8; x += h) {
    const double phi = m.groundstate_phi1(std::span<const double>(&x, 1));
    CHECK(m.nu_density(std::span<const double>(&x, 1), std::span<const double>(&c, 1)) ==
          doctest::Approx(phi * phi).epsilon(1e-12));
    s += phi * phi * h;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
}

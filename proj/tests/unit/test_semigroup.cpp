#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fklab/annealed.hpp"
#include "fklab/rng.hpp"
#include "fklab/semigroup.hpp"
#include "fklab/stats.hpp"

using namespace fklab;

namespace {

// Survival of BM started at the centre of (-L, L), eigen series.
double free_survival(double L, double t) {
  double s = 0;
  for (int k = 0; k < 200; ++k) {
    const double n = 2 * k + 1;
    s += (k % 2 ? -1.0 : 1.0) / n * std::exp(-n * n * std::numbers::pi * std::numbers::pi * t / (8 * L * L));
  }
  return 4 / std::numbers::pi * s;
}

EvolutionSpec make_spec(Engine e, HeatMethod h, double dt = 1e-3) {
  EvolutionSpec s;
  s.engine = e;
  s.heat = h;
  s.dt = dt;
  return s;
}

}  // namespace

TEST_CASE("free killed evolution matches the survival series") {
  const Grid g(Box::cube(1, 1.0), 0.005);
  const GridField V = GridField::zeros(g);
  const GridField start = GridField::delta(g, Point{0.0});
  const double exact = free_survival(1.0, 0.5);
  for (HeatMethod h : {HeatMethod::spectral, HeatMethod::tridiagonal}) {
    const GridField u = fk_evolve(V, make_spec(Engine::splitting, h), 0.5, start);
    CHECK(u.integral() == doctest::Approx(exact).epsilon(1e-3));
  }
  const SpectralPropagator prop(assemble(V));
  CHECK(std::exp(prop.log_mass(g.nearest_node(Point{0.0}), 0.5)) == doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("step count requires dt to divide t") {
  EvolutionSpec s;
  s.dt = 0.3;
  CHECK_THROWS(step_count(s, 1.0));
  s.dt = 0.25;
  CHECK(step_count(s, 1.0) == 4);
}

TEST_CASE("scaled evolution agrees with plain evolution") {
  const Grid g(Box::cube(1, 3.0), 0.01);
  const GridField V = GridField::from_function(g, [](std::span<const double> x) { return 2 + x[0] * x[0]; });
  const GridField start = GridField::delta(g, Point{0.0});
  const EvolutionSpec spec = make_spec(Engine::splitting, HeatMethod::spectral);
  const GridField u = fk_evolve(V, spec, 2.0, start);
  const ScaledField w = fk_evolve_scaled(V, spec, 2.0, start);
  CHECK(w.log_scale + std::log(w.field.integral()) == doctest::Approx(std::log(u.integral())).epsilon(1e-10));
}

TEST_CASE("occupation functional identities") {
  const Grid g(Box::cube(1, 3.0), 0.01);
  const GridField V = GridField::from_function(g, [](std::span<const double> x) { return x[0] * x[0]; });
  const GridField one = GridField::from_function(g, [](std::span<const double>) { return 1.0; });
  const GridField odd = GridField::from_function(g, [](std::span<const double> x) { return x[0]; });
  const double t = 2.0;
  for (Engine e : {Engine::splitting, Engine::eigen}) {
    const EvolutionSpec spec = make_spec(e, HeatMethod::spectral);
    const OccupationMoments o = occupation_moments(V, spec, t, {one, odd});
    CHECK(o.means[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(o.means[1]) < 1e-8);
    const double mass = std::exp(o.log_mass);
    CHECK(occupation_functional(one, V, spec, t) == doctest::Approx(t * mass).epsilon(1e-6));
  }
}

TEST_CASE("truncated and full propagators agree on masses") {
  const Grid g(Box::cube(1, 6.0), 0.02);
  const GridField V = GridField::from_function(g, [](std::span<const double> x) {
    return std::pow(x[0] - 1, 2) + 0.5 * std::cos(3 * x[0]);
  });
  const SchrodingerOperator op = assemble(V);
  const std::size_t node = g.nearest_node(Point{0.0});
  const SpectralPropagator full(op), cut(op, 10.0);
  CHECK(cut.log_mass(node, 10.0) == doctest::Approx(full.log_mass(node, 10.0)).epsilon(1e-9));
}

TEST_CASE("ground-state transform check on the harmonic well") {
  const double C = compute_constants(1, 2.0).C;
  const GroundstateReport r = groundstate_transform_check(C, 1.0, make_spec(Engine::splitting, HeatMethod::spectral, 1e-4));
  CHECK(r.sup_rel_error < 1e-3);
  CHECK(r.mass_rel_error < 1e-3);
  CHECK(r.cdf_distance < 1e-3);
  CHECK(r.lambda1 == doctest::Approx(std::sqrt(C / 2)));
}

// Independent oracle: Euler paths of BM in the same frozen environment, trapezoidal
// time integral of V, killing on leaving the box.
TEST_CASE("quenched partition agrees with a path Monte Carlo") {
  const Model model({1, 2.0, 2.0});
  const FarFieldPolicy far{-1.0, true};
  AnnealedOptions ao;
  const Grid grid = evolution_grid(model);
  const Box sbox = sampling_box(model, grid.box(), ao);
  const PointConfig cfg = sample_homogeneous(sbox, 1.0, 77, 0);

  const double Z = quenched_partition(cfg, make_spec(Engine::eigen, HeatMethod::spectral), model, {}, far);
  const double Zs = quenched_partition(cfg, make_spec(Engine::splitting, HeatMethod::spectral), model, {}, far);
  CHECK(Zs == doctest::Approx(Z).epsilon(1e-3));

  const PotentialView view(cfg, grid.box(), model, far);
  const Grid fine = Grid::fitted(grid.box(), 0.002);
  const GridField Vf = potential_on_grid(view, fine);
  const double lo = fine.box().lower(0), hf = fine.spacing(), R = grid.box().half_widths[0];
  auto V = [&](double x) {
    const double u = (x - lo) / hf - 1;
    const auto i = static_cast<std::size_t>(std::clamp(u, 0.0, double(Vf.values.size() - 2)));
    const double f = u - double(i);
    return (1 - f) * Vf.values[i] + f * Vf.values[i + 1];
  };

  const int paths = 20000;
  const double dt = 2e-3, t = model.t();
  const int steps = static_cast<int>(std::lround(t / dt));
  std::vector<double> w(paths, 0.0);
  for (int p = 0; p < paths; ++p) {
    Philox rng(991, p);
    double x = 0, I = 0, vprev = V(0.0);
    bool alive = true;
    for (int k = 0; k < steps && alive; ++k) {
      x += std::sqrt(dt) * normal_draw(rng);
      if (std::abs(x) >= R) {
        alive = false;
        break;
      }
      const double v = V(x);
      I += 0.5 * dt * (vprev + v);
      vprev = v;
    }
    w[p] = alive ? std::exp(-I) : 0.0;
  }
  const double m = mean(w), se = std::sqrt(variance(w) / paths);
  CHECK(std::abs(m - Z) < 3 * se + 5e-3 * Z);
}

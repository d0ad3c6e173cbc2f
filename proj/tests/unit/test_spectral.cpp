#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fklab/model.hpp"
#include "fklab/point_process.hpp"
#include "fklab/spectral.hpp"

using namespace fklab;

namespace {

GridField harmonic(const Grid& g, double c) {
  return GridField::from_function(g, [&](std::span<const double> x) {
    double r2 = 0;
    for (double v : x) r2 += v * v;
    return c * r2;
  });
}

GridField random_field(const Grid& g, std::uint64_t seed) {
  const Model m({1, 2.0, 1.0});
  const PointConfig c = sample_homogeneous(Box::cube(1, g.box().half_widths[0] + 5), 0.5, seed, 0);
  return GridField::from_function(g, [&](std::span<const double> x) {
    double s = 0;
    for (double y : c.coords) s += m.kernel()((x[0] - y) * (x[0] - y));
    return s;
  });
}

}  // namespace

TEST_CASE("harmonic oscillator ground state and gap") {
  const double C = compute_constants(1, 2.0).C;
  const Grid g = Grid::fitted(Box::cube(1, 5.0), 0.01);
  const EigenResult e = smallest_eigs(assemble(harmonic(g, C)), 2);
  CHECK(e.lambda1 == doctest::Approx(std::sqrt(C / 2)).epsilon(1e-4));
  CHECK(e.lambda2 - e.lambda1 == doctest::Approx(std::sqrt(2 * C)).epsilon(1e-4));
  CHECK(e.residual1 < 1e-8);
  for (double v : e.phi1.values) CHECK(v >= 0);
}

TEST_CASE("second-order convergence under h halving") {
  const double C = 1.0;
  std::vector<double> err;
  for (double h : {0.1, 0.05, 0.025}) {
    const Grid g = Grid::fitted(Box::cube(1, 8.0), h);
    err.push_back(std::abs(smallest_eigs(assemble(harmonic(g, C)), 1).lambda1 - std::sqrt(C / 2)));
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.1));
  CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("potential and domain monotonicity") {
  const Grid g = Grid::fitted(Box::cube(1, 10.0), 0.05);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const GridField V = random_field(g, s);
    GridField W = V;
    for (double& v : W.values) v += 0.3 * std::abs(std::sin(v));
    const SchrodingerOperator op = assemble(V);
    const double l = smallest_eigs(op, 1).lambda1;
    CHECK(l <= smallest_eigs(assemble(W), 1).lambda1);
    CHECK(l <= smallest_eigs(op.restricted(0.0, 5.0), 1).lambda1);
  }
}

TEST_CASE("eigenvalue counts agree with the full tridiagonal spectrum") {
  const Grid g = Grid::fitted(Box::cube(1, 10.0), 0.1);
  const SchrodingerOperator op = assemble(random_field(g, 9));
  const Eigensystem es = tridiagonal_eigensystem(op);
  CHECK(es.count() == op.size());
  for (double lam : {0.5, 1.0, 3.0, 20.0}) {
    std::size_t k = 0;
    for (double v : es.values) k += v < lam;
    CHECK(count_eigenvalues_below(op, lam) == k);
  }
  const Eigensystem low = tridiagonal_eigensystem_below(op, 1.0);
  CHECK(low.values.back() <= 1.0);
  CHECK(low.values.front() == doctest::Approx(smallest_eigs(op, 1).lambda1).epsilon(1e-9));
  // free Dirichlet spectrum on (-pi/2, pi/2): k^2 / 2
  const Grid g0(Box::cube(1, std::numbers::pi / 2), std::numbers::pi / 2000);
  const SchrodingerOperator free0 = assemble(GridField::zeros(g0));
  CHECK(count_eigenvalues_below(free0, 4.6) == 3);
  CHECK(rayleigh_quotient(free0, smallest_eigs(free0, 1).phi1) == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("two-dimensional counts by LDL^T inertia") {
  const Grid g = Grid::fitted(Box::cube(2, 2.0), 0.1);
  const SchrodingerOperator op = assemble(harmonic(g, 2.0));
  const EigenResult e = smallest_eigs(op, 2);
  CHECK(count_eigenvalues_below(op, 0.5 * (e.lambda1 + e.lambda2)) == 1);
  CHECK(count_eigenvalues_below(op, e.lambda1 - 1e-6) == 0);
  // lambda2 is doubly degenerate for the isotropic oscillator
  CHECK(count_eigenvalues_below(op, e.lambda2 + 0.5 * (e.lambda2 - e.lambda1)) == 3);
}

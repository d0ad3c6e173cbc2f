#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fklab/grid.hpp"
#include "fklab/model.hpp"
#include "fklab/point_process.hpp"
#include "fklab/potential.hpp"
#include "fklab/quadrature.hpp"
#include "fklab/spectral.hpp"

namespace fklab {

enum class Splitting { first, strang };
enum class HeatMethod { spectral, tridiagonal };
// splitting: time stepping with a heat step; eigen: exact semidiscrete semigroup via a
// Dirichlet eigen-expansion of the grid operator (d = 1)
enum class Engine { splitting, eigen };

struct EvolutionSpec {
  double dt = 1e-3;
  Splitting splitting = Splitting::strang;
  HeatMethod heat = HeatMethod::spectral;
  Engine engine = Engine::splitting;
};

class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Number of steps for horizon t; throws unless dt divides t.
long step_count(const EvolutionSpec& spec, double t);

// Killed Feynman-Kac evolution u_t = exp(-t(-Delta/2 + V)) initial on the grid.
GridField fk_evolve(const GridField& V, const EvolutionSpec& spec, double t, const GridField& initial);

// Same, tracking an overall log scale so that tiny masses do not underflow.
struct ScaledField {
  GridField field;
  double log_scale = 0;  // true field = exp(log_scale) * field
};
ScaledField fk_evolve_scaled(const GridField& V, const EvolutionSpec& spec, double t, const GridField& initial);

// Exact semidiscrete semigroup of a d = 1 operator through its eigen-expansion.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const SchrodingerOperator& op);
  // Keeps only modes with horizon (lambda - lambda1) <= cutoff. The default cutoff suffices for
  // masses at times >= horizon; occupation integrals need a larger one (error ~ 1/cutoff).
  SpectralPropagator(const SchrodingerOperator& op, double horizon, double cutoff = 45.0);

  double lambda1() const { return es_.values.front(); }
  const Eigensystem& eigensystem() const { return es_; }
  // log <exp(-tA) delta_node, 1>
  double log_mass(std::size_t node, double t) const;
  // <1, int_0^t exp(-(t-s)A) f exp(-sA) delta_node ds> divided by the mass
  double occupation_ratio(std::size_t node, std::span<const double> f, double t) const;
  GridField evolve(const GridField& initial, double t) const;

 private:
  SchrodingerOperator op_;
  Eigensystem es_;
  std::vector<double> ones_;  // <phi_k, 1>
};

struct GridOptions {
  double h = 0;           // 0: r(t)/50
  double box_radius = 0;  // 0: 4 r(t) log t (at least 4 r(t))
};

Grid evolution_grid(const Model& model, const GridOptions& opts = {});
GridField potential_on_grid(const PotentialView& view, const Grid& grid);

double quenched_partition(const PointConfig& config, const EvolutionSpec& spec, const Model& model,
                          const GridOptions& grid = {}, FarFieldPolicy far = {});
double quenched_log_partition(const PointConfig& config, const EvolutionSpec& spec, const Model& model,
                              const GridOptions& grid = {}, FarFieldPolicy far = {});

// E_0[exp(-int V) int_0^t f(X_s) ds ; stay] by Duhamel co-evolution.
double occupation_functional(const GridField& f, const GridField& V, const EvolutionSpec& spec, double t);
// (1/t) E_0[exp(-int V) int_0^t f(X_s) ds] / mass for several f, with the log mass.
// The eigen engine widens the mode cutoff until every mean lies within the range of its f.
struct OccupationMoments {
  double log_mass = 0;
  std::vector<double> means;
};
OccupationMoments occupation_moments(const GridField& V, const EvolutionSpec& spec, double t,
                                     const std::vector<GridField>& fs);
double occupation_functional(const GridField& f, const PointConfig& config, const EvolutionSpec& spec,
                             const Model& model, const GridOptions& grid = {}, FarFieldPolicy far = {});

struct GroundstateReport {
  double sup_rel_error = 0;   // sup |u - u_exact| / sup |u_exact|
  double mass_numeric = 0;
  double mass_identity = 0;   // exp(-lambda1 T) psi(0) E^OU[1/psi(X_T)] by quadrature
  double mass_rel_error = 0;
  double cdf_distance = 0;    // sup distance of normalized kernel CDFs
  double lambda1 = 0;
};

// Quadratic potential c x^2 on (-L, L), d = 1.
GroundstateReport groundstate_transform_check(double c, double T, const EvolutionSpec& spec, double h = 0.005,
                                              double half_width = 6.0);

}  // namespace fklab

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fklab/environment.hpp"
#include "fklab/semigroup.hpp"
#include "fklab/stats.hpp"

namespace fklab {

struct AnnealedOptions {
  GridOptions grid;
  FarFieldPolicy far{-1.0, true};
  bool importance = true;      // tilted-mixture proposal; false: plain Poisson sampling
  double sampling_margin = 0;  // distance from the evolution box to the sampling box; 0: from the far-field tolerance
  int threads = 1;
  QuadratureSpec quad;
};

// Smallest margin at which the omitted far field is within half the policy tolerance.
double far_field_margin(const Model& model, const FarFieldPolicy& far);
Box sampling_box(const Model& model, const Box& window, const AnnealedOptions& opts);
std::unique_ptr<EnvironmentSampler> annealed_sampler(const Model& model, const Box& sampling, std::uint64_t seed,
                                                     const AnnealedOptions& opts);

struct AnnealedEstimate {
  double log_value = 0;
  double se_log = 0;
  double value = 0;
  double lo = 0, hi = 0;  // 95% interval for the value
  double ess = 0;
  std::size_t n = 0;
};
AnnealedEstimate to_estimate(const LogMeanEstimate& e);

// Annealed partition function E[Z_t^omega] with jackknife interval.
AnnealedEstimate annealed_partition(const Model& model, const EvolutionSpec& spec, std::size_t n_samples,
                                    std::uint64_t seed, const AnnealedOptions& opts = {});

// Log masses of the killed semigroup from 0 on the whole grid (returned first) and with an
// extra Dirichlet condition outside (-L, L) for every L (d = 1).
std::vector<double> confinement_log_masses(const GridField& V, const EvolutionSpec& spec, double t,
                                           std::span<const double> radii);

struct ConfinementEstimate {
  double L = 0;
  double value = 0, se = 0, lo = 0, hi = 0;
};
ConfinementEstimate confinement_prob(const Model& model, const EvolutionSpec& spec, double L, std::size_t n_samples,
                                     std::uint64_t seed, const AnnealedOptions& opts = {});

struct ConfinementCurve {
  std::vector<double> radii;
  std::vector<ConfinementEstimate> prob;
  AnnealedEstimate partition;
  double median_radius = 0;  // NaN if 1/2 is not bracketed
};
ConfinementCurve confinement_curve(const Model& model, const EvolutionSpec& spec, std::span<const double> radii,
                                   std::size_t n_samples, std::uint64_t seed, const AnnealedOptions& opts = {});

// Radius at which a nondecreasing curve crosses 1/2 (interpolated in log L).
double crossing_radius(std::span<const double> radii, std::span<const double> values, double level = 0.5);

}  // namespace fklab

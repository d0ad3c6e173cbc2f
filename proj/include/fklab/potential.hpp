#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "fklab/geometry.hpp"
#include "fklab/model.hpp"
#include "fklab/point_process.hpp"

namespace fklab {

struct FarFieldPolicy {
  // Bound on the omitted tail; negative selects the default 1e-3 * h_t.
  double tolerance = -1;
  // Add the x-dependent mean of the omitted tail to every evaluation. The
  // tolerance then applies to the standard deviation of the omitted part.
  bool mean_shift = false;
};

class PotentialView {
 public:
  PotentialView(PointConfig config, Box window, const Model& model, FarFieldPolicy policy = {});

  const PointConfig& config() const { return *config_; }
  const Box& window() const { return window_; }
  const Model& model() const { return model_; }
  double far_field_bound() const { return far_bound_; }
  bool mean_shift() const { return policy_.mean_shift; }

  // Sum over in-box points (plus the tail mean when enabled); x must lie in the window.
  double operator()(std::span<const double> x) const;
  // Batched evaluation of flat row-major points (all must lie in the window).
  void evaluate_many(std::span<const double> pts, std::span<double> out) const;
  // Mean of the omitted contribution from points outside the config box.
  double tail_mean(std::span<const double> x) const;

 private:
  std::shared_ptr<const PointConfig> config_;
  Box window_;
  Model model_;
  FarFieldPolicy policy_;
  double far_bound_ = 0;
};

double evaluate_V(const PotentialView& view, std::span<const double> x);

struct MinimizerResult {
  Point m;
  double value = 0;
  double grid_step = 0;
};

MinimizerResult find_local_min(const PotentialView& view, double coarse_step, double refine_tol);

using ScalarField = std::function<double(std::span<const double>)>;

// Grid sup over B(m, radius) of |V(x) - V(m) - p_t(x - m)|; the ball must lie in `window`.
double profile_deviation(const ScalarField& V, const Box& window, std::span<const double> m, double radius,
                         const Model& model, int nodes_per_radius = 200);
double profile_deviation(const PotentialView& view, std::span<const double> m, double radius, const Model& model,
                         int nodes_per_radius = 200);

void write_field_csv(std::ostream& os, int dim, std::span<const double> coords, std::span<const double> values);

}  // namespace fklab

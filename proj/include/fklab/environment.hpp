#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "fklab/geometry.hpp"
#include "fklab/model.hpp"
#include "fklab/point_process.hpp"
#include "fklab/quadrature.hpp"

namespace fklab {

// One sampled environment inside the sampling box together with log(dP/dq),
// the log density of the Poisson law with respect to the proposal.
struct EnvironmentDraw {
  PointConfig config;
  double log_weight = 0;
  Point center;  // tilt center (empty for plain draws)
};

class EnvironmentSampler {
 public:
  virtual ~EnvironmentSampler() = default;
  virtual EnvironmentDraw draw(std::uint64_t replica) const = 0;
  virtual const Box& box() const = 0;
};

class HomogeneousSampler final : public EnvironmentSampler {
 public:
  HomogeneousSampler(Box box, std::uint64_t seed) : box_(std::move(box)), seed_(seed) {}
  EnvironmentDraw draw(std::uint64_t replica) const override;
  const Box& box() const override { return box_; }

 private:
  Box box_;
  std::uint64_t seed_;
};

// Discrete law of tilt centers.
struct CenterLaw {
  int dim = 1;
  std::vector<double> centers;  // flat
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  static CenterLaw single(Point c);
  // tensor grid with the given spacing over +-half_range per axis, Gaussian weights
  static CenterLaw gaussian(int d, double sd, double spacing, double half_range);
  // cell-centred grid over a box, equal weights
  static CenterLaw uniform(const Box& region, double spacing);
};

// Proposal q = sum_j p_j P_t^{mu_j} on the box, mu_j = mu0 translated by center j.
// dq/dP = sum_j p_j exp(Lambda_box(mu_j) - t <mu_j, V_box>) is evaluated exactly.
class TiltedMixtureSampler final : public EnvironmentSampler {
 public:
  TiltedMixtureSampler(const Model& model, DiscreteMeasure mu0, CenterLaw law, Box box, std::uint64_t seed,
                       const QuadratureSpec& quad = {});
  EnvironmentDraw draw(std::uint64_t replica) const override;
  const Box& box() const override { return box_; }
  double log_dq_dP(const PointConfig& cfg) const;

 private:
  Model model_;
  DiscreteMeasure mu0_;
  CenterLaw law_;
  Box box_;
  std::uint64_t seed_;
  std::vector<double> log_norm_;  // log p_j + Lambda_box(mu_j)
  std::vector<double> cumulative_;
};

// Standard proposal for annealed path quantities at horizon t: 32-atom Gauss-Hermite nu_0
// scaled by r(t); centers Gaussian with 1.5x the predicted spread of the localization center.
std::unique_ptr<EnvironmentSampler> make_annealed_proposal(const Model& model, const Box& box, std::uint64_t seed,
                                                           const QuadratureSpec& quad = {});

double log_sum_exp(const std::vector<double>& v);

}  // namespace fklab

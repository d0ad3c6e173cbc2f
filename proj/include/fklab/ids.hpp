#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fklab/model.hpp"
#include "fklab/potential.hpp"
#include "fklab/quadrature.hpp"

namespace fklab {

struct IdsOptions {
  bool importance = true;  // tilted-mixture proposal at the horizon dual to lambda; false: plain Poisson
  double h = 0;            // grid spacing; 0: min(0.1, r(t*)/20)
  double far_tolerance = 0;  // 0: 1e-2 lambda (mean-shifted far field)
  int threads = 1;
  QuadratureSpec quad;
};

struct IdsPoint {
  double lambda = 0;
  double N = 0;           // eigenvalues <= lambda per unit volume
  double lo = 0, hi = 0;  // 95% interval
  double log_N = 0, se_log = 0;
  double tilt_time = 0;   // horizon t*(lambda) of the proposal (importance mode)
  double ess = 0;
  std::size_t n = 0;
  std::size_t hits = 0;   // samples with at least one eigenvalue <= lambda
};

struct IdsCurve {
  double box_size = 0;
  std::vector<IdsPoint> points;
};

// Horizon at which the typical bottom of the spectrum sits at lambda:
// lambda = h_t + a2 (a+d-2)/(2a) t^{-(a-d+2)/(2a)}.
double lifshitz_tilt_time(double lambda, int d, double alpha);
// l1 lambda^{-d/(a-d)} + l2 lambda^{-(a+d-2)/(2(a-d))}
double lifshitz_minus_log(double lambda, int d, double alpha);

// Dirichlet eigenvalue counts on the cube of side box_size, averaged over environments.
IdsCurve ids_estimate(std::span<const double> lambdas, int d, double alpha, double box_size, std::size_t n_samples,
                      std::uint64_t seed, const IdsOptions& opts = {});

}  // namespace fklab

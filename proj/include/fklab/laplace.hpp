#pragma once

#include <optional>
#include <span>

#include "fklab/geometry.hpp"
#include "fklab/model.hpp"
#include "fklab/quadrature.hpp"

namespace fklab {

// log E[exp(-s V(0))] (a nonpositive number), by radial quadrature.
double exact_mgf_V0(double s, const Model& model, const QuadratureSpec& quad = {});

// -log E[exp(-t <mu, V>)] = integral of (1 - exp(-t F_mu(y))) over R^d, F_mu = sum w_i vhat(x_i - .)
double exact_log_laplace(const DiscreteMeasure& mu, const Model& model, const QuadratureSpec& quad = {});

// Same integral restricted to a box (used for tilted-proposal densities).
double exact_log_laplace_in_box(const DiscreteMeasure& mu, const Model& model, const Box& box,
                                const QuadratureSpec& quad = {});

// Two-term asymptotic for log E[exp(-t <mu,V>)]: -a1 t^{d/a} - C t^{(d-2)/a} M2(mu).
// Requires supp(mu) inside B(0, t^{1/alpha - eps}).
double predicted_log_laplace(const DiscreteMeasure& mu, const Model& model, double eps = 0.05);

struct TwoPointCheck {
  bool holds = false;
  double margin = 0;  // log-margin: bound exponent minus exact exponent
};

TwoPointCheck two_point_bound_check(std::span<const double> x, std::span<const double> y, const Model& model,
                                    const QuadratureSpec& quad = {}, double eps = 0.05);

// k-th cumulant of V(x) under the tilted law: integral of vhat(x-y)^k exp(-t F_mu(y)) dy,
// over R^d or over `domain` when given.
double tilted_cumulant(int k, const DiscreteMeasure& mu, std::span<const double> at, const Model& model,
                       const QuadratureSpec& quad = {}, const std::optional<Box>& domain = std::nullopt);

double tilted_mean_V(const DiscreteMeasure& mu, std::span<const double> at, const Model& model,
                     const QuadratureSpec& quad = {}, const std::optional<Box>& domain = std::nullopt);

struct TiltedVariance {
  double variance = 0;
  double scaled = 0;  // t^{(2 alpha - d)/alpha} * variance
};

TiltedVariance tilted_variance_V(const DiscreteMeasure& mu, std::span<const double> at, const Model& model,
                                 const QuadratureSpec& quad = {}, const std::optional<Box>& domain = std::nullopt);

}  // namespace fklab

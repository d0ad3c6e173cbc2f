#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace fklab {

using Point = std::vector<double>;

struct ModelParams {
  int d = 1;
  double alpha = 2.0;
  double t = 1.0;

  // throws std::invalid_argument naming the violated constraint
  void validate() const;
};

struct ConstantsBundle {
  double a1 = 0;
  double a2 = 0;
  double C = 0;
  double sigma_d = 0;  // surface area of the unit sphere
  double omega_d = 0;  // volume of the unit ball
  double l1 = 0;
  double l2 = 0;
};

// Constants depend on (d, alpha) only.
ConstantsBundle compute_constants(int d, double alpha);

double unit_sphere_area(int d);
double unit_ball_volume(int d);

// min(|x|^{-alpha}, 1) evaluated from the squared norm.
class ShapeKernel {
 public:
  explicit ShapeKernel(double alpha);
  double alpha() const { return alpha_; }

  double operator()(double r2) const {
    if (r2 <= 1.0) return 1.0;
    switch (mode_) {
      case Mode::two:
        return 1.0 / r2;
      case Mode::half_integer: {
        double r = std::sqrt(r2);
        double v = 1.0 / std::sqrt(r);
        for (int i = 0; i < whole_; ++i) v /= r;
        return v;
      }
      case Mode::integer: {
        double r = std::sqrt(r2);
        double v = 1.0;
        for (int i = 0; i < whole_; ++i) v /= r;
        return v;
      }
      default:
        return std::pow(r2, -0.5 * alpha_);
    }
  }

 private:
  enum class Mode { two, half_integer, integer, general };
  double alpha_;
  Mode mode_ = Mode::general;
  int whole_ = 0;
};

double shape_vhat(std::span<const double> x, double alpha);

// Immutable model instance: parameters plus cached constants.
class Model {
 public:
  explicit Model(ModelParams p);

  const ModelParams& params() const { return p_; }
  const ConstantsBundle& constants() const { return c_; }
  int dim() const { return p_.d; }
  double alpha() const { return p_.alpha; }
  double t() const { return p_.t; }
  Model with_time(double t) const;

  double shape(std::span<const double> x) const;
  const ShapeKernel& kernel() const { return kernel_; }

  double h_t() const;
  double scale() const;            // r(t) = t^{(alpha-d+2)/(4 alpha)}
  double profile_coefficient() const;  // C t^{-(alpha-d+2)/alpha}
  double quadratic_profile(std::span<const double> x) const;

  // Unit-scale Gaussian ground state and its squared density nu_m.
  double groundstate_phi1(std::span<const double> x) const;
  double nu_density(std::span<const double> x, std::span<const double> m) const;
  double ou_rate() const;                  // sqrt(2C)
  double nu0_coordinate_variance() const;  // 1/(2 sqrt(2C))
  double nu0_second_moment() const;        // d/(2 sqrt(2C)) = d (8C)^{-1/2}

 private:
  ModelParams p_;
  ConstantsBundle c_;
  ShapeKernel kernel_;
};

}  // namespace fklab

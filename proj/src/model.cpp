#include "fklab/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fklab {

void ModelParams::validate() const {
  if (d < 1) throw std::invalid_argument("ModelParams: d >= 1 required, got d=" + std::to_string(d));
  if (!std::isfinite(alpha) || !(alpha > d) || !(alpha < d + 2))
    throw std::invalid_argument("ModelParams: regime d < alpha < d+2 violated (d=" + std::to_string(d) +
                                ", alpha=" + std::to_string(alpha) + ")");
  if (!std::isfinite(t) || t < 0) throw std::invalid_argument("ModelParams: t >= 0 required");
}

double unit_sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double unit_ball_volume(int d) { return unit_sphere_area(d) / d; }

ConstantsBundle compute_constants(int d, double alpha) {
  ModelParams{d, alpha, 1.0}.validate();
  ConstantsBundle c;
  c.sigma_d = unit_sphere_area(d);
  c.omega_d = c.sigma_d / d;
  c.a1 = c.omega_d * std::tgamma((alpha - d) / alpha);
  c.C = alpha * c.sigma_d / (2.0 * d) * std::tgamma((2 * alpha - d + 2) / alpha);
  c.a2 = d * std::sqrt(c.C / 2.0);
  const double g = alpha - d;
  c.l1 = (g / alpha) * std::pow(d / alpha, d / g) * std::pow(c.a1, alpha / g);
  c.l2 = c.a2 * std::pow(d * c.a1 / alpha, (alpha + d - 2) / (2 * g));
  return c;
}

ShapeKernel::ShapeKernel(double alpha) : alpha_(alpha) {
  const double twice = 2 * alpha;
  if (alpha == 2.0) {
    mode_ = Mode::two;
  } else if (alpha > 0 && twice == std::floor(twice) && twice < 64) {
    const int k = static_cast<int>(twice);
    whole_ = k / 2;
    mode_ = (k % 2 == 0) ? Mode::integer : Mode::half_integer;
  }
}

double shape_vhat(std::span<const double> x, double alpha) {
  double r2 = 0;
  for (double xi : x) r2 += xi * xi;
  return ShapeKernel(alpha)(r2);
}

Model::Model(ModelParams p) : p_(p), kernel_(p.alpha) {
  p_.validate();
  c_ = compute_constants(p_.d, p_.alpha);
}

Model Model::with_time(double t) const {
  ModelParams q = p_;
  q.t = t;
  return Model(q);
}

double Model::shape(std::span<const double> x) const {
  double r2 = 0;
  for (double xi : x) r2 += xi * xi;
  return kernel_(r2);
}

namespace {
void require_positive_time(double t) {
  if (!(t > 0)) throw std::invalid_argument("t > 0 required");
}
}  // namespace

double Model::h_t() const {
  require_positive_time(p_.t);
  return c_.a1 * (p_.d / p_.alpha) * std::pow(p_.t, -(p_.alpha - p_.d) / p_.alpha);
}

double Model::scale() const {
  require_positive_time(p_.t);
  return std::pow(p_.t, (p_.alpha - p_.d + 2) / (4 * p_.alpha));
}

double Model::profile_coefficient() const {
  require_positive_time(p_.t);
  return c_.C * std::pow(p_.t, -(p_.alpha - p_.d + 2) / p_.alpha);
}

double Model::quadratic_profile(std::span<const double> x) const {
  double r2 = 0;
  for (double xi : x) r2 += xi * xi;
  return r2 == 0 ? 0.0 : profile_coefficient() * r2;
}

double Model::ou_rate() const { return std::sqrt(2 * c_.C); }

double Model::groundstate_phi1(std::span<const double> x) const {
  double r2 = 0;
  for (double xi : x) r2 += xi * xi;
  const double th = ou_rate();
  return std::pow(th / std::numbers::pi, 0.25 * p_.d) * std::exp(-0.5 * th * r2);
}

double Model::nu_density(std::span<const double> x, std::span<const double> m) const {
  if (x.size() != m.size()) throw std::invalid_argument("nu_density: dimension mismatch");
  double r2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - m[i]) * (x[i] - m[i]);
  const double th = ou_rate();
  return std::pow(th / std::numbers::pi, 0.5 * p_.d) * std::exp(-th * r2);
}

double Model::nu0_coordinate_variance() const { return 0.5 / ou_rate(); }

double Model::nu0_second_moment() const { return p_.d * nu0_coordinate_variance(); }

}  // namespace fklab

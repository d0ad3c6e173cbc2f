#include "fklab/geometry.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fklab {

Box::Box(Point c, std::vector<double> hw) : center(std::move(c)), half_widths(std::move(hw)) {
  if (center.empty() || center.size() != half_widths.size())
    throw std::invalid_argument("Box: center and half_widths must have equal nonzero size");
  for (std::size_t i = 0; i < center.size(); ++i) {
    if (!std::isfinite(center[i]) || !std::isfinite(half_widths[i]) || !(half_widths[i] > 0))
      throw std::invalid_argument("Box: degenerate box (half widths must be positive and finite)");
  }
}

Box Box::cube(int d, double half_width) {
  return Box(Point(d, 0.0), std::vector<double>(d, half_width));
}

Box Box::cube(Point center, double half_width) {
  const std::size_t d = center.size();
  return Box(std::move(center), std::vector<double>(d, half_width));
}

double Box::volume() const {
  double v = 1;
  for (double h : half_widths) v *= 2 * h;
  return v;
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < center.size(); ++i)
    if (std::abs(x[i] - center[i]) > half_widths[i]) return false;
  return true;
}

bool Box::contains(const Box& inner) const {
  for (std::size_t i = 0; i < center.size(); ++i) {
    if (inner.lower(i) < lower(i) || inner.upper(i) > upper(i)) return false;
  }
  return true;
}

Box Box::translated(std::span<const double> shift) const {
  Point c = center;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += shift[i];
  return Box(std::move(c), half_widths);
}

double Box::inner_distance(std::span<const double> x) const {
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < center.size(); ++i)
    r = std::min(r, half_widths[i] - std::abs(x[i] - center[i]));
  return r;
}

DiscreteMeasure::DiscreteMeasure(int dim, std::vector<double> atoms, std::vector<double> weights)
    : dim_(dim), atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (dim_ < 1) throw std::invalid_argument("DiscreteMeasure: dim >= 1 required");
  if (weights_.empty() || atoms_.size() != weights_.size() * static_cast<std::size_t>(dim_))
    throw std::invalid_argument("DiscreteMeasure: atoms/weights size mismatch");
  double total = 0;
  for (double w : weights_) {
    if (!(w > 0) || !std::isfinite(w)) throw std::invalid_argument("DiscreteMeasure: weights must be positive");
    total += w;
  }
  for (double& w : weights_) w /= total;
  for (double a : atoms_)
    if (!std::isfinite(a)) throw std::invalid_argument("DiscreteMeasure: non-finite atom");
}

DiscreteMeasure DiscreteMeasure::dirac(Point x) {
  const int d = static_cast<int>(x.size());
  return DiscreteMeasure(d, std::move(x), {1.0});
}

Point DiscreteMeasure::barycenter() const {
  Point m(dim_, 0.0);
  for (std::size_t i = 0; i < size(); ++i)
    for (int k = 0; k < dim_; ++k) m[k] += weights_[i] * atoms_[i * dim_ + k];
  return m;
}

double DiscreteMeasure::centered_second_moment() const {
  if (size() == 1) return 0.0;
  const Point m = barycenter();
  double s = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    double r2 = 0;
    for (int k = 0; k < dim_; ++k) {
      const double z = atoms_[i * dim_ + k] - m[k];
      r2 += z * z;
    }
    s += weights_[i] * r2;
  }
  return s;
}

double DiscreteMeasure::radius_about(std::span<const double> c) const {
  double r2max = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    double r2 = 0;
    for (int k = 0; k < dim_; ++k) {
      const double z = atoms_[i * dim_ + k] - c[k];
      r2 += z * z;
    }
    r2max = std::max(r2max, r2);
  }
  return std::sqrt(r2max);
}

DiscreteMeasure DiscreteMeasure::translated(std::span<const double> shift) const {
  DiscreteMeasure out = *this;
  for (std::size_t i = 0; i < size(); ++i)
    for (int k = 0; k < dim_; ++k) out.atoms_[i * dim_ + k] += shift[k];
  return out;
}

void gauss_hermite_normal(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_normal: n >= 1 required");
  std::vector<double> diag(n, 0.0), off(std::max(n - 1, 1), 0.0), z(static_cast<std::size_t>(n) * n);
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(static_cast<double>(k));
  const lapack_int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', n, diag.data(), off.data(), z.data(), n);
  if (info != 0) throw std::runtime_error("gauss_hermite_normal: dstev failed");
  nodes.assign(diag.begin(), diag.end());
  weights.resize(n);
  // Newton polish of the nodes, then w_i = n! / (n^2 He_{n-1}(x_i)^2) in log form
  for (int i = 0; i < n; ++i) {
    double x = nodes[i];
    for (int it = 0; it < 3; ++it) {
      double h0 = 1.0, h1 = x;
      for (int k = 1; k < n; ++k) {
        const double h2 = x * h1 - k * h0;
        h0 = h1;
        h1 = h2;
      }
      if (n > 1) x -= h1 / (n * h0);
    }
    double h0 = 1.0, h1 = x;
    for (int k = 1; k < n - 1; ++k) {
      const double h2 = x * h1 - k * h0;
      h0 = h1;
      h1 = h2;
    }
    const double hm1 = n > 1 ? h1 : 1.0;
    nodes[i] = x;
    weights[i] = std::exp(std::lgamma(n + 1.0) - 2 * std::log(static_cast<double>(n)) - 2 * std::log(std::abs(hm1)));
  }
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (nodes[n - 1 - i] - nodes[i]);
    const double w = 0.5 * (weights[i] + weights[n - 1 - i]);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
}

DiscreteMeasure gauss_hermite_nu(const Model& model, double scale, Point center, int n_per_axis) {
  const int d = model.dim();
  if (static_cast<int>(center.size()) != d) throw std::invalid_argument("gauss_hermite_nu: center dimension");
  if (n_per_axis <= 0) n_per_axis = d == 1 ? 32 : static_cast<int>(std::ceil(std::pow(32.0, 1.0 / d) - 1e-9));
  std::vector<double> x, w;
  gauss_hermite_normal(n_per_axis, x, w);
  const double sd = std::sqrt(model.nu0_coordinate_variance()) * scale;
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= n_per_axis;
  std::vector<double> atoms(total * d), weights(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    double wt = 1;
    for (int k = d - 1; k >= 0; --k) {
      const std::size_t j = rem % n_per_axis;
      rem /= n_per_axis;
      atoms[idx * d + k] = center[k] + sd * x[j];
      wt *= w[j];
    }
    weights[idx] = wt;
  }
  return DiscreteMeasure(d, std::move(atoms), std::move(weights));
}

}  // namespace fklab

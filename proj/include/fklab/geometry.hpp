#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fklab/model.hpp"

namespace fklab {

struct Box {
  Point center;
  std::vector<double> half_widths;

  Box() = default;
  Box(Point c, std::vector<double> hw);
  static Box cube(int d, double half_width);
  static Box cube(Point center, double half_width);

  int dim() const { return static_cast<int>(center.size()); }
  double volume() const;
  double lower(int axis) const { return center[axis] - half_widths[axis]; }
  double upper(int axis) const { return center[axis] + half_widths[axis]; }
  bool contains(std::span<const double> x) const;
  bool contains(const Box& inner) const;
  Box translated(std::span<const double> shift) const;
  // Largest r with B(x, r) inside the box (negative if x is outside).
  double inner_distance(std::span<const double> x) const;
};

class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  // atoms: flat row-major (n x dim); weights renormalized to sum 1
  DiscreteMeasure(int dim, std::vector<double> atoms, std::vector<double> weights);
  static DiscreteMeasure dirac(Point x);

  int dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> atom(std::size_t i) const {
    return {atoms_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }

  Point barycenter() const;
  double centered_second_moment() const;
  double radius_about(std::span<const double> c) const;
  DiscreteMeasure translated(std::span<const double> shift) const;

 private:
  int dim_ = 0;
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

// Gauss-Hermite nodes/weights for the standard normal law (Golub-Welsch).
void gauss_hermite_normal(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Tensor Gauss-Hermite discretization of nu_0 scaled by `scale`, centered at `center`.
// n_per_axis defaults to 32 in d=1 and ceil(32^{1/d}) otherwise.
DiscreteMeasure gauss_hermite_nu(const Model& model, double scale, Point center, int n_per_axis = 0);

}  // namespace fklab

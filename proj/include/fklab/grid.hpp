#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fklab/geometry.hpp"

namespace fklab {

// Uniform Dirichlet grid. Only interior nodes are stored; boundary values are 0.
class Grid {
 public:
  Grid() = default;
  Grid(Box box, double h);
  // Cube-like box with the largest spacing <= h_max that divides every width.
  static Grid fitted(Box box, double h_max);

  int dim() const { return box_.dim(); }
  double spacing() const { return h_; }
  const Box& box() const { return box_; }
  std::size_t size() const { return size_; }
  std::size_t extent(int axis) const { return n_[axis]; }
  double coord(int axis, std::size_t i) const { return box_.lower(axis) + (static_cast<double>(i) + 1) * h_; }
  void node(std::size_t flat, double* out) const;
  std::vector<double> nodes() const;  // flat row-major coordinates
  double cell_volume() const;
  std::size_t nearest_node(std::span<const double> x) const;

 private:
  Box box_;
  double h_ = 0;
  std::array<std::size_t, 2> n_{1, 1};
  std::size_t size_ = 0;
};

struct GridField {
  Grid grid;
  std::vector<double> values;

  static GridField zeros(const Grid& g);
  static GridField from_function(const Grid& g, const std::function<double(std::span<const double>)>& f);
  // discrete delta of unit mass at the node nearest x
  static GridField delta(const Grid& g, std::span<const double> x);

  double integral() const;  // h^d * sum
  double inner(const GridField& o) const;
  double norm() const;
};

}  // namespace fklab

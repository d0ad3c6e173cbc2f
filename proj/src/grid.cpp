#include "fklab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fklab {

Grid::Grid(Box box, double h) : box_(std::move(box)), h_(h) {
  const int d = box_.dim();
  if (d < 1 || d > 2) throw std::invalid_argument("Grid: d in {1, 2} required");
  if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("Grid: spacing must be positive");
  size_ = 1;
  for (int k = 0; k < d; ++k) {
    const double cells = 2 * box_.half_widths[k] / h;
    const double n = std::round(cells);
    if (std::abs(cells - n) > 1e-8 * std::max(1.0, n))
      throw std::invalid_argument("Grid: box widths must be integer multiples of h");
    if (n < 2) throw std::invalid_argument("Grid: at least one interior node required");
    n_[k] = static_cast<std::size_t>(n) - 1;
    size_ *= n_[k];
  }
}

Grid Grid::fitted(Box box, double h_max) {
  if (!(h_max > 0)) throw std::invalid_argument("Grid::fitted: h_max > 0 required");
  const double w = 2 * box.half_widths[0];
  const double n = std::ceil(w / h_max - 1e-12);
  return Grid(std::move(box), w / n);
}

void Grid::node(std::size_t flat, double* out) const {
  if (dim() == 1) {
    out[0] = coord(0, flat);
  } else {
    out[0] = coord(0, flat / n_[1]);
    out[1] = coord(1, flat % n_[1]);
  }
}

std::vector<double> Grid::nodes() const {
  const int d = dim();
  std::vector<double> v(size_ * d);
  for (std::size_t i = 0; i < size_; ++i) node(i, v.data() + i * d);
  return v;
}

double Grid::cell_volume() const { return dim() == 1 ? h_ : h_ * h_; }

std::size_t Grid::nearest_node(std::span<const double> x) const {
  std::size_t idx[2] = {0, 0};
  for (int k = 0; k < dim(); ++k) {
    const double j = std::round((x[k] - box_.lower(k)) / h_) - 1;
    idx[k] = static_cast<std::size_t>(std::clamp(j, 0.0, static_cast<double>(n_[k] - 1)));
  }
  return dim() == 1 ? idx[0] : idx[0] * n_[1] + idx[1];
}

GridField GridField::zeros(const Grid& g) { return {g, std::vector<double>(g.size(), 0.0)}; }

GridField GridField::from_function(const Grid& g, const std::function<double(std::span<const double>)>& f) {
  GridField out = zeros(g);
  double x[2];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.node(i, x);
    out.values[i] = f(std::span<const double>(x, g.dim()));
  }
  return out;
}

GridField GridField::delta(const Grid& g, std::span<const double> x) {
  GridField out = zeros(g);
  out.values[g.nearest_node(x)] = 1.0 / g.cell_volume();
  return out;
}

double GridField::integral() const {
  double s = 0;
  for (double v : values) s += v;
  return s * grid.cell_volume();
}

double GridField::inner(const GridField& o) const {
  if (o.values.size() != values.size()) throw std::invalid_argument("GridField::inner: size mismatch");
  double s = 0;
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * o.values[i];
  return s * grid.cell_volume();
}

double GridField::norm() const { return std::sqrt(inner(*this)); }

}  // namespace fklab

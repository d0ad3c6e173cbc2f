#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "fklab/geometry.hpp"
#include "fklab/model.hpp"
#include "fklab/rng.hpp"

namespace fklab {

struct HomogeneousIntensity {
  double rate = 1.0;
};

struct TiltedIntensity {
  DiscreteMeasure mu;
  double t = 0;
  double alpha = 2;
};

using IntensityTag = std::variant<HomogeneousIntensity, TiltedIntensity>;

struct PointConfig {
  Box box;
  std::vector<double> coords;  // flat, row-major
  IntensityTag intensity = HomogeneousIntensity{};
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  int dim() const { return box.dim(); }
  std::size_t size() const { return dim() ? coords.size() / dim() : 0; }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dim(), static_cast<std::size_t>(dim())};
  }
};

PointConfig sample_homogeneous(const Box& box, double rate, std::uint64_t seed, std::uint64_t stream = 0);

// exp(-t sum_i w_i vhat(x_i - y))
double tilt_acceptance(std::span<const double> y, const DiscreteMeasure& mu, const Model& model);

// Thinning of a rate-1 homogeneous sample on `box` with the tilt acceptance.
PointConfig sample_tilted(const DiscreteMeasure& mu, const Model& model, const Box& box, std::uint64_t seed,
                          std::uint64_t stream = 0);
// Same, drawing from an existing generator (used when a replica consumes one stream).
PointConfig sample_tilted(const DiscreteMeasure& mu, const Model& model, const Box& box, Philox& rng);

// Line-oriented text format: '#'-prefixed header, then one point per line.
void write_config(std::ostream& os, const PointConfig& cfg);
PointConfig read_config(std::istream& is);

}  // namespace fklab

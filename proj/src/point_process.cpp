#include "fklab/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fklab {

namespace {

void fill_uniform(Philox& rng, const Box& box, double* out) {
  for (int k = 0; k < box.dim(); ++k) out[k] = box.lower(k) + 2 * box.half_widths[k] * rng.uniform();
}

// Exact tilt factor exp(-t F(y)) with a squeeze: bounds on F from the distance
// of y to the ball containing supp(mu) decide most candidates without the sum.
class TiltEvaluator {
 public:
  TiltEvaluator(const DiscreteMeasure& mu, const Model& model)
      : mu_(mu), kernel_(model.kernel()), t_(model.t()), c_(mu.barycenter()), rho_(mu.radius_about(c_)) {}

  double exponent(std::span<const double> y) const {
    const int d = mu_.dim();
    double f = 0;
    for (std::size_t i = 0; i < mu_.size(); ++i) {
      const double* a = mu_.atoms().data() + i * d;
      double r2 = 0;
      for (int k = 0; k < d; ++k) r2 += (a[k] - y[k]) * (a[k] - y[k]);
      f += mu_.weight(i) * kernel_(r2);
    }
    return t_ * f;
  }

  bool accept(std::span<const double> y, double u) const {
    if (t_ == 0) return true;
    double r2 = 0;
    for (int k = 0; k < mu_.dim(); ++k) r2 += (y[k] - c_[k]) * (y[k] - c_[k]);
    const double r = std::sqrt(r2);
    const double near = std::max(r - rho_, 0.0);
    const double far = r + rho_;
    const double lo = t_ * kernel_(far * far);   // F >= vhat(far)
    const double hi = t_ * kernel_(near * near); // F <= vhat(near)
    if (u < std::exp(-hi)) return true;
    if (u >= std::exp(-lo)) return false;
    return u < std::exp(-exponent(y));
  }

 private:
  const DiscreteMeasure& mu_;
  ShapeKernel kernel_;
  double t_;
  Point c_;
  double rho_;
};

}  // namespace

PointConfig sample_homogeneous(const Box& box, double rate, std::uint64_t seed, std::uint64_t stream) {
  if (!(rate > 0) || !std::isfinite(rate)) throw std::invalid_argument("sample_homogeneous: rate > 0 required");
  Box checked(box.center, box.half_widths);  // validates
  Philox rng(seed, stream);
  PointConfig cfg;
  cfg.box = checked;
  cfg.intensity = HomogeneousIntensity{rate};
  cfg.seed = seed;
  cfg.stream = stream;
  const long long n = poisson_draw(rng, rate * checked.volume());
  cfg.coords.resize(static_cast<std::size_t>(n) * checked.dim());
  for (long long i = 0; i < n; ++i) fill_uniform(rng, checked, cfg.coords.data() + i * checked.dim());
  return cfg;
}

double tilt_acceptance(std::span<const double> y, const DiscreteMeasure& mu, const Model& model) {
  if (static_cast<int>(y.size()) != mu.dim() || mu.dim() != model.dim())
    throw std::invalid_argument("tilt_acceptance: dimension mismatch");
  if (model.t() == 0) return 1.0;
  return std::exp(-TiltEvaluator(mu, model).exponent(y));
}

PointConfig sample_tilted(const DiscreteMeasure& mu, const Model& model, const Box& box, Philox& rng) {
  if (mu.dim() != model.dim() || box.dim() != model.dim())
    throw std::invalid_argument("sample_tilted: dimension mismatch");
  const int d = box.dim();
  TiltEvaluator tilt(mu, model);
  PointConfig cfg;
  cfg.box = box;
  cfg.intensity = TiltedIntensity{mu, model.t(), model.alpha()};
  cfg.seed = rng.seed();
  cfg.stream = rng.stream();
  const long long n = poisson_draw(rng, box.volume());
  std::vector<double> y(d);
  cfg.coords.reserve(static_cast<std::size_t>(std::max<long long>(n / 2, 16)) * d);
  for (long long i = 0; i < n; ++i) {
    fill_uniform(rng, box, y.data());
    const double u = rng.uniform();
    if (tilt.accept(y, u)) cfg.coords.insert(cfg.coords.end(), y.begin(), y.end());
  }
  return cfg;
}

PointConfig sample_tilted(const DiscreteMeasure& mu, const Model& model, const Box& box, std::uint64_t seed,
                          std::uint64_t stream) {
  Philox rng(seed, stream);
  return sample_tilted(mu, model, box, rng);
}

namespace {

void write_vec(std::ostream& os, std::span<const double> v) {
  for (double x : v) os << ' ' << x;
}

std::vector<double> read_numbers(std::istringstream& ss) {
  std::vector<double> v;
  double x;
  while (ss >> x) v.push_back(x);
  return v;
}

}  // namespace

void write_config(std::ostream& os, const PointConfig& cfg) {
  const auto old_prec = os.precision(17);
  const int d = cfg.dim();
  os << "# fklab point-config 1\n";
  os << "# dim " << d << '\n';
  os << "# box_center";
  write_vec(os, cfg.box.center);
  os << "\n# box_half_widths";
  write_vec(os, cfg.box.half_widths);
  os << "\n# seed " << cfg.seed << " stream " << cfg.stream << '\n';
  if (const auto* h = std::get_if<HomogeneousIntensity>(&cfg.intensity)) {
    os << "# intensity homogeneous " << h->rate << '\n';
  } else {
    const auto& tl = std::get<TiltedIntensity>(cfg.intensity);
    os << "# intensity tilted " << tl.t << ' ' << tl.alpha << ' ' << tl.mu.size() << '\n';
    for (std::size_t i = 0; i < tl.mu.size(); ++i) {
      os << "# atom " << tl.mu.weight(i);
      write_vec(os, tl.mu.atom(i));
      os << '\n';
    }
  }
  os << "# count " << cfg.size() << '\n';
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const auto p = cfg.point(i);
    for (int k = 0; k < d; ++k) os << (k ? " " : "") << p[k];
    os << '\n';
  }
  os.precision(old_prec);
}

PointConfig read_config(std::istream& is) {
  std::string line;
  int d = 0;
  Point center;
  std::vector<double> half;
  PointConfig cfg;
  std::vector<double> atoms, weights;
  bool tilted = false;
  double rate = 1, tt = 0, alpha = 2;
  long long count = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      ss >> key;
      if (key == "dim") {
        ss >> d;
      } else if (key == "box_center") {
        center = read_numbers(ss);
      } else if (key == "box_half_widths") {
        half = read_numbers(ss);
      } else if (key == "seed") {
        std::string skey;
        ss >> cfg.seed >> skey >> cfg.stream;
      } else if (key == "intensity") {
        std::string kind;
        ss >> kind;
        if (kind == "homogeneous") {
          ss >> rate;
        } else if (kind == "tilted") {
          tilted = true;
          std::size_t n;
          ss >> tt >> alpha >> n;
        } else {
          throw std::runtime_error("read_config: unknown intensity '" + kind + "'");
        }
      } else if (key == "atom") {
        auto v = read_numbers(ss);
        if (v.empty()) throw std::runtime_error("read_config: malformed atom line");
        weights.push_back(v[0]);
        atoms.insert(atoms.end(), v.begin() + 1, v.end());
      } else if (key == "count") {
        ss >> count;
      }
      continue;
    }
    std::istringstream ss(line);
    auto v = read_numbers(ss);
    if (static_cast<int>(v.size()) != d) throw std::runtime_error("read_config: point with wrong dimension");
    cfg.coords.insert(cfg.coords.end(), v.begin(), v.end());
  }
  if (d < 1) throw std::runtime_error("read_config: missing dim header");
  cfg.box = Box(center, half);
  if (tilted) {
    cfg.intensity = TiltedIntensity{DiscreteMeasure(d, atoms, weights), tt, alpha};
  } else {
    cfg.intensity = HomogeneousIntensity{rate};
  }
  if (count >= 0 && static_cast<std::size_t>(count) != cfg.size())
    throw std::runtime_error("read_config: point count does not match header");
  return cfg;
}

}  // namespace fklab

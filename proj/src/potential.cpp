#include "fklab/potential.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "fklab/quadrature.hpp"

namespace fklab {

namespace {

// distance from x to the boundary of `box` along direction (cos th, sin th)
double exit_distance_2d(const Box& box, double x0, double x1, double th) {
  const double c = std::cos(th), s = std::sin(th);
  double r = std::numeric_limits<double>::infinity();
  if (c > 0) r = std::min(r, (box.upper(0) - x0) / c);
  if (c < 0) r = std::min(r, (box.lower(0) - x0) / c);
  if (s > 0) r = std::min(r, (box.upper(1) - x1) / s);
  if (s < 0) r = std::min(r, (box.lower(1) - x1) / s);
  return r;
}

}  // namespace

PotentialView::PotentialView(PointConfig config, Box window, const Model& model, FarFieldPolicy policy)
    : config_(std::make_shared<const PointConfig>(std::move(config))),
      window_(std::move(window)),
      model_(model),
      policy_(policy) {
  const int d = model_.dim();
  if (config_->dim() != d || window_.dim() != d) throw std::invalid_argument("PotentialView: dimension mismatch");
  const Box& cb = config_->box;
  double R = std::numeric_limits<double>::infinity();
  for (int k = 0; k < d; ++k)
    R = std::min(R, cb.half_widths[k] - (std::abs(window_.center[k] - cb.center[k]) + window_.half_widths[k]));
  if (!(R > 0)) throw std::invalid_argument("PotentialView: window must lie strictly inside the config box");
  const auto& c = model_.constants();
  const double a = model_.alpha();
  const double mean_bound = c.sigma_d * std::pow(R, d - a) / (a - d);
  const double sd_bound = std::sqrt(c.sigma_d * std::pow(R, d - 2 * a) / (2 * a - d));
  far_bound_ = policy_.mean_shift ? sd_bound : mean_bound;
  if (policy_.mean_shift && d > 2) throw std::invalid_argument("PotentialView: tail mean shift implemented for d <= 2");
  double tol = policy_.tolerance;
  if (tol < 0) tol = 1e-3 * model_.h_t();
  if (!(far_bound_ < tol))
    throw std::invalid_argument("PotentialView: far-field bound " + std::to_string(far_bound_) +
                                " exceeds tolerance " + std::to_string(tol) + " (enlarge the config box)");
}

double PotentialView::tail_mean(std::span<const double> x) const {
  const Box& b = config_->box;
  const double a = model_.alpha();
  const int d = model_.dim();
  if (d == 1) {
    const double l = x[0] - b.lower(0), u = b.upper(0) - x[0];
    return (std::pow(l, 1 - a) + std::pow(u, 1 - a)) / (a - 1);
  }
  if (d == 2) {
    // integral over directions of rho(theta)^{2-a}/(a-2), split at the corner angles
    std::vector<double> cuts = {0.0, 2 * std::numbers::pi};
    for (int sx = 0; sx < 2; ++sx)
      for (int sy = 0; sy < 2; ++sy) {
        double th = std::atan2((sy ? b.upper(1) : b.lower(1)) - x[1], (sx ? b.upper(0) : b.lower(0)) - x[0]);
        if (th < 0) th += 2 * std::numbers::pi;
        cuts.push_back(th);
      }
    std::sort(cuts.begin(), cuts.end());
    QuadratureSpec q{1e-13, 1e-10, 200};
    return integrate(
               [&](double th) { return std::pow(exit_distance_2d(b, x[0], x[1], th), 2 - a) / (a - 2); }, cuts, q)
        .value;
  }
  throw std::invalid_argument("tail_mean: d <= 2 only");
}

double PotentialView::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != model_.dim()) throw std::invalid_argument("evaluate_V: dimension mismatch");
  if (!window_.contains(x)) throw std::out_of_range("evaluate_V: point outside the evaluation window");
  const int d = model_.dim();
  const ShapeKernel& k = model_.kernel();
  const auto& pts = config_->coords;
  const std::size_t n = config_->size();
  double v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r2 = 0;
    for (int j = 0; j < d; ++j) {
      const double z = x[j] - pts[i * d + j];
      r2 += z * z;
    }
    v += k(r2);
  }
  if (policy_.mean_shift) v += tail_mean(x);
  return v;
}

void PotentialView::evaluate_many(std::span<const double> xs, std::span<double> out) const {
  const int d = model_.dim();
  const std::size_t m = xs.size() / d;
  if (out.size() != m) throw std::invalid_argument("evaluate_many: output size mismatch");
  for (std::size_t j = 0; j < m; ++j)
    if (!window_.contains(xs.subspan(j * d, d))) throw std::out_of_range("evaluate_V: point outside the evaluation window");
  std::fill(out.begin(), out.end(), 0.0);
  const ShapeKernel& k = model_.kernel();
  const auto& pts = config_->coords;
  const std::size_t n = config_->size();
  if (d == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const double y = pts[i];
      for (std::size_t j = 0; j < m; ++j) {
        const double z = xs[j] - y;
        out[j] += k(z * z);
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double* y = pts.data() + i * d;
      for (std::size_t j = 0; j < m; ++j) {
        double r2 = 0;
        for (int c = 0; c < d; ++c) {
          const double z = xs[j * d + c] - y[c];
          r2 += z * z;
        }
        out[j] += k(r2);
      }
    }
  }
  if (policy_.mean_shift)
    for (std::size_t j = 0; j < m; ++j) out[j] += tail_mean(xs.subspan(j * d, d));
}

double evaluate_V(const PotentialView& view, std::span<const double> x) { return view(x); }

namespace {

std::vector<double> axis_nodes(double lo, double hi, double step) {
  std::vector<double> v;
  const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) v.push_back(lo + i * step);
  if (v.back() < hi - 1e-12 * std::max(1.0, std::abs(hi))) v.push_back(hi);
  return v;
}

}  // namespace

MinimizerResult find_local_min(const PotentialView& view, double coarse_step, double refine_tol) {
  if (!(coarse_step > 0) || !(refine_tol > 0)) throw std::invalid_argument("find_local_min: positive steps required");
  const Box& w = view.window();
  const int d = w.dim();
  std::vector<std::vector<double>> axes;
  for (int k = 0; k < d; ++k) axes.push_back(axis_nodes(w.lower(k), w.upper(k), coarse_step));
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  std::vector<double> pts(total * d), vals(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (int k = d - 1; k >= 0; --k) {
      pts[idx * d + k] = axes[k][rem % axes[k].size()];
      rem /= axes[k].size();
    }
  }
  view.evaluate_many(pts, vals);
  std::size_t best = 0;
  for (std::size_t i = 1; i < total; ++i)
    if (vals[i] < vals[best]) best = i;
  MinimizerResult res;
  res.m.assign(pts.begin() + best * d, pts.begin() + (best + 1) * d);
  res.value = vals[best];
  res.grid_step = coarse_step;

  if (d == 1) {
    const double lo = std::max(w.lower(0), res.m[0] - coarse_step);
    const double hi = std::min(w.upper(0), res.m[0] + coarse_step);
    const auto f = [&](double x) {
      const double p[1] = {std::clamp(x, lo, hi)};
      return view(p);
    };
    const int bits =
        std::clamp(1 + static_cast<int>(std::ceil(-std::log2(refine_tol / std::max(1.0, std::abs(res.m[0]))))), 8, 26);
    std::uintmax_t iters = 200;
    const auto [x, fx] = boost::math::tools::brent_find_minima(f, lo, hi, bits, iters);
    if (fx < res.value) {
      res.m[0] = x;
      res.value = fx;
    }
    return res;
  }
  // compass search
  double s = 0.5 * coarse_step;
  Point trial = res.m;
  while (s > refine_tol) {
    bool moved = false;
    for (int k = 0; k < d && !moved; ++k) {
      for (int sgn : {-1, 1}) {
        trial = res.m;
        trial[k] = std::clamp(res.m[k] + sgn * s, w.lower(k), w.upper(k));
        const double v = view(trial);
        if (v < res.value) {
          res.m = trial;
          res.value = v;
          moved = true;
          break;
        }
      }
    }
    if (!moved) s *= 0.5;
  }
  return res;
}

namespace {

std::vector<double> ball_nodes(std::span<const double> m, double radius, int n) {
  const int d = static_cast<int>(m.size());
  std::vector<double> pts;
  if (d == 1) {
    for (int k = -n; k <= n; ++k) pts.push_back(m[0] + radius * k / n);
    return pts;
  }
  if (d == 2) {
    for (int i = -n; i <= n; ++i)
      for (int j = -n; j <= n; ++j) {
        if (i * i + j * j > n * n) continue;
        pts.push_back(m[0] + radius * i / n);
        pts.push_back(m[1] + radius * j / n);
      }
    return pts;
  }
  throw std::invalid_argument("profile_deviation: d <= 2 only");
}

void check_ball(const Box& window, std::span<const double> m, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("profile_deviation: radius > 0 required");
  if (window.inner_distance(m) < radius * (1 - 1e-12))
    throw std::invalid_argument("profile_deviation: ball B(m, radius) must lie inside the window");
}

}  // namespace

double profile_deviation(const ScalarField& V, const Box& window, std::span<const double> m, double radius,
                         const Model& model, int n) {
  check_ball(window, m, radius);
  const int d = static_cast<int>(m.size());
  const auto pts = ball_nodes(m, radius, n);
  const double vm = V(m);
  double sup = 0;
  std::vector<double> z(d);
  for (std::size_t i = 0; i < pts.size() / d; ++i) {
    std::span<const double> x(pts.data() + i * d, d);
    for (int k = 0; k < d; ++k) z[k] = x[k] - m[k];
    sup = std::max(sup, std::abs(V(x) - vm - model.quadratic_profile(z)));
  }
  return sup;
}

double profile_deviation(const PotentialView& view, std::span<const double> m, double radius, const Model& model,
                         int n) {
  check_ball(view.window(), m, radius);
  const int d = static_cast<int>(m.size());
  auto pts = ball_nodes(m, radius, n);
  const Box& w = view.window();
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = std::clamp(pts[i], w.lower(i % d), w.upper(i % d));
  std::vector<double> vals(pts.size() / d);
  view.evaluate_many(pts, vals);
  const double vm = view(m);
  double sup = 0;
  std::vector<double> z(d);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    for (int k = 0; k < d; ++k) z[k] = pts[i * d + k] - m[k];
    sup = std::max(sup, std::abs(vals[i] - vm - model.quadratic_profile(z)));
  }
  return sup;
}

void write_field_csv(std::ostream& os, int dim, std::span<const double> coords, std::span<const double> values) {
  const auto old = os.precision(17);
  for (int k = 0; k < dim; ++k) os << 'x' << k << ',';
  os << "value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (int k = 0; k < dim; ++k) os << coords[i * dim + k] << ',';
    os << values[i] << '\n';
  }
  os.precision(old);
}

}  // namespace fklab

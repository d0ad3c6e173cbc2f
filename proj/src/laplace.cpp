#include "fklab/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integral over R^d (or a box) written in polar coordinates about an origin c:
// sum/integral over directions theta of  int_0^{R(theta)} g(c + r theta) r^{d-1} dr.
// The radial integral is split where rays cross unit spheres around `features`
// (kinks of the capped shape) and switched to a log variable beyond `log_start`.
struct PolarIntegral {
  int d = 1;
  Point c;
  std::function<double(const double*)> g;
  std::vector<double> features;
  std::optional<Box> box;
  double r_max = kInf;
  double log_start = 2;
  QuadratureSpec quad;
  const char* context = "quadrature";

  double exit_distance(const double* th) const {
    double R = r_max;
    if (box) {
      for (int k = 0; k < d; ++k) {
        if (th[k] > 0) R = std::min(R, (box->upper(k) - c[k]) / th[k]);
        if (th[k] < 0) R = std::min(R, (box->lower(k) - c[k]) / th[k]);
      }
    }
    return R;
  }

  double radial(const double* th, double abs_tol) const {
    const double R = exit_distance(th);
    if (!(R > 0)) return 0.0;
    std::vector<double> bp = {0.0, R};
    const std::size_t nf = features.size() / d;
    for (std::size_t i = 0; i < nf; ++i) {
      double b = 0, q0 = -1;
      for (int k = 0; k < d; ++k) {
        const double z = c[k] - features[i * d + k];
        b += th[k] * z;
        q0 += z * z;
      }
      const double disc = b * b - q0;
      if (disc <= 0) continue;
      const double s = std::sqrt(disc);
      for (double r : {-b - s, -b + s})
        if (r > 0 && r < R) bp.push_back(r);
    }
    if (log_start < R) bp.push_back(log_start);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    std::vector<double> lin, lg;
    for (double r : bp) {
      if (r <= log_start) lin.push_back(r);
      if (r >= log_start) lg.push_back(std::log(r));
    }
    std::vector<double> y(d);
    auto h = [&](double r) {
      for (int k = 0; k < d; ++k) y[k] = c[k] + r * th[k];
      return g(y.data()) * (d == 1 ? 1.0 : std::pow(r, d - 1));
    };
    QuadratureSpec q = quad;
    q.abs_tol = 0.5 * abs_tol;
    double total = 0;
    if (lin.size() >= 2) total += integrate_checked(h, lin, q, context);
    if (lg.size() >= 2) {
      auto hl = [&](double v) {
        const double r = std::exp(v);
        return h(r) * r;
      };
      total += integrate_checked(hl, lg, q, context);
    }
    return total;
  }

  double run() const {
    if (d == 1) {
      const double plus[1] = {1.0}, minus[1] = {-1.0};
      return radial(plus, 0.5 * quad.abs_tol) + radial(minus, 0.5 * quad.abs_tol);
    }
    if (d == 2) {
      std::vector<double> cuts = {0.0, 2 * std::numbers::pi};
      if (box) {
        for (int sx = 0; sx < 2; ++sx)
          for (int sy = 0; sy < 2; ++sy) {
            double a = std::atan2((sy ? box->upper(1) : box->lower(1)) - c[1],
                                  (sx ? box->upper(0) : box->lower(0)) - c[0]);
            if (a < 0) a += 2 * std::numbers::pi;
            cuts.push_back(a);
          }
        std::sort(cuts.begin(), cuts.end());
      }
      const double inner = quad.abs_tol / (4 * std::numbers::pi);
      auto f = [&](double phi) {
        const double th[2] = {std::cos(phi), std::sin(phi)};
        return radial(th, inner);
      };
      return integrate_checked(f, cuts, quad, context);
    }
    if (d == 3) {
      if (box) throw std::invalid_argument("box-restricted integrals support d <= 2");
      const double inner = quad.abs_tol / (16 * std::numbers::pi * std::numbers::pi);
      QuadratureSpec mid = quad;
      mid.abs_tol = quad.abs_tol / (4 * std::numbers::pi);
      auto fu = [&](double u) {
        const double s = std::sqrt(std::max(0.0, 1 - u * u));
        auto fphi = [&](double phi) {
          const double th[3] = {s * std::cos(phi), s * std::sin(phi), u};
          return radial(th, inner);
        };
        return integrate_checked(fphi, 0.0, 2 * std::numbers::pi, mid, context);
      };
      return integrate_checked(fu, -1.0, 1.0, quad, context);
    }
    throw std::invalid_argument("multi-atom Laplace integrals support d <= 3");
  }
};

double weighted_shape(const DiscreteMeasure& mu, const ShapeKernel& k, const double* y) {
  const int d = mu.dim();
  const double* a = mu.atoms().data();
  double f = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double r2 = 0;
    for (int j = 0; j < d; ++j) {
      const double z = a[i * d + j] - y[j];
      r2 += z * z;
    }
    f += mu.weight(i) * k(r2);
  }
  return f;
}

void check_dims(const DiscreteMeasure& mu, const Model& model) {
  if (mu.dim() != model.dim()) throw std::invalid_argument("Laplace oracle: dimension mismatch");
}

}  // namespace

double exact_mgf_V0(double s, const Model& model, const QuadratureSpec& quad) {
  if (!(s > 0) || !std::isfinite(s)) throw std::invalid_argument("exact_mgf_V0: s > 0 required");
  quad.validate();
  const auto& c = model.constants();
  const double a = model.alpha();
  const double beta = model.dim() / a;
  const double pref = c.sigma_d / a * std::pow(s, beta);
  QuadratureSpec q = quad;
  q.abs_tol = 0.5 * quad.abs_tol / pref;
  // near branch u in (0, min(s,1)]: u = w^p removes the u^{-beta} singularity
  const double p = 1.0 / (1.0 - beta);
  const double wmax = std::pow(std::min(s, 1.0), 1.0 / p);
  auto near = [&](double w) {
    const double u = std::pow(w, p);
    return u == 0 ? p : p * (-std::expm1(-u)) / u;
  };
  double J = integrate_checked(near, 0.0, wmax, q, "exact_mgf_V0");
  if (s > 1) {
    auto far = [&](double v) { return -std::expm1(-std::exp(v)) * std::exp(-beta * v); };
    J += integrate_checked(far, 0.0, std::log(s), q, "exact_mgf_V0");
  }
  return -(c.omega_d * (-std::expm1(-s)) + pref * J);
}

double exact_log_laplace(const DiscreteMeasure& mu, const Model& model, const QuadratureSpec& quad) {
  check_dims(mu, model);
  quad.validate();
  const double t = model.t();
  if (t == 0) return 0.0;
  const double radial = -exact_mgf_V0(t, model, QuadratureSpec{0.5 * quad.abs_tol, quad.rel_tol, quad.max_subdivisions});
  if (mu.size() == 1) return radial;

  const int d = model.dim();
  const double a = model.alpha();
  const Point m = mu.barycenter();
  const double rho = mu.radius_about(m);
  const double M2 = mu.centered_second_moment();
  const ShapeKernel& k = model.kernel();
  const auto& cst = model.constants();

  // Tail beyond R: |F - vhat(m-.)| <= a(a+1)/2 (r/2)^{-a-2} M2 for r >= 2 rho + 2.
  const double K = 1.11 * t * 0.5 * a * (a + 1) * std::pow(2.0, a + 2) * M2 * cst.sigma_d / (a + 2 - d);
  double R = std::max(2 * rho + 2, std::pow(K / (0.1 * quad.abs_tol), 1.0 / (a + 2 - d)));
  while (t * 0.5 * a * (a + 1) * std::pow(R / 2, -a - 2) * M2 > 0.1) R *= 2;

  PolarIntegral P;
  P.d = d;
  P.c = m;
  P.features = mu.atoms();
  P.features.insert(P.features.end(), m.begin(), m.end());
  P.r_max = R;
  P.log_start = 2 * rho + 2;
  P.quad = quad;
  P.quad.abs_tol = 0.5 * quad.abs_tol;
  P.context = "exact_log_laplace";
  P.g = [&](const double* y) {
    double r2 = 0;
    for (int j = 0; j < d; ++j) r2 += (y[j] - m[j]) * (y[j] - m[j]);
    const double vm = k(r2);
    const double f = weighted_shape(mu, k, y);
    // exp(-t vm) - exp(-t f), factored on the larger exponent
    if (f >= vm) return std::exp(-t * vm) * (-std::expm1(-t * (f - vm)));
    return -std::exp(-t * f) * (-std::expm1(-t * (vm - f)));
  };
  return radial + P.run();
}

double exact_log_laplace_in_box(const DiscreteMeasure& mu, const Model& model, const Box& box,
                                const QuadratureSpec& quad) {
  check_dims(mu, model);
  quad.validate();
  const double t = model.t();
  if (t == 0) return 0.0;
  const int d = model.dim();
  Point m = mu.barycenter();
  if (!box.contains(m)) m = box.center;
  const ShapeKernel& k = model.kernel();
  PolarIntegral P;
  P.d = d;
  P.c = m;
  P.features = mu.atoms();
  P.box = box;
  P.log_start = 2 * mu.radius_about(m) + 2;
  P.quad = quad;
  P.context = "exact_log_laplace_in_box";
  P.g = [&](const double* y) { return -std::expm1(-t * weighted_shape(mu, k, y)); };
  return P.run();
}

double predicted_log_laplace(const DiscreteMeasure& mu, const Model& model, double eps) {
  check_dims(mu, model);
  const double t = model.t();
  const double a = model.alpha();
  const int d = model.dim();
  if (!(eps > 0 && eps < 1 / a)) throw std::invalid_argument("predicted_log_laplace: eps in (0, 1/alpha) required");
  const double bound = std::pow(t, 1 / a - eps);
  const Point zero(d, 0.0);
  if (mu.radius_about(zero) > bound)
    throw std::invalid_argument("predicted_log_laplace: support must lie in B(0, t^{1/alpha - eps})");
  const auto& c = model.constants();
  return -c.a1 * std::pow(t, d / a) - c.C * std::pow(t, (d - 2) / a) * mu.centered_second_moment();
}

TwoPointCheck two_point_bound_check(std::span<const double> x, std::span<const double> y, const Model& model,
                                    const QuadratureSpec& quad, double eps) {
  const int d = model.dim();
  if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
    throw std::invalid_argument("two_point_bound_check: dimension mismatch");
  const double t = model.t();
  const double a = model.alpha();
  double dist2 = 0;
  for (int k = 0; k < d; ++k) dist2 += (x[k] - y[k]) * (x[k] - y[k]);
  if (std::sqrt(dist2) >= std::pow(t, 1 / a - eps))
    throw std::invalid_argument("two_point_bound_check: |x-y| < t^{1/alpha - eps} required");
  std::vector<double> atoms(x.begin(), x.end());
  atoms.insert(atoms.end(), y.begin(), y.end());
  const DiscreteMeasure mu(d, atoms, {0.5, 0.5});
  const auto& c = model.constants();
  const double lambda = exact_log_laplace(mu, model, quad);
  const double bound = c.a1 * std::pow(t, d / a) + c.C / 5 * std::pow(t, (d - 2) / a) * dist2;
  TwoPointCheck r;
  r.margin = lambda - bound;
  r.holds = r.margin >= 0;
  return r;
}

double tilted_cumulant(int kpow, const DiscreteMeasure& mu, std::span<const double> at, const Model& model,
                       const QuadratureSpec& quad, const std::optional<Box>& domain) {
  check_dims(mu, model);
  quad.validate();
  if (kpow < 1) throw std::invalid_argument("tilted_cumulant: k >= 1 required");
  const int d = model.dim();
  const double t = model.t();
  const double a = model.alpha();
  const ShapeKernel& k = model.kernel();
  const auto& cst = model.constants();
  const Point x(at.begin(), at.end());

  // rough magnitude of the answer, used to tighten the absolute tolerance
  const double rough = t > 1 ? cst.sigma_d / a * std::tgamma(kpow - d / a) * std::pow(t, d / a - kpow) : 1.0;
  QuadratureSpec q = quad;
  q.abs_tol = std::min(quad.abs_tol, 0.1 * quad.rel_tol * rough);

  PolarIntegral P;
  P.d = d;
  P.c = x;
  P.features = mu.atoms();
  P.features.insert(P.features.end(), x.begin(), x.end());
  const Point cm = mu.barycenter();
  double sep2 = 0;
  for (int j = 0; j < d; ++j) sep2 += (x[j] - cm[j]) * (x[j] - cm[j]);
  const double reach = std::sqrt(sep2) + mu.radius_about(cm);
  P.log_start = 2 * reach + 2;
  P.context = "tilted_cumulant";
  auto vx = [&](const double* y) {
    double r2 = 0;
    for (int j = 0; j < d; ++j) r2 += (y[j] - x[j]) * (y[j] - x[j]);
    return k(r2);
  };

  if (domain) {
    if (!domain->contains(x)) P.c = domain->center;
    P.box = domain;
    P.quad = q;
    P.g = [&](const double* y) { return std::pow(vx(y), kpow) * std::exp(-t * weighted_shape(mu, k, y)); };
    return P.run();
  }
  if (kpow == 1) {
    // closed-form total of vhat minus the tilted deficit, whose tail is O(t R^{d-2a})
    const double total = cst.omega_d + cst.sigma_d / (a - d);
    if (t == 0) return total;
    const double K = t * cst.sigma_d * std::pow(2.0, a) / (2 * a - d);
    P.r_max = std::max(2 * reach + 2, std::pow(K / (0.1 * q.abs_tol), 1.0 / (2 * a - d)));
    P.quad = q;
    P.quad.abs_tol = 0.9 * q.abs_tol;
    P.g = [&](const double* y) { return vx(y) * (-std::expm1(-t * weighted_shape(mu, k, y))); };
    return total - P.run();
  }
  const double K = cst.sigma_d / (kpow * a - d);
  P.r_max = std::max(2 * reach + 2, std::pow(K / (0.1 * q.abs_tol), 1.0 / (kpow * a - d)));
  P.quad = q;
  P.quad.abs_tol = 0.9 * q.abs_tol;
  P.g = [&](const double* y) { return std::pow(vx(y), kpow) * std::exp(-t * weighted_shape(mu, k, y)); };
  return P.run();
}

double tilted_mean_V(const DiscreteMeasure& mu, std::span<const double> at, const Model& model,
                     const QuadratureSpec& quad, const std::optional<Box>& domain) {
  return tilted_cumulant(1, mu, at, model, quad, domain);
}

TiltedVariance tilted_variance_V(const DiscreteMeasure& mu, std::span<const double> at, const Model& model,
                                 const QuadratureSpec& quad, const std::optional<Box>& domain) {
  TiltedVariance r;
  r.variance = tilted_cumulant(2, mu, at, model, quad, domain);
  const double a = model.alpha();
  r.scaled = std::pow(model.t(), (2 * a - model.dim()) / a) * r.variance;
  return r;
}

}  // namespace fklab

#include "fklab/semigroup.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace fklab {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// One heat step exp(dt Delta_h / 2) with Dirichlet conditions.
class HeatStep {
 public:
  HeatStep(const Grid& g, double dt, HeatMethod method) : g_(g), method_(method) {
    const double h = g.spacing();
    const int d = g.dim();
    if (method_ == HeatMethod::spectral) {
      buf_ = fftw_alloc_real(g.size());
      {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        if (d == 1) {
          plan_ = fftw_plan_r2r_1d(static_cast<int>(g.size()), buf_, buf_, FFTW_RODFT00, FFTW_ESTIMATE);
        } else {
          plan_ = fftw_plan_r2r_2d(static_cast<int>(g.extent(0)), static_cast<int>(g.extent(1)), buf_, buf_,
                                   FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
        }
      }
      std::vector<double> m[2];
      double norm = 1;
      for (int k = 0; k < d; ++k) {
        const std::size_t n = g.extent(k);
        m[k].resize(n);
        for (std::size_t j = 0; j < n; ++j) {
          const double theta = std::numbers::pi * static_cast<double>(j + 1) / static_cast<double>(n + 1);
          m[k][j] = std::exp(-dt * (1 - std::cos(theta)) / (h * h));
        }
        norm *= 2.0 * static_cast<double>(n + 1);
      }
      mult_.resize(g.size());
      if (d == 1) {
        for (std::size_t j = 0; j < g.size(); ++j) mult_[j] = m[0][j] / norm;
      } else {
        const std::size_t n1 = g.extent(1);
        for (std::size_t i = 0; i < g.extent(0); ++i)
          for (std::size_t j = 0; j < n1; ++j) mult_[i * n1 + j] = m[0][i] * m[1][j] / norm;
      }
    } else {
      // backward Euler along each axis: (1 + dt/h^2) u_i - dt/(2h^2)(u_{i-1} + u_{i+1})
      diag_ = 1 + dt / (h * h);
      off_ = -dt / (2 * h * h);
      for (int k = 0; k < d; ++k) {
        const std::size_t n = g.extent(k);
        auto& c = cprime_[k];
        auto& den = denom_[k];
        c.resize(n);
        den.resize(n);
        double prev = 0;
        for (std::size_t i = 0; i < n; ++i) {
          den[i] = diag_ - (i ? off_ * prev : 0.0);
          prev = off_ / den[i];
          c[i] = prev;
        }
      }
    }
  }

  ~HeatStep() {
    if (plan_) {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(plan_);
    }
    if (buf_) fftw_free(buf_);
  }
  HeatStep(const HeatStep&) = delete;
  HeatStep& operator=(const HeatStep&) = delete;

  void operator()(std::vector<double>& u) {
    if (method_ == HeatMethod::spectral) {
      std::copy(u.begin(), u.end(), buf_);
      fftw_execute(plan_);
      for (std::size_t i = 0; i < u.size(); ++i) buf_[i] *= mult_[i];
      fftw_execute(plan_);
      std::copy(buf_, buf_ + u.size(), u.begin());
      return;
    }
    if (g_.dim() == 1) {
      thomas(u.data(), g_.size(), 1, 0);
      return;
    }
    const std::size_t n0 = g_.extent(0), n1 = g_.extent(1);
    for (std::size_t i = 0; i < n0; ++i) thomas(u.data() + i * n1, n1, 1, 1);
    for (std::size_t j = 0; j < n1; ++j) thomas(u.data() + j, n0, n1, 0);
  }

 private:
  void thomas(double* x, std::size_t n, std::size_t stride, int axis) const {
    const auto& c = cprime_[axis];
    const auto& den = denom_[axis];
    double prev = 0;
    for (std::size_t i = 0; i < n; ++i) {
      prev = (x[i * stride] - (i ? off_ * prev : 0.0)) / den[i];
      x[i * stride] = prev;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i * stride] -= c[i] * x[(i + 1) * stride];
  }

  const Grid& g_;
  HeatMethod method_;
  double* buf_ = nullptr;
  fftw_plan plan_ = nullptr;
  std::vector<double> mult_;
  double diag_ = 0, off_ = 0;
  std::vector<double> cprime_[2], denom_[2];
};

void check_field(const GridField& a, const GridField& b) {
  if (a.values.size() != b.values.size()) throw std::invalid_argument("fk_evolve: field sizes differ");
}

}  // namespace

long step_count(const EvolutionSpec& spec, double t) {
  if (!(spec.dt > 0)) throw std::invalid_argument("EvolutionSpec: dt > 0 required");
  if (!(t >= 0)) throw std::invalid_argument("fk_evolve: t >= 0 required");
  const double n = std::round(t / spec.dt);
  if (std::abs(n * spec.dt - t) > 1e-9 * std::max(t, spec.dt))
    throw std::invalid_argument("EvolutionSpec: dt must divide t");
  return static_cast<long>(n);
}

ScaledField fk_evolve_scaled(const GridField& V, const EvolutionSpec& spec, double t, const GridField& initial) {
  check_field(V, initial);
  const long n = step_count(spec, t);
  ScaledField out{initial, 0.0};
  if (n == 0) return out;
  if (spec.engine == Engine::eigen) {
    SpectralPropagator prop(assemble(V));
    out.field = prop.evolve(initial, t);
    return out;
  }
  const double dt = spec.dt;
  const std::size_t N = V.values.size();
  bool nonneg = true;
  for (std::size_t i = 0; i < N; ++i) nonneg = nonneg && V.values[i] >= 0 && initial.values[i] >= 0;
  std::vector<double> full(N), half(N);
  for (std::size_t i = 0; i < N; ++i) {
    full[i] = std::exp(-dt * V.values[i]);
    half[i] = std::exp(-0.5 * dt * V.values[i]);
  }
  HeatStep heat(V.grid, dt, spec.heat);
  std::vector<double>& u = out.field.values;
  auto mul = [&](const std::vector<double>& m) {
    for (std::size_t i = 0; i < N; ++i) u[i] *= m[i];
  };
  double mass = 0;
  for (double x : u) mass += x;
  const bool strang = spec.splitting == Splitting::strang;
  if (strang) mul(half);
  for (long s = 0; s < n; ++s) {
    if (!strang) mul(full);
    heat(u);
    if (strang) mul(s + 1 == n ? half : full);
    double m = 0;
    for (double x : u) m += x;
    if (nonneg && m > mass * (1 + 1e-9) + 1e-300)
      throw InstabilityError("fk_evolve: mass grew at step " + std::to_string(s + 1) + " with V >= 0");
    // renormalize to keep the field representable
    if (m > 0 && (m < 1e-100 || m > 1e100)) {
      for (double& x : u) x /= m;
      out.log_scale += std::log(m);
      m = 1;
    }
    mass = m;
  }
  return out;
}

GridField fk_evolve(const GridField& V, const EvolutionSpec& spec, double t, const GridField& initial) {
  ScaledField s = fk_evolve_scaled(V, spec, t, initial);
  if (s.log_scale != 0) {
    const double f = std::exp(s.log_scale);
    for (double& x : s.field.values) x *= f;
  }
  return s.field;
}

SpectralPropagator::SpectralPropagator(const SchrodingerOperator& op) : SpectralPropagator(op, 0.0) {}

SpectralPropagator::SpectralPropagator(const SchrodingerOperator& op, double horizon, double cutoff) : op_(op) {
  if (horizon > 0) {
    const double l1 = tridiagonal_eigensystem(op_, 1).values.front();
    es_ = tridiagonal_eigensystem_below(op_, l1 + cutoff / horizon);
  } else {
    es_ = tridiagonal_eigensystem(op_, 0);
  }
  const double h = op_.grid().cell_volume();
  ones_.resize(es_.count());
  for (std::size_t k = 0; k < es_.count(); ++k) {
    const double* v = es_.vector(k);
    double s = 0;
    for (std::size_t i = 0; i < es_.n; ++i) s += v[i];
    ones_[k] = s * h;
  }
}

double SpectralPropagator::log_mass(std::size_t node, double t) const {
  const double l1 = lambda1();
  double s = 0;
  for (std::size_t k = 0; k < es_.count(); ++k) {
    const double e = t * (es_.values[k] - l1);
    if (e > 700) break;
    s += std::exp(-e) * es_.vector(k)[node] * ones_[k];
  }
  if (!(s > 0)) throw std::runtime_error("SpectralPropagator: nonpositive mass (horizon too short for the expansion)");
  return -t * l1 + std::log(s);
}

double SpectralPropagator::occupation_ratio(std::size_t node, std::span<const double> f, double t) const {
  const std::size_t N = es_.n, K = es_.count();
  if (f.size() != N) throw std::invalid_argument("occupation_ratio: size mismatch");
  const double l1 = lambda1();
  const double h = op_.grid().cell_volume();
  std::size_t L = 0;
  while (L < K && t * (es_.values[L] - l1) <= 60) ++L;
  std::vector<double> b(K);
  for (std::size_t k = 0; k < K; ++k) b[k] = es_.vector(k)[node];
  auto pair_kernel = [&](std::size_t j, std::size_t k) {
    const double lo = std::min(es_.values[j], es_.values[k]);
    const double gap = std::abs(es_.values[j] - es_.values[k]);
    const double base = std::exp(-t * (lo - l1));
    if (gap * t < 1e-12) return t * base;
    return base * (-std::expm1(-t * gap)) / gap;
  };
  double num = 0;
  std::vector<double> g(N);
  for (std::size_t l = 0; l < L; ++l) {
    const double* pl = es_.vector(l);
    for (std::size_t i = 0; i < N; ++i) g[i] = pl[i] * f[i];
    for (std::size_t m = 0; m < K; ++m) {
      const double* pm = es_.vector(m);
      double G = 0;
      for (std::size_t i = 0; i < N; ++i) G += g[i] * pm[i];
      G *= h;
      double coef = ones_[l] * b[m];
      if (m >= L) coef += ones_[m] * b[l];
      num += coef * G * pair_kernel(l, m);
    }
  }
  double mass = 0;
  for (std::size_t k = 0; k < K; ++k) {
    const double e = t * (es_.values[k] - l1);
    if (e > 700) break;
    mass += std::exp(-e) * b[k] * ones_[k];
  }
  return num / mass;
}

GridField SpectralPropagator::evolve(const GridField& initial, double t) const {
  GridField out = GridField::zeros(initial.grid);
  const double h = op_.grid().cell_volume();
  for (std::size_t k = 0; k < es_.count(); ++k) {
    const double* v = es_.vector(k);
    const double decay = std::exp(-t * es_.values[k]);
    if (decay == 0) break;
    double c = 0;
    for (std::size_t i = 0; i < es_.n; ++i) c += v[i] * initial.values[i];
    c *= h * decay;
    for (std::size_t i = 0; i < es_.n; ++i) out.values[i] += c * v[i];
  }
  return out;
}

Grid evolution_grid(const Model& model, const GridOptions& opts) {
  const double r = model.scale();
  const double h = opts.h > 0 ? opts.h : r / 50;
  const double R = opts.box_radius > 0 ? opts.box_radius : 4 * r * std::max(1.0, std::log(model.t()));
  return Grid::fitted(Box::cube(model.dim(), R), h);
}

GridField potential_on_grid(const PotentialView& view, const Grid& grid) {
  GridField V = GridField::zeros(grid);
  view.evaluate_many(grid.nodes(), V.values);
  return V;
}

namespace {

GridField potential_for(const PointConfig& config, const Model& model, const Grid& grid, FarFieldPolicy far) {
  const PotentialView view(config, grid.box(), model, far);
  return potential_on_grid(view, grid);
}

}  // namespace

double quenched_log_partition(const PointConfig& config, const EvolutionSpec& spec, const Model& model,
                              const GridOptions& opts, FarFieldPolicy far) {
  const Grid grid = evolution_grid(model, opts);
  const GridField V = potential_for(config, model, grid, far);
  const Point origin(model.dim(), 0.0);
  if (spec.engine == Engine::eigen) {
    step_count(spec, model.t());
    SpectralPropagator prop(assemble(V), model.t());
    return prop.log_mass(grid.nearest_node(origin), model.t());
  }
  const ScaledField u = fk_evolve_scaled(V, spec, model.t(), GridField::delta(grid, origin));
  return u.log_scale + std::log(u.field.integral());
}

double quenched_partition(const PointConfig& config, const EvolutionSpec& spec, const Model& model,
                          const GridOptions& opts, FarFieldPolicy far) {
  return std::exp(quenched_log_partition(config, spec, model, opts, far));
}

OccupationMoments occupation_moments(const GridField& V, const EvolutionSpec& spec, double t,
                                     const std::vector<GridField>& fs) {
  const Grid& g = V.grid;
  const Point origin(g.dim(), 0.0);
  OccupationMoments o;
  if (spec.engine == Engine::eigen) {
    const SchrodingerOperator op = assemble(V);
    const std::size_t node = g.nearest_node(origin);
    // Truncation is accurate when the start sits near the well; starts far from it put weight on
    // high modes at early times, so widen the cutoff until the moments are admissible.
    for (double cutoff : {300.0, 3000.0, 0.0}) {
      const SpectralPropagator prop = cutoff > 0 ? SpectralPropagator(op, t, cutoff) : SpectralPropagator(op);
      o.log_mass = prop.log_mass(node, t);
      o.means.clear();
      bool ok = std::isfinite(o.log_mass);
      for (const GridField& f : fs) {
        const double v = prop.occupation_ratio(node, f.values, t) / t;
        double lo = INFINITY, hi = -INFINITY;
        for (double x : f.values) lo = std::min(lo, x), hi = std::max(hi, x);
        ok = ok && std::isfinite(v) && v >= lo && v <= hi;
        o.means.push_back(v);
      }
      if (ok) break;
    }
    return o;
  }
  // shift V by its minimum so the Duhamel integrals stay representable
  GridField W = V;
  const double vmin = *std::min_element(W.values.begin(), W.values.end());
  for (double& v : W.values) v -= vmin;
  const ScaledField u = fk_evolve_scaled(W, spec, t, GridField::delta(g, origin));
  const double lm = u.log_scale + std::log(u.field.integral());
  o.log_mass = lm - vmin * t;
  for (const GridField& f : fs) o.means.push_back(occupation_functional(f, W, spec, t) / std::exp(lm) / t);
  return o;
}


double occupation_functional(const GridField& f, const GridField& V, const EvolutionSpec& spec, double t) {
  check_field(f, V);
  for (double x : f.values)
    if (!std::isfinite(x)) throw std::invalid_argument("occupation_functional: f must be bounded");
  const Grid& g = V.grid;
  const Point origin(g.dim(), 0.0);
  if (spec.engine == Engine::eigen) {
    step_count(spec, t);
    if (t == 0) return 0.0;
    const OccupationMoments o = occupation_moments(V, spec, t, {f});
    return o.means[0] * t * std::exp(o.log_mass);
  }
  const long n = step_count(spec, t);
  const double dt = spec.dt;
  const std::size_t N = V.values.size();
  GridField u = GridField::delta(g, origin);
  if (n == 0) return 0.0;
  std::vector<double> w(N, 0.0), full(N), half(N);
  for (std::size_t i = 0; i < N; ++i) {
    full[i] = std::exp(-dt * V.values[i]);
    half[i] = std::exp(-0.5 * dt * V.values[i]);
  }
  HeatStep heat(g, dt, spec.heat);
  const bool strang = spec.splitting == Splitting::strang;
  // S = one splitting step; trapezoid in time: w <- S(w + dt/2 f u) + dt/2 f S u
  auto step = [&](std::vector<double>& x) {
    if (strang) {
      for (std::size_t i = 0; i < N; ++i) x[i] *= half[i];
      heat(x);
      for (std::size_t i = 0; i < N; ++i) x[i] *= half[i];
    } else {
      for (std::size_t i = 0; i < N; ++i) x[i] *= full[i];
      heat(x);
    }
  };
  for (long s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < N; ++i) w[i] += 0.5 * dt * f.values[i] * u.values[i];
    step(w);
    step(u.values);
    for (std::size_t i = 0; i < N; ++i) w[i] += 0.5 * dt * f.values[i] * u.values[i];
  }
  double s = 0;
  for (double x : w) s += x;
  return s * g.cell_volume();
}

double occupation_functional(const GridField& f, const PointConfig& config, const EvolutionSpec& spec,
                             const Model& model, const GridOptions& opts, FarFieldPolicy far) {
  const Grid grid = evolution_grid(model, opts);
  if (f.values.size() != grid.size()) throw std::invalid_argument("occupation_functional: f grid mismatch");
  return occupation_functional(f, potential_for(config, model, grid, far), spec, model.t());
}

GroundstateReport groundstate_transform_check(double c, double T, const EvolutionSpec& spec, double h,
                                              double half_width) {
  if (!(c > 0) || !(T > 0)) throw std::invalid_argument("groundstate_transform_check: c, T > 0 required");
  const Grid g(Box::cube(1, half_width), h);
  const GridField V = GridField::from_function(g, [&](std::span<const double> x) { return c * x[0] * x[0]; });
  const Point origin{0.0};
  const GridField u = fk_evolve(V, spec, T, GridField::delta(g, origin));

  const double theta = std::sqrt(2 * c);
  const double lambda1 = std::sqrt(c / 2);
  auto psi = [&](double x) { return std::pow(theta / std::numbers::pi, 0.25) * std::exp(-0.5 * theta * x * x); };
  const double var = -std::expm1(-2 * theta * T) / (2 * theta);
  auto ou_density = [&](double y) { return std::exp(-y * y / (2 * var)) / std::sqrt(2 * std::numbers::pi * var); };
  auto exact = [&](double y) { return std::exp(-lambda1 * T) * psi(0) * ou_density(y) / psi(y); };

  GroundstateReport rep;
  rep.lambda1 = lambda1;
  double sup_diff = 0, sup_ex = 0;
  double cdf_num = 0, cdf_ex = 0, tot_num = 0, tot_ex = 0;
  std::vector<double> ex(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    ex[i] = exact(g.coord(0, i));
    sup_diff = std::max(sup_diff, std::abs(u.values[i] - ex[i]));
    sup_ex = std::max(sup_ex, std::abs(ex[i]));
    tot_num += u.values[i];
    tot_ex += ex[i];
  }
  rep.sup_rel_error = sup_diff / sup_ex;
  for (std::size_t i = 0; i < g.size(); ++i) {
    cdf_num += u.values[i] / tot_num;
    cdf_ex += ex[i] / tot_ex;
    rep.cdf_distance = std::max(rep.cdf_distance, std::abs(cdf_num - cdf_ex));
  }
  rep.mass_numeric = u.integral();
  // E^OU[1/psi(X_T)] for X_T ~ N(0, var), by quadrature over +-12 sd
  const double sd = std::sqrt(var);
  QuadratureSpec q{1e-14, 1e-12, 2000};
  const double e_inv_psi =
      integrate_checked([&](double y) { return ou_density(y) / psi(y); }, -12 * sd, 12 * sd, q, "groundstate_check");
  rep.mass_identity = std::exp(-lambda1 * T) * psi(0) * e_inv_psi;
  rep.mass_rel_error = std::abs(rep.mass_numeric - rep.mass_identity) / rep.mass_identity;
  return rep;
}

}  // namespace fklab

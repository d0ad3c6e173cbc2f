#include "fklab/annealed.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fklab/parallel.hpp"

namespace fklab {

double far_field_margin(const Model& model, const FarFieldPolicy& far) {
  const int d = model.dim();
  const double a = model.alpha();
  const double sd = model.constants().sigma_d;
  const double tol = 0.5 * (far.tolerance > 0 ? far.tolerance : 1e-3 * model.h_t());
  if (far.mean_shift) {
    // sqrt(sigma_d R^{d-2a} / (2a-d)) <= tol
    return std::pow(tol * tol * (2 * a - d) / sd, 1.0 / (d - 2 * a));
  }
  return std::pow(tol * (a - d) / sd, 1.0 / (d - a));
}

Box sampling_box(const Model& model, const Box& window, const AnnealedOptions& opts) {
  const double m = opts.sampling_margin > 0 ? opts.sampling_margin : far_field_margin(model, opts.far);
  std::vector<double> hw = window.half_widths;
  for (double& w : hw) w += m;
  return Box(window.center, hw);
}

std::unique_ptr<EnvironmentSampler> annealed_sampler(const Model& model, const Box& sampling, std::uint64_t seed,
                                                     const AnnealedOptions& opts) {
  if (opts.importance) return make_annealed_proposal(model, sampling, seed, opts.quad);
  return std::make_unique<HomogeneousSampler>(sampling, seed);
}

AnnealedEstimate to_estimate(const LogMeanEstimate& e) {
  AnnealedEstimate a;
  a.log_value = e.log_mean;
  a.se_log = e.se_log;
  a.value = std::exp(e.log_mean);
  a.lo = std::exp(e.log_mean - 1.959963984540054 * e.se_log);
  a.hi = std::exp(e.log_mean + 1.959963984540054 * e.se_log);
  a.ess = e.ess;
  a.n = e.n;
  return a;
}

AnnealedEstimate annealed_partition(const Model& model, const EvolutionSpec& spec, std::size_t n_samples,
                                    std::uint64_t seed, const AnnealedOptions& opts) {
  if (n_samples < 2) throw std::invalid_argument("annealed_partition: n_samples >= 2 required");
  const Grid grid = evolution_grid(model, opts.grid);
  const auto sampler = annealed_sampler(model, sampling_box(model, grid.box(), opts), seed, opts);
  std::vector<double> a(n_samples);
  parallel_for(n_samples, opts.threads, [&](std::size_t i) {
    const EnvironmentDraw env = sampler->draw(i);
    a[i] = env.log_weight + quenched_log_partition(env.config, spec, model, opts.grid, opts.far);
  });
  return to_estimate(log_mean_exp(a));
}

std::vector<double> confinement_log_masses(const GridField& V, const EvolutionSpec& spec, double t,
                                           std::span<const double> radii) {
  const Grid& g = V.grid;
  if (g.dim() != 1) throw std::invalid_argument("confinement: d = 1 only");
  const SchrodingerOperator op = assemble(V);
  const double origin = 0.0;
  auto log_mass = [&](const SchrodingerOperator& o) {
    const std::size_t node = o.grid().nearest_node(std::span<const double>(&origin, 1));
    if (spec.engine == Engine::eigen) {
      step_count(spec, t);
      return SpectralPropagator(o, t).log_mass(node, t);
    }
    const ScaledField u = fk_evolve_scaled(GridField{o.grid(), o.potential()}, spec, t,
                                           GridField::delta(o.grid(), std::span<const double>(&origin, 1)));
    return u.log_scale + std::log(u.field.integral());
  };
  std::vector<double> out;
  out.push_back(log_mass(op));
  const double R = g.box().half_widths[0];
  for (double L : radii) {
    if (!(L > 0)) throw std::invalid_argument("confinement: radius must be positive");
    if (L >= R) {
      out.push_back(out.front());
      continue;
    }
    out.push_back(log_mass(op.restricted(0.0, L)));
  }
  return out;
}

ConfinementCurve confinement_curve(const Model& model, const EvolutionSpec& spec, std::span<const double> radii,
                                   std::size_t n_samples, std::uint64_t seed, const AnnealedOptions& opts) {
  if (model.dim() != 1) throw std::invalid_argument("confinement_curve: d = 1 only");
  if (n_samples < 2) throw std::invalid_argument("confinement_curve: n_samples >= 2 required");
  const Grid grid = evolution_grid(model, opts.grid);
  const auto sampler = annealed_sampler(model, sampling_box(model, grid.box(), opts), seed, opts);
  const std::size_t K = radii.size();
  std::vector<std::vector<double>> rows(n_samples);
  parallel_for(n_samples, opts.threads, [&](std::size_t i) {
    const EnvironmentDraw env = sampler->draw(i);
    const PotentialView view(env.config, grid.box(), model, opts.far);
    std::vector<double> lm = confinement_log_masses(potential_on_grid(view, grid), spec, model.t(), radii);
    for (double& x : lm) x += env.log_weight;
    rows[i] = std::move(lm);
  });
  ConfinementCurve c;
  c.radii.assign(radii.begin(), radii.end());
  std::vector<double> den(n_samples), num(n_samples), vals;
  for (std::size_t i = 0; i < n_samples; ++i) den[i] = rows[i][0];
  c.partition = to_estimate(log_mean_exp(den));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < n_samples; ++i) num[i] = rows[i][k + 1];
    const RatioEstimate r = paired_ratio(num, den);
    ConfinementEstimate e;
    e.L = radii[k];
    e.value = r.value;
    e.se = r.se;
    e.lo = std::max(0.0, r.value - 1.959963984540054 * r.se);
    e.hi = std::min(1.0, r.value + 1.959963984540054 * r.se);
    c.prob.push_back(e);
    vals.push_back(r.value);
  }
  c.median_radius = crossing_radius(c.radii, vals);
  return c;
}

ConfinementEstimate confinement_prob(const Model& model, const EvolutionSpec& spec, double L, std::size_t n_samples,
                                     std::uint64_t seed, const AnnealedOptions& opts) {
  const double radii[1] = {L};
  return confinement_curve(model, spec, radii, n_samples, seed, opts).prob.front();
}

double crossing_radius(std::span<const double> radii, std::span<const double> values, double level) {
  for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
    if (values[k] < level && values[k + 1] >= level) {
      const double f = (level - values[k]) / (values[k + 1] - values[k]);
      return std::exp(std::log(radii[k]) + f * (std::log(radii[k + 1]) - std::log(radii[k])));
    }
  }
  if (!radii.empty() && values[0] >= level) return radii[0];
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace fklab

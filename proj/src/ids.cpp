#include "fklab/ids.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <stdexcept>

#include "fklab/environment.hpp"
#include "fklab/grid.hpp"
#include "fklab/parallel.hpp"
#include "fklab/spectral.hpp"
#include "fklab/stats.hpp"

namespace fklab {

double lifshitz_tilt_time(double lambda, int d, double alpha) {
  if (!(lambda > 0)) throw std::invalid_argument("lifshitz_tilt_time: lambda > 0 required");
  const ConstantsBundle c = compute_constants(d, alpha);
  const double p1 = (alpha - d) / alpha, p2 = (alpha - d + 2) / (2 * alpha);
  const double b1 = c.a1 * d / alpha, b2 = c.a2 * (alpha + d - 2) / (2 * alpha);
  // f is decreasing in log t
  auto f = [&](double lt) { return b1 * std::exp(-p1 * lt) + b2 * std::exp(-p2 * lt) - lambda; };
  double lo = -50, hi = 50;
  if (f(lo) < 0 || f(hi) > 0) throw std::invalid_argument("lifshitz_tilt_time: lambda out of range");
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t it = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, it);
  return std::exp(0.5 * (r.first + r.second));
}

double lifshitz_minus_log(double lambda, int d, double alpha) {
  const ConstantsBundle c = compute_constants(d, alpha);
  return c.l1 * std::pow(lambda, -d / (alpha - d)) + c.l2 * std::pow(lambda, -(alpha + d - 2) / (2 * (alpha - d)));
}

IdsCurve ids_estimate(std::span<const double> lambdas, int d, double alpha, double box_size, std::size_t n_samples,
                      std::uint64_t seed, const IdsOptions& opts) {
  if (!(box_size > 0)) throw std::invalid_argument("ids_estimate: box_size > 0 required");
  if (n_samples < 2) throw std::invalid_argument("ids_estimate: n_samples >= 2 required");
  ModelParams{d, alpha, 1.0}.validate();
  IdsCurve curve;
  curve.box_size = box_size;
  const Box domain = Box::cube(d, 0.5 * box_size);
  const double volume = domain.volume();
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    const double lambda = lambdas[li];
    const double tstar = lifshitz_tilt_time(lambda, d, alpha);
    const Model model({d, alpha, tstar});
    const double r = model.scale();
    const double h = opts.h > 0 ? opts.h : std::min(0.1, r / 20);
    const Grid grid = Grid::fitted(domain, h);
    FarFieldPolicy far{opts.far_tolerance > 0 ? opts.far_tolerance : 1e-2 * lambda, true};
    // margin where the omitted far-field spread is half the tolerance
    const double sd = model.constants().sigma_d;
    const double margin = std::pow(0.25 * far.tolerance * far.tolerance * (2 * alpha - d) / sd, 1.0 / (d - 2 * alpha));
    std::vector<double> hw(d, 0.5 * box_size + margin);
    const Box sbox(Point(d, 0.0), hw);
    const std::uint64_t sub = mix_seed(seed, li);
    std::unique_ptr<EnvironmentSampler> sampler;
    if (opts.importance) {
      DiscreteMeasure mu0 = gauss_hermite_nu(model, r, Point(d, 0.0));
      sampler = std::make_unique<TiltedMixtureSampler>(model, std::move(mu0), CenterLaw::uniform(domain, r / 4), sbox,
                                                       sub, opts.quad);
    } else {
      sampler = std::make_unique<HomogeneousSampler>(sbox, sub);
    }
    std::vector<double> counts(n_samples), logw(n_samples);
    parallel_for(n_samples, opts.threads, [&](std::size_t i) {
      const EnvironmentDraw env = sampler->draw(i);
      const PotentialView view(env.config, domain, model, far);
      GridField V = GridField::zeros(grid);
      view.evaluate_many(grid.nodes(), V.values);
      counts[i] = static_cast<double>(count_eigenvalues_below(assemble(V), lambda));
      logw[i] = env.log_weight;
    });
    IdsPoint p;
    p.lambda = lambda;
    p.n = n_samples;
    p.tilt_time = opts.importance ? tstar : 0;
    for (double c : counts) p.hits += c > 0;
    if (opts.importance) {
      std::vector<double> a;
      for (std::size_t i = 0; i < n_samples; ++i)
        a.push_back(counts[i] > 0 ? logw[i] + std::log(counts[i]) : -INFINITY);
      if (p.hits >= 2) {
        // zero-count samples still enter the mean
        std::vector<double> finite;
        for (double x : a)
          if (std::isfinite(x)) finite.push_back(x);
        const LogMeanEstimate e = log_mean_exp(finite);
        const double m = *std::max_element(finite.begin(), finite.end());
        std::vector<double> v(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) v[i] = std::isfinite(a[i]) ? std::exp(a[i] - m) : 0.0;
        const double mu = mean(v), se = std::sqrt(variance(v) / static_cast<double>(n_samples));
        p.log_N = m + std::log(mu) - std::log(volume);
        p.se_log = se / mu;
        p.ess = e.ess;
      } else {
        p.log_N = -INFINITY;
        p.se_log = INFINITY;
      }
    } else {
      const double mu = mean(counts);
      const double se = std::sqrt(variance(counts) / static_cast<double>(n_samples));
      p.log_N = mu > 0 ? std::log(mu / volume) : -INFINITY;
      p.se_log = mu > 0 ? se / mu : INFINITY;
      p.ess = static_cast<double>(n_samples);
      if (p.hits == 0) {
        // binomial bound on the hit rate bounds the mean count from below only; report the Wilson upper end
        const Interval w = wilson_interval(0, n_samples);
        p.N = 0;
        p.lo = 0;
        p.hi = w.hi / volume;
        curve.points.push_back(p);
        continue;
      }
    }
    p.N = std::exp(p.log_N);
    p.lo = std::exp(p.log_N - 1.959963984540054 * p.se_log);
    p.hi = std::exp(p.log_N + 1.959963984540054 * p.se_log);
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace fklab

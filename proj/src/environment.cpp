#include "fklab/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fklab/laplace.hpp"

namespace fklab {

double log_sum_exp(const std::vector<double>& v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

EnvironmentDraw HomogeneousSampler::draw(std::uint64_t replica) const {
  return {sample_homogeneous(box_, 1.0, seed_, replica), 0.0, {}};
}

CenterLaw CenterLaw::single(Point c) {
  CenterLaw law;
  law.dim = static_cast<int>(c.size());
  law.centers = std::move(c);
  law.probs = {1.0};
  return law;
}

CenterLaw CenterLaw::gaussian(int d, double sd, double spacing, double half_range) {
  if (!(sd > 0) || !(spacing > 0) || !(half_range > 0)) throw std::invalid_argument("CenterLaw::gaussian: bad sizes");
  const int n = static_cast<int>(std::floor(half_range / spacing));
  std::vector<double> axis, w;
  for (int i = -n; i <= n; ++i) {
    axis.push_back(i * spacing);
    w.push_back(std::exp(-0.5 * (i * spacing) * (i * spacing) / (sd * sd)));
  }
  CenterLaw law;
  law.dim = d;
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= axis.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    double p = 1;
    std::vector<double> c(d);
    for (int k = d - 1; k >= 0; --k) {
      c[k] = axis[rem % axis.size()];
      p *= w[rem % axis.size()];
      rem /= axis.size();
    }
    law.centers.insert(law.centers.end(), c.begin(), c.end());
    law.probs.push_back(p);
  }
  double s = 0;
  for (double p : law.probs) s += p;
  for (double& p : law.probs) p /= s;
  return law;
}

CenterLaw CenterLaw::uniform(const Box& region, double spacing) {
  if (!(spacing > 0)) throw std::invalid_argument("CenterLaw::uniform: spacing > 0 required");
  const int d = region.dim();
  std::vector<std::vector<double>> axes(d);
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) {
    const double w = 2 * region.half_widths[k];
    const long n = std::max(1L, static_cast<long>(std::ceil(w / spacing - 1e-9)));
    for (long i = 0; i < n; ++i) axes[k].push_back(region.lower(k) + (i + 0.5) * w / n);
    total *= axes[k].size();
  }
  CenterLaw law;
  law.dim = d;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    std::vector<double> c(d);
    for (int k = d - 1; k >= 0; --k) {
      c[k] = axes[k][rem % axes[k].size()];
      rem /= axes[k].size();
    }
    law.centers.insert(law.centers.end(), c.begin(), c.end());
    law.probs.push_back(1.0 / static_cast<double>(total));
  }
  return law;
}

TiltedMixtureSampler::TiltedMixtureSampler(const Model& model, DiscreteMeasure mu0, CenterLaw law, Box box,
                                           std::uint64_t seed, const QuadratureSpec& quad)
    : model_(model), mu0_(std::move(mu0)), law_(std::move(law)), box_(std::move(box)), seed_(seed) {
  const int d = model_.dim();
  if (mu0_.dim() != d || law_.dim != d || box_.dim() != d)
    throw std::invalid_argument("TiltedMixtureSampler: dimension mismatch");
  if (law_.size() == 0) throw std::invalid_argument("TiltedMixtureSampler: empty center law");
  double acc = 0;
  for (std::size_t j = 0; j < law_.size(); ++j) {
    std::span<const double> c(law_.centers.data() + j * d, d);
    const DiscreteMeasure mu = mu0_.translated(c);
    log_norm_.push_back(std::log(law_.probs[j]) + exact_log_laplace_in_box(mu, model_, box_, quad));
    acc += law_.probs[j];
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

double TiltedMixtureSampler::log_dq_dP(const PointConfig& cfg) const {
  const int d = model_.dim();
  const std::size_t J = law_.size(), A = mu0_.size(), n = cfg.size();
  const ShapeKernel& k = model_.kernel();
  std::vector<double> pos(J * A * d);
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t a = 0; a < A; ++a)
      for (int c = 0; c < d; ++c) pos[(j * A + a) * d + c] = law_.centers[j * d + c] + mu0_.atom(a)[c];
  std::vector<double> vsum(J * A, 0.0);
  if (d == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const double y = cfg.coords[i];
      for (std::size_t p = 0; p < J * A; ++p) {
        const double z = pos[p] - y;
        vsum[p] += k(z * z);
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double* y = cfg.coords.data() + i * d;
      for (std::size_t p = 0; p < J * A; ++p) {
        double r2 = 0;
        for (int c = 0; c < d; ++c) r2 += (pos[p * d + c] - y[c]) * (pos[p * d + c] - y[c]);
        vsum[p] += k(r2);
      }
    }
  }
  std::vector<double> terms(J);
  for (std::size_t j = 0; j < J; ++j) {
    double s = 0;
    for (std::size_t a = 0; a < A; ++a) s += mu0_.weight(a) * vsum[j * A + a];
    terms[j] = log_norm_[j] - model_.t() * s;
  }
  return log_sum_exp(terms);
}

EnvironmentDraw TiltedMixtureSampler::draw(std::uint64_t replica) const {
  Philox rng(seed_, replica);
  const double u = rng.uniform();
  const std::size_t j = std::min<std::size_t>(
      std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin(), law_.size() - 1);
  const int d = model_.dim();
  Point c(law_.centers.begin() + j * d, law_.centers.begin() + (j + 1) * d);
  EnvironmentDraw out;
  out.config = sample_tilted(mu0_.translated(c), model_, box_, rng);
  out.log_weight = -log_dq_dP(out.config);
  out.center = std::move(c);
  return out;
}

std::unique_ptr<EnvironmentSampler> make_annealed_proposal(const Model& model, const Box& box, std::uint64_t seed,
                                                           const QuadratureSpec& quad) {
  const int d = model.dim();
  const double r = model.scale();
  DiscreteMeasure mu0 = gauss_hermite_nu(model, r, Point(d, 0.0));
  const double sd = 1.5 * r / std::sqrt(model.ou_rate());
  CenterLaw law = CenterLaw::gaussian(d, sd, r / 8, 4 * sd);
  return std::make_unique<TiltedMixtureSampler>(model, std::move(mu0), std::move(law), box, seed, quad);
}

}  // namespace fklab

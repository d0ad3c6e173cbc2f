#include "fklab/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fklab {

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

double mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean: empty sample");
  return pairwise_sum(v) / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  if (v.size() < 2) throw std::invalid_argument("variance: need two samples");
  const double m = mean(v);
  std::vector<double> d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = (v[i] - m) * (v[i] - m);
  return pairwise_sum(d) / static_cast<double>(v.size() - 1);
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0 && q <= 1)) throw std::invalid_argument("quantile: q in [0,1]");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (pos - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

MomentSummary moment_summary(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n < 4) throw std::invalid_argument("moment_summary: need at least 4 samples");
  MomentSummary s;
  s.n = n;
  s.mean = mean(v);
  std::vector<double> d2(n), d3(n), d4(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = v[i] - s.mean;
    d2[i] = d * d;
    d3[i] = d2[i] * d;
    d4[i] = d2[i] * d2[i];
  }
  const double nn = static_cast<double>(n);
  const double m2 = pairwise_sum(d2) / nn, m3 = pairwise_sum(d3) / nn, m4 = pairwise_sum(d4) / nn;
  s.variance = m2 * nn / (nn - 1);
  s.se_mean = std::sqrt(s.variance / nn);
  const double g1 = m3 / std::pow(m2, 1.5);
  const double g2 = m4 / (m2 * m2) - 3;
  s.skewness = std::sqrt(nn * (nn - 1)) / (nn - 2) * g1;
  s.excess_kurtosis = (nn - 1) / ((nn - 2) * (nn - 3)) * ((nn + 1) * g2 + 6);
  s.se_skewness = std::sqrt(6 * nn * (nn - 1) / ((nn - 2) * (nn + 1) * (nn + 3)));
  s.se_kurtosis = 2 * s.se_skewness * std::sqrt((nn * nn - 1) / ((nn - 3) * (nn + 5)));
  return s;
}

LogMeanEstimate log_mean_exp(std::span<const double> a) {
  const std::size_t n = a.size();
  if (n < 2) throw std::invalid_argument("log_mean_exp: need two samples");
  const double m = *std::max_element(a.begin(), a.end());
  if (!std::isfinite(m)) throw std::invalid_argument("log_mean_exp: non-finite log sample");
  std::vector<double> e(n), e2(n);
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = std::exp(a[i] - m);
    e2[i] = e[i] * e[i];
  }
  const double S = pairwise_sum(e);
  LogMeanEstimate out;
  out.n = n;
  out.log_mean = m + std::log(S / static_cast<double>(n));
  out.ess = S * S / pairwise_sum(e2);
  // jackknife on the log of the mean
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rest = std::max(S - e[i], S * 1e-300);
    loo[i] = std::log(rest / static_cast<double>(n - 1));
  }
  const double lm = mean(loo);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = (loo[i] - lm) * (loo[i] - lm);
  out.se_log = std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n) * pairwise_sum(dev));
  return out;
}

RatioEstimate paired_ratio(std::span<const double> log_num, std::span<const double> log_den) {
  const std::size_t n = log_den.size();
  if (log_num.size() != n || n < 2) throw std::invalid_argument("paired_ratio: need matching samples (n >= 2)");
  const double m = *std::max_element(log_den.begin(), log_den.end());
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = std::exp(log_num[i] - m);
    b[i] = std::exp(log_den[i] - m);
  }
  const double A = pairwise_sum(a), B = pairwise_sum(b);
  RatioEstimate out;
  out.n = n;
  out.value = A / B;
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double den = B - b[i];
    loo[i] = den > 0 ? (A - a[i]) / den : out.value;
  }
  const double lm = mean(loo);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = (loo[i] - lm) * (loo[i] - lm);
  out.se = std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n) * pairwise_sum(dev));
  return out;
}

LinearFit fit_linear(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
  const std::size_t n = x.size();
  if (y.size() != n || (!w.empty() && w.size() != n)) throw std::invalid_argument("fit: size mismatch");
  std::size_t used = 0;
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w.empty() ? 1.0 : w[i];
    if (wi < 0 || !std::isfinite(wi)) throw std::invalid_argument("fit: weights must be finite and >= 0");
    if (wi == 0) continue;
    ++used;
    sw += wi;
    sx += wi * x[i];
    sy += wi * y[i];
  }
  if (used < 3) throw std::invalid_argument("fit: need at least 3 weighted points");
  const double xm = sx / sw, ym = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w.empty() ? 1.0 : w[i];
    sxx += wi * (x[i] - xm) * (x[i] - xm);
    sxy += wi * (x[i] - xm) * (y[i] - ym);
  }
  if (!(sxx > 1e-12 * sw * std::max(1.0, xm * xm))) throw std::invalid_argument("fit: degenerate x-range");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = ym - f.slope * xm;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w.empty() ? 1.0 : w[i];
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += wi * r * r;
  }
  // residual variance scaled to the mean weight
  const double s2 = rss / (static_cast<double>(used) - 2) * (static_cast<double>(used) / sw);
  f.stderr_slope = std::sqrt(s2 * (sw / static_cast<double>(used)) / sxx);
  f.stderr_intercept = std::sqrt(s2 * (sw / static_cast<double>(used)) * (1 / sw + xm * xm / sxx));
  return f;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool used = w.empty() || w[i] > 0;
    if (used && !(x[i] > 0 && y[i] > 0)) throw std::invalid_argument("fit_power_law: x, y must be positive");
    lx[i] = x[i] > 0 ? std::log(x[i]) : 0;
    ly[i] = y[i] > 0 ? std::log(y[i]) : 0;
  }
  const LinearFit f = fit_linear(lx, ly, w);
  PowerLawFit p;
  p.slope = f.slope;
  p.intercept = f.intercept;
  p.stderr_slope = f.stderr_slope;
  p.stderr_intercept = f.stderr_intercept;
  p.n = w.empty() ? x.size() : static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](double v) { return v > 0; }));
  return p;
}

double chi2_survival(double x, double dof) {
  if (!(dof > 0)) throw std::invalid_argument("chi2_survival: dof > 0");
  if (x <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2, x / 2);
}

double normal_quantile(double p) { return boost::math::quantile(boost::math::normal(), p); }

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) throw std::invalid_argument("wilson_interval: n > 0");
  const double nn = static_cast<double>(n), p = static_cast<double>(k) / nn;
  const double den = 1 + z * z / nn;
  const double c = (p + z * z / (2 * nn)) / den;
  const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / den;
  return {std::max(0.0, c - half), std::min(1.0, c + half)};
}

}  // namespace fklab

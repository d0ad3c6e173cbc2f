#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fklab {

// Pairwise summation; order-fixed so results do not depend on scheduling.
double pairwise_sum(std::span<const double> v);
double mean(std::span<const double> v);
double variance(std::span<const double> v);  // unbiased
double median(std::vector<double> v);
double quantile(std::vector<double> v, double q);  // linear interpolation

struct MomentSummary {
  std::size_t n = 0;
  double mean = 0, variance = 0, se_mean = 0;
  double skewness = 0, se_skewness = 0;
  double excess_kurtosis = 0, se_kurtosis = 0;
};
// Sample skewness G1 and excess kurtosis G2 with their normal-theory standard errors.
MomentSummary moment_summary(std::span<const double> v);

// Estimate of log E[X] from log-samples a_i = log X_i (X_i >= 0 weighted by importance weights).
struct LogMeanEstimate {
  double log_mean = 0;
  double se_log = 0;     // jackknife standard error of log_mean
  double ess = 0;        // effective sample size of the weights exp(a_i)
  std::size_t n = 0;
};
LogMeanEstimate log_mean_exp(std::span<const double> a);

// Paired ratio sum_i exp(num_i) / sum_i exp(den_i) with jackknife standard error.
struct RatioEstimate {
  double value = 0;
  double se = 0;
  std::size_t n = 0;
};
RatioEstimate paired_ratio(std::span<const double> log_num, std::span<const double> log_den);

struct PowerLawFit {
  double slope = 0, intercept = 0;  // log y = intercept + slope log x
  double stderr_slope = 0, stderr_intercept = 0;
  std::size_t n = 0;
};
// Weighted least squares on (log x, log y). Needs >= 3 positively weighted points with distinct x.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y, std::span<const double> w = {});

struct LinearFit {
  double slope = 0, intercept = 0, stderr_slope = 0, stderr_intercept = 0;
};
LinearFit fit_linear(std::span<const double> x, std::span<const double> y, std::span<const double> w = {});

double chi2_survival(double x, double dof);
double normal_quantile(double p);
struct Interval {
  double lo = 0, hi = 0;
};
Interval wilson_interval(std::size_t successes, std::size_t n, double z = 1.959963984540054);

}  // namespace fklab

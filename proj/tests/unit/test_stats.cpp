#include "doctest.h"

#include <cmath>

#include "fklab/rng.hpp"
#include "fklab/stats.hpp"

using namespace fklab;

TEST_CASE("moment summary on small samples") {
  const std::vector<double> u{1, 2, 3, 4, 5};
  const MomentSummary m = moment_summary(u);
  CHECK(m.mean == doctest::Approx(3));
  CHECK(m.variance == doctest::Approx(2.5));
  CHECK(m.skewness == doctest::Approx(0).epsilon(1e-12));
  CHECK(m.excess_kurtosis == doctest::Approx(-1.2));
  const std::vector<double> s{0, 0, 0, 1};
  CHECK(moment_summary(s).skewness == doctest::Approx(2.0));
}

TEST_CASE("order statistics") {
  CHECK(median({3, 1, 2}) == 2);
  CHECK(median({4, 1, 2, 3}) == 2.5);
  CHECK(quantile({0, 10}, 0.25) == doctest::Approx(2.5));
  std::vector<double> v(1001, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.1).epsilon(1e-14));
}

TEST_CASE("power-law fit") {
  std::vector<double> x, y;
  for (int i = 1; i <= 6; ++i) {
    x.push_back(i * 1.5);
    y.push_back(7 * std::pow(i * 1.5, 2.5));
  }
  PowerLawFit f = fit_power_law(x, y);
  CHECK(f.slope == doctest::Approx(2.5));
  CHECK(std::exp(f.intercept) == doctest::Approx(7));
  std::vector<double> w(x.size(), 1.0);
  y[2] *= 50;
  w[2] = 0;
  f = fit_power_law(x, y, w);
  CHECK(f.slope == doctest::Approx(2.5));
  const std::vector<double> two{1, 2};
  CHECK_THROWS(fit_power_law(two, two));

  // slope recovery under 5% multiplicative noise
  int good = 0;
  for (int seed = 0; seed < 100; ++seed) {
    Philox rng(123, seed);
    std::vector<double> xs, ys;
    for (int i = 0; i < 10; ++i) {
      const double xi = std::pow(10.0, 0.3 * i);
      xs.push_back(xi);
      ys.push_back(3 * std::pow(xi, -1.2) * std::exp(0.05 * normal_draw(rng)));
    }
    good += std::abs(fit_power_law(xs, ys).slope + 1.2) < 0.05;
  }
  CHECK(good >= 95);
}

TEST_CASE("log-mean and ratio estimators") {
  const std::vector<double> a(50, -3.0);
  const LogMeanEstimate e = log_mean_exp(a);
  CHECK(e.log_mean == doctest::Approx(-3));
  CHECK(e.se_log == doctest::Approx(0).epsilon(1e-12));
  CHECK(e.ess == doctest::Approx(50));
  const std::vector<double> b{0.0, std::log(3.0)};
  CHECK(log_mean_exp(b).log_mean == doctest::Approx(std::log(2.0)));
  CHECK(log_mean_exp(b).ess == doctest::Approx(16.0 / 10.0));

  std::vector<double> num, den;
  for (int i = 0; i < 20; ++i) {
    den.push_back(0.1 * i);
    num.push_back(0.1 * i + std::log(2.0));
  }
  const RatioEstimate r = paired_ratio(num, den);
  CHECK(r.value == doctest::Approx(2));
  CHECK(r.se == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("distribution helpers") {
  CHECK(chi2_survival(3.0, 2) == doctest::Approx(std::exp(-1.5)));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985));
  const Interval w = wilson_interval(5, 10);
  CHECK(w.lo + w.hi == doctest::Approx(1.0));
  CHECK(w.lo < 0.5);
  const Interval z = wilson_interval(0, 20);
  CHECK(z.lo == doctest::Approx(0).epsilon(1e-12));
  CHECK(z.hi > 0);
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const LinearFit lf = fit_linear(x, y);
  CHECK(lf.slope == doctest::Approx(2));
  CHECK(lf.intercept == doctest::Approx(1));
}

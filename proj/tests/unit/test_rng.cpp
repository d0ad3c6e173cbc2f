#include "doctest.h"

#include <cmath>
#include <vector>

#include "fklab/rng.hpp"
#include "fklab/stats.hpp"

using namespace fklab;

TEST_CASE("Philox is deterministic per (seed, stream) and streams differ") {
  Philox a(7, 3), b(7, 3), c(7, 4);
  bool differ = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differ = differ || x != c();
  }
  CHECK(differ);
}

TEST_CASE("uniform variates have the right first two moments") {
  Philox g(1, 0);
  std::vector<double> u(200000);
  for (double& x : u) x = g.uniform();
  CHECK(mean(u) == doctest::Approx(0.5).epsilon(0.01));
  CHECK(variance(u) == doctest::Approx(1.0 / 12).epsilon(0.01));
  for (int i = 0; i < 1000; ++i) CHECK(g.uniform_pos() > 0);
}

TEST_CASE("Poisson and normal draws") {
  Philox g(2, 0);
  for (double lam : {0.3, 4.0, 250.0}) {
    std::vector<double> v(50000);
    for (double& x : v) x = double(poisson_draw(g, lam));
    // 5 standard errors
    CHECK(std::abs(mean(v) - lam) < 5 * std::sqrt(lam / v.size()));
    CHECK(variance(v) == doctest::Approx(lam).epsilon(0.05));
  }
  std::vector<double> z(100000);
  for (double& x : z) x = normal_draw(g);
  CHECK(std::abs(mean(z)) < 0.02);
  CHECK(variance(z) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("mix_seed separates tags") {
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));
  CHECK(mix_seed(5, 9) == mix_seed(5, 9));
}

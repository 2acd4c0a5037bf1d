#include <algorithm>
#include <cmath>
#include <random>

#include "common.hpp"
#include "embed/sim.hpp"
#include "embed/solve.hpp"
#include "embed/verify.hpp"

using namespace embed;
using testing::dx_over_x2;

TEST_CASE("Kolmogorov quantile") {
  CHECK(kolmogorov_quantile(0.01) == doctest::Approx(1.6276).epsilon(1e-4));
  CHECK(kolmogorov_quantile(0.05) == doctest::Approx(1.3581).epsilon(1e-4));
}

TEST_CASE("KS statistic") {
  const TargetMeasure mu = target::double_exponential(1, 1);
  const SampleBatch batch = sample_exact(solve(mu, dx_over_x2()).rule, 31, 100000);
  const GofReport ok = ks_statistic(batch, mu);
  CHECK(ok.pass);

  std::vector<double> v = batch.values();
  double prev = -1.0;
  for (double shift : {0.0, 0.1, 0.5, 1.0}) {
    std::vector<double> s = v;
    for (double& x : s) x += shift;
    const double d = ks_statistic(s, mu).ks_distance;
    CHECK(d >= prev);
    prev = d;
    if (shift == 0.5) CHECK_FALSE(ks_statistic(s, mu).pass);
  }

  std::vector<double> p = v;
  std::shuffle(p.begin(), p.end(), std::mt19937_64(4));
  CHECK(ks_statistic(p, mu).ks_distance == ks_statistic(v, mu).ks_distance);
  CHECK(ks_two_sample(v, v) == 0.0);
}

TEST_CASE("atoms are checked separately") {
  const TargetMeasure two = target::from_atoms({{-1, 0.5}, {1, 0.5}});
  const GofReport g = ks_statistic(sample_exact(solve(two, dx_over_x2()).rule, 2, 40000), two);
  CHECK(g.continuous_size == 0);
  REQUIRE(g.atoms.size() == 2);
  for (const AtomCheck& a : g.atoms) CHECK(std::abs(a.z) <= 3.0);
  CHECK(g.pass);
  std::vector<double> skewed(30000, 1.0);
  skewed.resize(40000, -1.0);
  CHECK_FALSE(ks_statistic(skewed, two).pass);
}

TEST_CASE("survival gap shrinks like 1/sqrt(N)") {
  const StoppingRule rule = solve(target::double_exponential(1, 1), dx_over_x2()).rule;
  double small = 0.0, large = 0.0;
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    small += survival_compare(sample_exact(rule, 100 + rep, 10000), rule.law());
    large += survival_compare(sample_exact(rule, 200 + rep, 40000), rule.law());
  }
  const double ratio = large / small;
  CHECK(ratio >= 0.3);
  CHECK(ratio <= 0.75);
}

TEST_CASE("rescale invariance") {
  const auto grid = testing::log_grid(1e-3, 8.0, 50);
  CHECK(rescale_invariance(target::double_exponential(1, 2), dx_over_x2(), 2.0, grid) <= 1e-8);
  CHECK(rescale_invariance(target::f_uniform(1, 1), dx_over_x2(), 0.5, grid) <= 1e-8);
  CHECK(rescale_invariance(target::gaussian(1.0), dx_over_x2(), 1.0, grid) == 0.0);
}

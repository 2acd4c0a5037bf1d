#pragma once

#include <functional>
#include <string>
#include <vector>

#include "embed/measures.hpp"
#include "embed/sim.hpp"
#include "embed/solve.hpp"

namespace embed {

struct AtomCheck {
  double location = 0.0;
  double expected = 0.0;  // mu mass
  double observed = 0.0;  // empirical frequency
  double z = 0.0;         // binomial z-score
};

struct GofReport {
  double ks_distance = 0.0;  // continuous part only
  std::size_t sample_size = 0;
  std::size_t continuous_size = 0;
  double level = 0.01;
  double critical_value = 0.0;
  std::vector<AtomCheck> atoms;
  bool pass = false;

  std::string to_json() const;
  std::string summary() const;
};

/// Inverse of the Kolmogorov limit law: P(sup|B^0| > c) = level.
double kolmogorov_quantile(double level);

/// One-sample KS against the continuous part of mu, atoms compared separately.
GofReport ks_statistic(const SampleBatch& batch, const TargetMeasure& mu, double level = 0.01);
GofReport ks_statistic(std::vector<double> values, const TargetMeasure& mu, double level = 0.01);

/// Two-sample KS distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
double ks_two_sample(const SampleBatch& a, const SampleBatch& b);

/// sup_l |#{L > l}/N - survival(l)|, exact for continuous survival.
double survival_compare(const SampleBatch& batch, const std::function<double(double)>& survival);
double survival_compare(const SampleBatch& batch, const LocalTimeLaw& law);

/// max over the grid of |phi^{c n}(l) - phi^n(c l)| on both sides.
double rescale_invariance(const TargetMeasure& mu, const CharMeasure& n, double c, const std::vector<double>& grid,
                          const EmbedOptions& opts = {});

/// max over the grid of |P(F_T >= y) - mu([y, inf))| (y > 0) and
/// |P(F_T <= y) - mu((-inf, y])| (y < 0).
double round_trip_error(const StoppedLaw& law, const TargetMeasure& mu, const std::vector<double>& grid);

}  // namespace embed

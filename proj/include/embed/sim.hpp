#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "embed/rule.hpp"

namespace embed {

struct Record {
  double l = 0.0;      // local time at the stop, in the rule's normalization
  double value = 0.0;  // stopped value
  StopSide side = StopSide::pos;
};

struct SampleMeta {
  std::string sampler;  // exact | ppp | walk
  std::uint64_t seed = 0;
  std::size_t count = 0;
  double mesh = std::numeric_limits<double>::quiet_NaN();
  std::string functional;
  double space_step = std::numeric_limits<double>::quiet_NaN();
  double kappa = std::numeric_limits<double>::quiet_NaN();  // walk local-time rescale
  std::size_t abandoned = 0;  // walk paths that hit the step cap
  std::size_t truncated = 0;  // ppp records that ran off the cell budget
};

struct SampleBatch {
  std::vector<Record> records;
  SampleMeta meta;

  std::vector<double> values() const;
  std::vector<double> local_times() const;
};

/// threads <= 0 uses the OpenMP default. Results never depend on it.
SampleBatch sample_exact(const StoppingRule& rule, std::uint64_t seed, std::size_t count, int threads = 0);
SampleBatch sample_exact_serial(const StoppingRule& rule, std::uint64_t seed, std::size_t count);

struct PppOptions {
  std::size_t table_cells = std::size_t{1} << 22;  // precomputed cumulative-hazard prefix
  std::size_t max_cells = 1000000000;              // per-record march guard
  bool integrate_cells = true;  // cell mass from quadrature of the hazard, else midpoint rule
  /// Where in the hit cell the excursion is placed: the midpoint, a uniform
  /// point, or a draw from a power-law fit of the hazard across the cell.
  enum class Placement { midpoint, uniform, power_law } placement = Placement::power_law;
};

SampleBatch sample_ppp(const StoppingRule& rule, std::uint64_t seed, std::size_t count, double mesh,
                       int threads = 0, const PppOptions& opts = {});
SampleBatch sample_ppp_serial(const StoppingRule& rule, std::uint64_t seed, std::size_t count, double mesh,
                              const PppOptions& opts = {});

enum class Functional { extrema, azema, age };
const char* to_string(Functional f);
Functional functional_from_string(const std::string& s);

/// Characteristic measure of the functional for Brownian motion with local
/// time h * #zero visits (the Tanaka normalization).
CharMeasure walk_char_measure(Functional f);

struct WalkOptions {
  std::uint64_t step_cap = 1000000000;
  bool report_alpha = false;
  bool jitter = true;  // uniform local time within each zero visit, else the slot midpoint  // azema: emit sgn sqrt(2 pi (t - g)) instead of the halved statistic
};

/// Random walk with steps +-h and time step h^2. The rule may be solved for any
/// positive multiple of the functional's characteristic measure; local time is
/// rescaled accordingly.
SampleBatch walk_embed(const StoppingRule& rule, Functional f, double h, std::uint64_t seed, std::size_t count,
                       int threads = 0, const WalkOptions& opts = {});
SampleBatch walk_embed_serial(const StoppingRule& rule, Functional f, double h, std::uint64_t seed,
                              std::size_t count, const WalkOptions& opts = {});

/// kappa with rule.n() * kappa = walk_char_measure(f); throws if not proportional.
double walk_kappa(const CharMeasure& solved, Functional f);

struct LocalTimeEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Estimates E[L_t] for the walk (compare with sqrt(2t/pi)).
LocalTimeEstimate walk_local_time(double h, double t, std::uint64_t seed, std::size_t count, int threads = 0);

}  // namespace embed

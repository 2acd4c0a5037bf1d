#pragma once

#include <string>
#include <vector>

#include "embed/measures.hpp"
#include "embed/rule.hpp"

namespace embed {

struct AtomicProblem {
  std::vector<Atom> neg;  // locations < 0, by increasing |x|
  std::vector<Atom> pos;  // locations > 0, increasing
};

AtomicProblem atomic_problem(const TargetMeasure& mu);

struct AtomicOptions {
  bool lenient = false;          // report a failed terminal check instead of throwing
  double terminal_tol = 1e-9;
  double truncate_below = 1e-12;  // stop once the unconsumed mass is this small
  std::size_t max_steps = 1000000;
};

/// phi- = |x_k| on [alpha_{k-1}, alpha_k), phi+ = y_k on [beta_{k-1}, beta_k).
struct Breakpoints {
  std::vector<double> alpha;  // last entry +inf
  std::vector<double> beta;
  std::vector<double> level_neg;  // |x_k|
  std::vector<double> level_pos;  // y_k
  double residual = 0.0;          // terminal |remaining neg mass - A S / h|
  bool admissible = true;
  bool truncated = false;
  std::size_t failing_step = 0;
  std::string failure;

  double phi_plus(double l) const;
  double phi_minus(double l) const;
};

Breakpoints solve_atomic(const AtomicProblem& p, const CharMeasure& n, const AtomicOptions& opts = {});
Breakpoints solve_atomic(const TargetMeasure& mu, const CharMeasure& n, const AtomicOptions& opts = {});

StoppingRule make_rule(const Breakpoints& bp, const CharMeasure& n);

/// Piecewise-exponential P(L_T > l).
LocalTimeLaw atomic_survival(const Breakpoints& bp, const CharMeasure& n);

}  // namespace embed

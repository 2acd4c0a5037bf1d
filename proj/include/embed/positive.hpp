#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>

#include "embed/measures.hpp"
#include "embed/monotone.hpp"
#include "embed/rule.hpp"
#include "embed/signed.hpp"

namespace embed {

/// One-sided boundary: T = inf{t : F_t >= phi(L_t)} or L_t >= cap.
struct PositiveBoundary {
  MonotoneFn psi;      // left-continuous; jumps at atoms
  double cap = kInf;   // psi of the law with its zero atom moved to +inf
  double varsigma = 0.0;  // mass of the atom at zero

  /// Right-continuous inverse of psi.
  double phi(double l) const { return psi.right_inverse(std::max(l, 0.0)); }
};

/// Dual Hardy-Littlewood function for a law on (0, inf), atoms allowed.
PositiveBoundary dual_hardy_littlewood(const TargetMeasure& mu, const CharMeasure& n,
                                       const SolverOptions& opts = {});

struct AtomAtZero {
  TargetMeasure mu_tilde;
  double varsigma = 0.0;
};

/// Moves the atom at zero to +inf.
AtomAtZero atom_at_zero(const TargetMeasure& mu);

/// atom_at_zero followed by dual_hardy_littlewood; cap = psi(inf) when varsigma > 0.
PositiveBoundary boundary_positive(const TargetMeasure& mu, const CharMeasure& n,
                                   const SolverOptions& opts = {});

StoppingRule make_rule(const PositiveBoundary& b, const CharMeasure& n);

/// Closed forms of the worked examples, for regression. Signed families give the
/// expressions as printed (phi = phi_plus).
struct ClosedForm {
  std::function<double(double)> psi;
  std::function<double(double)> phi;
  std::function<double(double)> phi_minus;
};

ClosedForm closed_form_reference(const std::string& family, const std::map<std::string, double>& params);

}  // namespace embed

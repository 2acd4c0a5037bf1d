#pragma once

#include <memory>

#include "embed/measures.hpp"
#include "embed/monotone.hpp"
#include "embed/rule.hpp"

namespace embed {

struct SolverOptions {
  GridOptions grid;
  double psi_max = 1e3;        // psi tables stop once they exceed this
  double rel_tol = 1e-12;      // per-segment quadrature tolerance
  bool symmetric_shortcut = true;
  bool one_sided_as_signed = false;  // run a positive law with G = 0 instead of redirecting
};

/// D(y) = int_[0,y] dmu/N+ and G(z) = int_[-z,0] dmu/N-, both as functions of
/// an absolute coordinate, plus their complements D(inf) - D and G(-inf) - G
/// (stored negated, so they are non-decreasing) for use deep in the tails.
struct BalanceFunctions {
  MonotoneFn D;
  MonotoneFn G;
  MonotoneFn D_tail;  // -(d_inf - D)
  MonotoneFn G_tail;  // -(g_inf - G)
  double d_inf = 0.0;
  double g_inf = 0.0;
  SideGrid pos_grid;
  SideGrid neg_grid;
};

BalanceFunctions balance_functions(const TargetMeasure& mu, const CharMeasure& n,
                                   const SolverOptions& opts = {});

/// f(x) = D^-1(G(x)) and g(y) = G^-1(D(y)) with right-continuous inverses.
class ConjugateMaps {
 public:
  explicit ConjugateMaps(std::shared_ptr<const BalanceFunctions> bf) : bf_(std::move(bf)) {}
  /// x <= 0 -> y >= 0 (may be +inf).
  double f(double x) const;
  /// y >= 0 -> x <= 0 (may be -inf).
  double g(double y) const;

 private:
  static double conjugate(const MonotoneFn& from, const MonotoneFn& from_tail, double from_inf,
                          const MonotoneFn& to, const MonotoneFn& to_tail, double to_inf, double u);
  std::shared_ptr<const BalanceFunctions> bf_;
};

ConjugateMaps conjugate_maps(const BalanceFunctions& bf);

struct BoundaryPair {
  MonotoneFn psi_plus;
  MonotoneFn psi_minus;
  double c_mu = 0.0;  // D(b_mu), possibly +inf
  AdmissibilityReport report;
  bool used_symmetry = false;
  std::shared_ptr<const BalanceFunctions> balance;

  /// Left-continuous inverses, +inf when never reached; phi(0) is the limit phi(0+).
  double phi_plus(double l) const { return l <= 0.0 ? psi_plus.right_inverse(0.0) : psi_plus.left_inverse(l); }
  double phi_minus(double l) const { return l <= 0.0 ? psi_minus.right_inverse(0.0) : psi_minus.left_inverse(l); }
};

BoundaryPair boundary_signed(const TargetMeasure& mu, const CharMeasure& n, const SolverOptions& opts = {});

/// Stopping rule built from a signed boundary.
StoppingRule make_rule(const BoundaryPair& b, const CharMeasure& n);

/// P(L_T > l) for the signed rule.
LocalTimeLaw local_time_survival(const BoundaryPair& b, const CharMeasure& n);

/// Law of F_T obtained by mixing over L_T; should reproduce mu.
StoppedLaw stopped_distribution(const BoundaryPair& b, const CharMeasure& n);

}  // namespace embed

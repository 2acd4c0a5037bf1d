#include "embed/solve.hpp"

#include "embed/error.hpp"

namespace embed {

const char* to_string(SolverKind k) {
  switch (k) {
    case SolverKind::signed_law: return "signed";
    case SolverKind::positive: return "positive";
    case SolverKind::atomic: return "atomic";
  }
  return "?";
}

SolverKind solver_from_string(const std::string& s) {
  if (s == "signed") return SolverKind::signed_law;
  if (s == "positive") return SolverKind::positive;
  if (s == "atomic") return SolverKind::atomic;
  throw EmbedError(ErrorKind::configuration, "unknown solver '" + s + "' (signed, positive, atomic)");
}

SolverKind select_solver(const TargetMeasure& mu) {
  if (mu.side_mass(Side::neg) == 0.0) return SolverKind::positive;
  if (mu.kind() == MeasureKind::purely_atomic) return SolverKind::atomic;
  return SolverKind::signed_law;
}

Embedding solve(const TargetMeasure& mu, const CharMeasure& n, SolverKind kind, const EmbedOptions& opts) {
  Embedding e;
  e.kind = kind;
  switch (kind) {
    case SolverKind::signed_law:
      e.signed_boundary = boundary_signed(mu, n, opts.solver);
      e.rule = make_rule(*e.signed_boundary, n);
      break;
    case SolverKind::positive:
      e.positive_boundary = boundary_positive(mu, n, opts.solver);
      e.rule = make_rule(*e.positive_boundary, n);
      break;
    case SolverKind::atomic:
      e.breakpoints = solve_atomic(mu, n, opts.atomic);
      e.rule = make_rule(*e.breakpoints, n);
      break;
  }
  return e;
}

Embedding solve(const TargetMeasure& mu, const CharMeasure& n, const EmbedOptions& opts) {
  return solve(mu, n, select_solver(mu), opts);
}

}  // namespace embed

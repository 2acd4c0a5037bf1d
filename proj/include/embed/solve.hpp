#pragma once

#include <optional>
#include <string>

#include "embed/atomic.hpp"
#include "embed/positive.hpp"
#include "embed/rule.hpp"
#include "embed/signed.hpp"

namespace embed {

enum class SolverKind { signed_law, positive, atomic };
const char* to_string(SolverKind k);
SolverKind solver_from_string(const std::string& s);

/// The solver a target calls for: atomic for two-sided purely atomic laws,
/// positive when nothing sits below zero, signed otherwise.
SolverKind select_solver(const TargetMeasure& mu);

struct Embedding {
  SolverKind kind = SolverKind::signed_law;
  std::optional<BoundaryPair> signed_boundary;
  std::optional<PositiveBoundary> positive_boundary;
  std::optional<Breakpoints> breakpoints;
  StoppingRule rule;

  double phi_plus(double l) const { return rule.phi_plus(l); }
  double phi_minus(double l) const { return rule.phi_minus(l); }
};

struct EmbedOptions {
  SolverOptions solver;
  AtomicOptions atomic;
};

/// Throws when `kind` does not fit the target.
Embedding solve(const TargetMeasure& mu, const CharMeasure& n, SolverKind kind, const EmbedOptions& opts = {});
Embedding solve(const TargetMeasure& mu, const CharMeasure& n, const EmbedOptions& opts = {});

}  // namespace embed

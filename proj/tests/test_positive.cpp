#include <cmath>

#include "common.hpp"
#include "embed/error.hpp"
#include "embed/positive.hpp"
#include "embed/solve.hpp"
#include "embed/verify.hpp"

using namespace embed;
using testing::dx_over_x2;

TEST_CASE("exponential law: phi = sqrt(2 l / a)") {
  for (double a : {1.0, 2.0}) {
    const PositiveBoundary b = boundary_positive(target::exponential(a), dx_over_x2());
    for (double l : {1e-3, 0.2, 1.0, 10.0}) CHECK(b.phi(l) == doctest::Approx(std::sqrt(2 * l / a)).epsilon(1e-8));
    for (double x : {0.1, 1.0, 3.0}) CHECK(b.phi(b.psi(x)) == doctest::Approx(x).epsilon(1e-9));
  }
}

TEST_CASE("closed forms") {
  const auto w = closed_form_reference("weibull", {{"a", 2}, {"b", 2}});
  const PositiveBoundary b = boundary_positive(target::weibull(2, 2), dx_over_x2());
  for (double x : {0.1, 0.5, 1.0, 1.5}) {
    CHECK(w.psi(x) == doctest::Approx(4 * x * x * x / 3).epsilon(1e-14));
    CHECK(b.psi(x) == doctest::Approx(w.psi(x)).epsilon(1e-8));
  }
  const auto u = closed_form_reference("uniform", {});
  const PositiveBoundary ub = boundary_positive(target::uniform(0, 1), dx_over_x2());
  for (double x : {0.1, 0.5, 0.9, 0.999}) CHECK(ub.psi(x) == doctest::Approx(u.psi(x)).epsilon(1e-8));
  CHECK_THROWS_AS(closed_form_reference("cauchy", {}), EmbedError);
}

TEST_CASE("geometric law: jumps and plateaus") {
  const double p = 0.5, c = -std::log1p(-p);
  const PositiveBoundary b = boundary_positive(target::geometric(p), dx_over_x2());
  const auto cf = closed_form_reference("geometric", {{"p", p}});
  for (int k = 1; k <= 6; ++k) {
    CHECK(b.psi(k) == doctest::Approx(cf.psi(k)).epsilon(1e-10));
    // phi sits at level k for a local-time stretch of length c k.
    CHECK(b.psi.right_limit(k) - b.psi(k) == doctest::Approx(c * k).epsilon(1e-10));
  }
  for (double l : {0.0, 0.3, 0.8, 2.5, 7.0}) CHECK(b.phi(l) == cf.phi(l));
}

TEST_CASE("jumps of psi carry the atom masses") {
  const TargetMeasure mu = target::geometric(0.4);
  const CharMeasure n = dx_over_x2();
  const StoppingRule rule = make_rule(boundary_positive(mu, n), n);
  const PositiveBoundary b = boundary_positive(mu, n);
  for (int k = 1; k <= 5; ++k) {
    const double m = rule.law().survival(b.psi(k)) - rule.law().survival(b.psi.right_limit(k));
    CHECK(std::abs(m - mu.atom_mass(k)) <= 1e-9);
  }
}

TEST_CASE("atom at zero") {
  const PositiveBoundary half = boundary_positive(target::from_atoms({{0, 0.5}, {1, 0.5}}), dx_over_x2());
  CHECK(half.varsigma == 0.5);
  CHECK(half.cap == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const StoppedLaw law(make_rule(half, dx_over_x2()));
  CHECK(law.zero_mass() == doctest::Approx(0.5).epsilon(1e-9));

  const TargetMeasure e = target::exponential(1.0);
  const AtomAtZero same = atom_at_zero(e);
  CHECK(same.varsigma == 0.0);
  CHECK(boundary_positive(e, dx_over_x2()).cap == kInf);

  const PositiveBoundary dirac = boundary_positive(target::from_atoms({{0, 1.0}}), dx_over_x2());
  CHECK(dirac.cap == 0.0);
  CHECK_THROWS_AS(dual_hardy_littlewood(target::from_atoms({{0, 0.5}, {1, 0.5}}), dx_over_x2()), EmbedError);
}

TEST_CASE("a positive law through the signed machinery") {
  EmbedOptions opts;
  opts.solver.one_sided_as_signed = true;
  opts.solver.symmetric_shortcut = false;
  const TargetMeasure mu = target::exponential(1.0);
  const Embedding s = solve(mu, dx_over_x2(), SolverKind::signed_law, opts);
  const Embedding p = solve(mu, dx_over_x2());
  CHECK(p.kind == SolverKind::positive);
  for (double l : {0.01, 0.5, 2.0}) CHECK(s.phi_plus(l) == doctest::Approx(p.phi_plus(l)).epsilon(1e-8));
}

TEST_CASE("Bessel maximum with a bounded law") {
  const CharMeasure n = charm::bessel_max(-0.5);
  const TargetMeasure mu = target::uniform(1, 2);
  const PositiveBoundary b = boundary_positive(mu, n);
  std::vector<double> grid;
  for (double y = 1.0; y < 2.0; y += 0.05) grid.push_back(y);
  CHECK(round_trip_error(StoppedLaw(make_rule(b, n)), mu, grid) <= 1e-6);
}

#include <cmath>

#include "common.hpp"
#include "embed/error.hpp"
#include "embed/signed.hpp"
#include "embed/solve.hpp"
#include "embed/verify.hpp"

using namespace embed;
using testing::dx_over_x2;

TEST_CASE("balance functions") {
  const double lam = 1.0, gam = 2.0;
  const BalanceFunctions bf = balance_functions(target::double_exponential(lam, gam), dx_over_x2());
  for (double y : {0.01, 0.3, 1.0, 4.0, 12.0}) {
    const double ref = (1.0 - std::exp(-lam * y) * (1.0 + lam * y)) / (lam + gam);
    CHECK(std::abs(bf.D(y) - ref) <= 1e-10);
  }
  const BalanceFunctions pos = balance_functions(target::exponential(1.0), dx_over_x2(),
                                                 SolverOptions{.one_sided_as_signed = true});
  for (double z : {0.0, 0.5, 3.0}) CHECK(pos.G(z) == 0.0);

  const BalanceFunctions fu = balance_functions(target::f_uniform(1, 1), dx_over_x2());
  for (double y : {1.5, 3.0, 40.0}) CHECK(std::abs(fu.D(y) - 0.5 * std::log(y)) <= 1e-10);
}

TEST_CASE("conjugate maps") {
  const ConjugateMaps m = conjugate_maps(balance_functions(target::double_exponential(1, 2), dx_over_x2()));
  for (double y : {0.1, 1.0, 5.0}) CHECK(m.g(y) == doctest::Approx(-y / 2).epsilon(1e-8));
  const ConjugateMaps s = conjugate_maps(balance_functions(target::gaussian(1.0), dx_over_x2()));
  for (double y : {0.1, 1.0, 3.0}) CHECK(s.g(y) == doctest::Approx(-y).epsilon(1e-8));
  // Past the end of a bounded support nothing is left to balance.
  const ConjugateMaps u = conjugate_maps(balance_functions(target::uniform(-1, 1), dx_over_x2()));
  CHECK(u.g(1.5) == -kInf);
}

TEST_CASE("double-exponential boundaries") {
  const BoundaryPair b = boundary_signed(target::double_exponential(1, 2), dx_over_x2());
  for (double l : {1e-3, 0.1, 1.0, 5.0}) {
    CHECK(b.phi_plus(l) == doctest::Approx(std::sqrt(6 * l)).epsilon(1e-8));
    CHECK(b.phi_minus(l) == doctest::Approx(std::sqrt(1.5 * l)).epsilon(1e-8));
  }
  CHECK(b.phi_plus(0.0) == 0.0);
  CHECK(b.phi_minus(0.0) == 0.0);
  // The same law under dx/2x^2.
  const BoundaryPair h = boundary_signed(target::double_exponential(1, 1), charm::make("brownian_extrema", {}));
  CHECK(h.phi_plus(0.05) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-8));
}

TEST_CASE("F-uniform boundaries are linear") {
  for (auto [g, hh] : {std::pair{1.0, 1.0}, std::pair{1.0, 2.0}}) {
    const BoundaryPair b = boundary_signed(target::f_uniform(g, hh), dx_over_x2());
    const double K = 1.0 / (1.0 / g + 1.0 / hh);
    for (double l : {0.0, 0.5, 3.0, 20.0}) {
      CHECK(b.phi_plus(l) == doctest::Approx(g * (1 + l / K)).epsilon(1e-8));
      CHECK(b.phi_minus(l) == doctest::Approx(hh * (1 + l / K)).epsilon(1e-8));
    }
  }
}

TEST_CASE("symmetric shortcut agrees with the general path") {
  const TargetMeasure mu = target::gaussian(1.0);
  SolverOptions general;
  general.symmetric_shortcut = false;
  const BoundaryPair a = boundary_signed(mu, dx_over_x2());
  const BoundaryPair b = boundary_signed(mu, dx_over_x2(), general);
  CHECK(a.used_symmetry);
  CHECK_FALSE(b.used_symmetry);
  for (double l : testing::log_grid(1e-3, 5.0, 30)) {
    CHECK(std::abs(a.phi_plus(l) - b.phi_plus(l)) <= 1e-8 * a.phi_plus(l));
    CHECK(std::abs(a.phi_minus(l) - b.phi_minus(l)) <= 1e-8 * a.phi_minus(l));
  }
}

TEST_CASE("psi and phi are inverse, conjugacy holds") {
  const TargetMeasure mu = target::double_exponential(1.0, 2.0);
  const BoundaryPair b = boundary_signed(mu, dx_over_x2());
  const ConjugateMaps m(b.balance);
  CHECK(b.psi_plus(0.0) == 0.0);
  CHECK(b.psi_minus(0.0) == 0.0);
  for (double y : {0.01, 0.5, 2.0, 6.0}) {
    CHECK(b.phi_plus(b.psi_plus(y)) == doctest::Approx(y).epsilon(1e-9));
    CHECK(std::abs(b.psi_plus(y) - b.psi_minus(-m.g(y))) <= 1e-8 * (1 + b.psi_plus(y)));
  }
}

TEST_CASE("local-time survival") {
  // Constant boundaries g, h: exponential with rate 1/g + 1/h.
  const double g = 1.5, h = 0.5;
  const StoppingRule rule([=](double) { return g; }, [=](double) { return h; }, dx_over_x2(), {});
  CHECK(rule.law().survival(0.0) == 1.0);
  for (double l : {0.1, 1.0, 3.0}) {
    CHECK(rule.law().survival(l) == doctest::Approx(std::exp(-l * (1 / g + 1 / h))).epsilon(1e-10));
  }
  const StoppedLaw stopped(rule);
  CHECK(stopped.upper(g) == doctest::Approx(h / (g + h)).epsilon(1e-9));
  const StoppingRule even([](double) { return 1.0; }, [](double) { return 1.0; }, dx_over_x2(), {});
  CHECK(StoppedLaw(even).upper(1.0) == doctest::Approx(0.5).epsilon(1e-12));

  const BoundaryPair d = boundary_signed(target::double_exponential(1, 1), dx_over_x2());
  const LocalTimeLaw law = local_time_survival(d, dx_over_x2());
  for (double l : {0.01, 0.5, 2.0, 9.0}) {
    CHECK(law.survival(l) == doctest::Approx(std::exp(-2 * std::sqrt(l))).epsilon(1e-7));
  }
  CHECK(law.survival(100.0) < 1e-3);
}

TEST_CASE("stopped law reproduces the target") {
  std::vector<double> grid;
  for (double y : testing::log_grid(1e-3, 8.0, 60)) {
    grid.push_back(y);
    grid.push_back(-y);
  }
  for (const TargetMeasure& mu : {target::double_exponential(1, 2), target::gaussian(1.0), target::f_uniform(1, 2)}) {
    CAPTURE(mu.label());
    const BoundaryPair b = boundary_signed(mu, dx_over_x2());
    CHECK(round_trip_error(stopped_distribution(b, dx_over_x2()), mu, grid) <= 1e-4);
  }
}

TEST_CASE("boundaries do not depend on the normalization of n") {
  const TargetMeasure mu = target::double_exponential(1, 2);
  const auto grid = testing::log_grid(1e-3, 5.0, 40);
  CHECK(rescale_invariance(mu, dx_over_x2(), 1.0, grid) == 0.0);
  CHECK(rescale_invariance(mu, dx_over_x2(), 2.0, grid) <= 1e-8);
  CHECK(rescale_invariance(target::f_uniform(1, 2), dx_over_x2(), 0.5, grid) <= 1e-8);
}

TEST_CASE("solver dispatch and errors") {
  CHECK(select_solver(target::double_exponential(1, 1)) == SolverKind::signed_law);
  CHECK(select_solver(target::exponential(1)) == SolverKind::positive);
  CHECK(select_solver(target::from_atoms({{-1, 0.5}, {1, 0.5}})) == SolverKind::atomic);
  try {
    boundary_signed(target::gaussian(1.0, 0.5), dx_over_x2());
    FAIL("expected unbalanced");
  } catch (const EmbedError& e) {
    CHECK(e.kind() == ErrorKind::unbalanced);
  }
  try {
    boundary_signed(target::from_atoms({{-1, 0.5}, {1, 0.5}}), dx_over_x2());
    FAIL("expected use_atomic");
  } catch (const EmbedError& e) {
    CHECK(e.kind() == ErrorKind::use_atomic);
  }
  try {
    boundary_signed(target::exponential(1.0), dx_over_x2());
    FAIL("expected use_positive");
  } catch (const EmbedError& e) {
    CHECK(e.kind() == ErrorKind::use_positive);
  }
}

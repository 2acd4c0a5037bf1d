#include <cmath>

#include "common.hpp"
#include "embed/atomic.hpp"
#include "embed/error.hpp"

using namespace embed;
using testing::dx_over_x2;

TEST_CASE("two-point law: constant boundaries") {
  const Breakpoints bp = solve_atomic(target::from_atoms({{-1, 0.5}, {1, 0.5}}), dx_over_x2());
  REQUIRE(bp.alpha.size() == 1);
  CHECK(bp.alpha[0] == kInf);
  CHECK(bp.beta[0] == kInf);
  for (double l : {0.0, 1.0, 50.0}) {
    CHECK(bp.phi_plus(l) == 1.0);
    CHECK(bp.phi_minus(l) == 1.0);
  }
  const LocalTimeLaw law = atomic_survival(bp, dx_over_x2());
  CHECK(law.survival(0.0) == 1.0);
  for (double l : {0.2, 1.0, 4.0}) CHECK(law.survival(l) == doctest::Approx(std::exp(-2 * l)).epsilon(1e-12));
}

TEST_CASE("first breakpoint of the three-point example") {
  const TargetMeasure mu = target::from_atoms({{-1, 0.5}, {1, 0.25}, {3, 0.25}});
  AtomicOptions lenient;
  lenient.lenient = true;
  const Breakpoints bp = solve_atomic(mu, dx_over_x2(), lenient);
  CHECK(std::abs(bp.beta[0] - 0.5 * std::log(2.0)) <= 1e-12);
  CHECK(atomic_survival(bp, dx_over_x2()).survival(bp.beta[0]) == doctest::Approx(0.5).epsilon(1e-12));
  // Its mean is 1/2, so the strict solver refuses it.
  CHECK_FALSE(bp.admissible);
  try {
    solve_atomic(mu, dx_over_x2());
    FAIL("expected inadmissible");
  } catch (const EmbedError& e) {
    CHECK(e.kind() == ErrorKind::inadmissible);
  }
}

TEST_CASE("non-centred two-point law is inadmissible") {
  try {
    solve_atomic(target::from_atoms({{-1, 0.5}, {2, 0.5}}), dx_over_x2());
    FAIL("expected inadmissible");
  } catch (const EmbedError& e) {
    CHECK(e.kind() == ErrorKind::inadmissible);
  }
}

TEST_CASE("masses are recovered and breakpoints increase") {
  const TargetMeasure mus[] = {
      target::from_atoms({{-1, 0.625}, {1, 0.25}, {3, 0.125}}),
      target::from_atoms({{-3, 0.1}, {-1, 0.4}, {0.5, 0.2}, {1, 0.2}, {4, 0.1}}),
      target::from_atoms({{-2, 0.2}, {-1, 0.3}, {1, 0.3}, {2, 0.2}}),
  };
  for (const auto& mu : mus) {
    const Breakpoints bp = solve_atomic(mu, dx_over_x2());
    CHECK(bp.admissible);
    for (std::size_t k = 1; k < bp.alpha.size(); ++k) CHECK(bp.alpha[k] > bp.alpha[k - 1]);
    for (std::size_t k = 1; k < bp.beta.size(); ++k) CHECK(bp.beta[k] > bp.beta[k - 1]);
    const StoppedLaw law(make_rule(bp, dx_over_x2()));
    for (const Atom& a : mu.atoms()) {
      const double got = a.location > 0 ? law.upper(a.location) - law.upper(std::nextafter(a.location, kInf))
                                        : law.lower(a.location) - law.lower(std::nextafter(a.location, -kInf));
      CHECK(std::abs(got - a.mass) <= 1e-9);
    }
  }
}

TEST_CASE("symmetric atomic law has alpha = beta") {
  const Breakpoints bp = solve_atomic(target::from_atoms({{-2, 0.2}, {-1, 0.3}, {1, 0.3}, {2, 0.2}}), dx_over_x2());
  for (std::size_t k = 0; k < bp.alpha.size(); ++k) {
    if (std::isfinite(bp.alpha[k])) CHECK(bp.alpha[k] == doctest::Approx(bp.beta[k]).epsilon(1e-12));
    else CHECK(bp.beta[k] == kInf);
  }
}

TEST_CASE("atomic problem errors") {
  CHECK_THROWS_AS(atomic_problem(target::from_atoms({{-1, 0.25}, {0, 0.5}, {1, 0.25}})), EmbedError);
  try {
    atomic_problem(target::from_atoms({{1, 0.5}, {2, 0.5}}));
    FAIL("expected use_positive");
  } catch (const EmbedError& e) {
    CHECK(e.kind() == ErrorKind::use_positive);
  }
}

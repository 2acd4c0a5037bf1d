#include <cmath>

#include "common.hpp"
#include "embed/error.hpp"
#include "embed/measures.hpp"

using namespace embed;

TEST_CASE("tails of the worked families") {
  CHECK(tail(target::double_exponential(1, 1), 0.0, TailSide::upper) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tail(target::geometric(0.5), 2.0, TailSide::upper) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tail(target::uniform(0, 1), 0.25, TailSide::upper) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("upper + lower - atom = 1") {
  const TargetMeasure laws[] = {target::double_exponential(1, 2), target::geometric(0.3),
                                target::from_atoms({{-1, 0.5}, {1, 0.25}, {3, 0.25}}), target::gaussian(1.5)};
  for (const auto& mu : laws) {
    for (double t : {-3.0, -1.0, -0.2, 0.0, 0.5, 1.0, 2.0, 3.0, 7.5}) {
      const double s = tail(mu, t, TailSide::upper) + tail(mu, t, TailSide::lower) - mu.atom_mass(t);
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("catalog tails") {
  CHECK(charm::power_signed(1, 1).upper(2.0) == doctest::Approx(0.5));
  CHECK(charm::bessel_max(-0.5).upper(4.0) == doctest::Approx(0.25));
  CHECK(charm::cir_age(1.0, 0.5, 1.0).upper(std::log(4.0)) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-5));
  CHECK(charm::brownian_age().upper(1.0) == doctest::Approx(1.0 / std::sqrt(2 * M_PI)));
  CHECK(charm::make("brownian_extrema", {}).upper(3.0) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("catalog parameter checks") {
  CHECK_THROWS_AS(charm::bessel_max(0.5), EmbedError);
  CHECK_THROWS_AS(charm::bessel_max(-1.0), EmbedError);
  CHECK_THROWS_AS(charm::cir_age(2.5, 0.5, 1.0), EmbedError);
  CHECK_THROWS_AS(charm::cir_age(0.0, 0.5, 1.0), EmbedError);
  CHECK_THROWS_AS(charm::make("no_such_measure", {}), EmbedError);
}

TEST_CASE("catalog entries are non-increasing over six decades") {
  REQUIRE(char_catalog().size() >= 7);
  for (const auto& entry : char_catalog()) {
    std::map<std::string, double> p;
    for (const auto& [k, v] : entry.params) p[k] = std::isnan(v) ? 0.0 : v;
    if (entry.name == "skew_brownian") p["p"] = 0.3;
    if (entry.name == "bessel_max" || entry.name == "bessel_lifetime") p["q"] = -0.4;
    if (entry.name == "bessel_drift_age") p = {{"q", -0.5}, {"beta", 1.0}, {"C", 1.0}};
    if (entry.name == "cir_age") p = {{"delta", 1.0}, {"gamma", 0.5}, {"C", 1.0}};
    CAPTURE(entry.name);
    const CharMeasure n = charm::make(entry.name, p);
    double prev = kInf;
    for (double y : testing::log_grid(1e-3, 1e3, 121)) {
      const double v = n.upper(y);
      CHECK(v >= 0.0);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("power law tails scale as 1/y") {
  const CharMeasure n = charm::power_signed(0.7, 1.3);
  for (double y : testing::log_grid(1e-4, 1e4, 17)) {
    CHECK(n.upper(y) * y == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(n.lower(-y) * y == doctest::Approx(1.3).epsilon(1e-14));
  }
}

TEST_CASE("scale function W(x) = x gives 1/y") {
  const CharMeasure n = charm::from_scale_function([](double x) { return x; }, [](double) { return 1.0; });
  for (double y : {0.01, 1.0, 50.0}) CHECK(n.upper(y) == doctest::Approx(1.0 / y));
  CHECK(charm::scale_function_brownian().upper(4.0) == doctest::Approx(0.25));
}

TEST_CASE("validate_pair") {
  const auto r = validate_pair(target::double_exponential(1, 1), testing::dx_over_x2());
  CHECK(r.verdict == Verdict::admissible);
  CHECK(r.d_inf == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(r.g_inf == doctest::Approx(0.5).epsilon(1e-8));

  CHECK(validate_pair(target::uniform(1, 2), charm::bessel_max(-0.5)).verdict == Verdict::admissible);
  const auto z = validate_pair(target::from_atoms({{-1, 0.25}, {0, 0.5}, {1, 0.25}}), testing::dx_over_x2());
  CHECK(z.verdict == Verdict::unsupported);
  // Off-centre laws are unbalanced for dx/x^2.
  CHECK(validate_pair(target::gaussian(1.0, 0.3), testing::dx_over_x2()).verdict == Verdict::unbalanced);
}

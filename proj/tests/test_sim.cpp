#include <cmath>

#include "common.hpp"
#include "embed/error.hpp"
#include "embed/rng.hpp"
#include "embed/sim.hpp"
#include "embed/solve.hpp"
#include "embed/verify.hpp"

using namespace embed;
using testing::dx_over_x2;

namespace {

bool same(const SampleBatch& a, const SampleBatch& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const Record& x = a.records[i];
    const Record& y = b.records[i];
    if (x.l != y.l || x.value != y.value || x.side != y.side) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
  rng::Stream a(5, 0), b(5, 0), c(5, 1);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  double s = 0.0;
  rng::Stream u(11, 3);
  for (int i = 0; i < 100000; ++i) s += u.uniform_open();
  CHECK(std::abs(s / 100000 - 0.5) < 0.005);
}

TEST_CASE("exact sampler: constant boundaries") {
  const StoppingRule rule([](double) { return 1.0; }, [](double) { return 1.0; }, dx_over_x2(), {});
  const std::size_t N = 100000;
  const SampleBatch batch = sample_exact(rule, 3, N);
  std::size_t pos = 0;
  for (const Record& r : batch.records) pos += r.side == StopSide::pos;
  CHECK(std::abs(pos / double(N) - 0.5) <= 3 * std::sqrt(0.25 / N));
  CHECK(survival_compare(batch, [](double l) { return std::exp(-2 * l); }) <= 1.63 / std::sqrt(double(N)));
}

TEST_CASE("exact sampler: double-exponential") {
  const TargetMeasure mu = target::double_exponential(1, 1);
  const Embedding e = solve(mu, dx_over_x2());
  const SampleBatch batch = sample_exact(e.rule, 2024, 100000);
  CHECK(ks_statistic(batch, mu).ks_distance <= 0.0065);
  CHECK(survival_compare(batch, [](double l) { return std::exp(-2 * std::sqrt(l)); }) <= 0.01);
  for (const Record& r : batch.records) {
    if (r.side == StopSide::pos) CHECK(r.value == e.phi_plus(r.l));
    else CHECK(r.value == -e.phi_minus(r.l));
  }
}

TEST_CASE("samplers do not depend on the thread count") {
  const Embedding e = solve(target::double_exponential(1, 2), dx_over_x2());
  const SampleBatch serial = sample_exact_serial(e.rule, 9, 20000);
  CHECK(same(serial, sample_exact(e.rule, 9, 20000, 1)));
  CHECK(same(serial, sample_exact(e.rule, 9, 20000, 4)));
  const SampleBatch ppp = sample_ppp_serial(e.rule, 9, 5000, 1e-2);
  CHECK(same(ppp, sample_ppp(e.rule, 9, 5000, 1e-2, 3)));
  const StoppingRule walk_rule = solve(target::double_exponential(1, 1), walk_char_measure(Functional::extrema)).rule;
  const SampleBatch w = walk_embed_serial(walk_rule, Functional::extrema, 0.05, 9, 500);
  CHECK(same(w, walk_embed(walk_rule, Functional::extrema, 0.05, 9, 500, 4)));
}

TEST_CASE("side law given the local time") {
  const double lam = 1.0, gam = 2.0;
  const Embedding e = solve(target::double_exponential(lam, gam), dx_over_x2());
  const SampleBatch batch = sample_exact(e.rule, 77, 200000);
  // Hazards phi+^-1 and phi-^-1 give P(pos | L) = phi- / (phi+ + phi-) = lam / (lam + gam).
  const double lo = 0.4, hi = 0.6, expect = lam / (lam + gam);
  std::size_t in = 0, pos = 0;
  for (const Record& r : batch.records) {
    if (r.l < lo || r.l >= hi) continue;
    ++in;
    pos += r.side == StopSide::pos;
  }
  REQUIRE(in > 1000);
  CHECK(std::abs(pos / double(in) - expect) <= 3 * std::sqrt(expect * (1 - expect) / in));
}

TEST_CASE("PPP sampler") {
  const TargetMeasure two = target::from_atoms({{-1, 0.5}, {1, 0.5}});
  const Embedding e = solve(two, dx_over_x2());
  const std::size_t N = 50000;
  const GofReport g = ks_statistic(sample_ppp(e.rule, 4, N, 1e-3), two);
  for (const AtomCheck& a : g.atoms) CHECK(std::abs(a.z) <= 3.0);

  const TargetMeasure fu = target::f_uniform(1, 1);
  const Embedding f = solve(fu, dx_over_x2());
  const SampleBatch batch = sample_ppp(f.rule, 5, 100000, 1e-3);
  CHECK(survival_compare(batch, f.rule.law()) <= 0.015);

  const TargetMeasure mu = target::double_exponential(1, 1);
  const Embedding d = solve(mu, dx_over_x2());
  const SampleBatch exact = sample_exact(d.rule, 6, 100000);
  const double d2 = ks_two_sample(sample_ppp(d.rule, 7, 100000, 1e-2), exact);
  const double d3 = ks_two_sample(sample_ppp(d.rule, 7, 100000, 1e-3), exact);
  CHECK(d3 <= 0.01);
  CHECK(d3 <= d2);
}

TEST_CASE("PPP on the three-point example") {
  AtomicOptions lenient;
  lenient.lenient = true;
  const TargetMeasure mu = target::from_atoms({{-1, 0.5}, {1, 0.25}, {3, 0.25}});
  const Breakpoints bp = solve_atomic(mu, dx_over_x2(), lenient);
  const std::size_t N = 50000;
  const SampleBatch batch = sample_ppp(make_rule(bp, dx_over_x2()), 8, N, 1e-3);
  std::size_t at1 = 0;
  for (const Record& r : batch.records) at1 += r.value == 1.0;
  CHECK(std::abs(at1 / double(N) - 0.25) <= 3 * std::sqrt(0.25 * 0.75 / N));
}

TEST_CASE("random walk") {
  const LocalTimeEstimate est = walk_local_time(0.01, 1.0, 12, 10000);
  CHECK(std::abs(est.mean - std::sqrt(2 / M_PI)) <= 3 * est.std_error + 0.01);

  const TargetMeasure mu = target::double_exponential(1, 1);
  const Embedding e = solve(mu, walk_char_measure(Functional::extrema));
  const SampleBatch ext = walk_embed(e.rule, Functional::extrema, 0.01, 13, 5000);
  CHECK(ext.meta.abandoned == 0);
  CHECK(ks_statistic(ext, mu).ks_distance <= 0.03);

  // A rule solved for dx/x^2 walks with local time rescaled by kappa = 1/2.
  CHECK(walk_kappa(dx_over_x2(), Functional::extrema) == doctest::Approx(0.5));
  CHECK_THROWS_AS(walk_kappa(charm::brownian_age(), Functional::extrema), EmbedError);
  const SampleBatch az = walk_embed(solve(mu, dx_over_x2()).rule, Functional::azema, 0.01, 14, 5000);
  CHECK(ks_statistic(az, mu).ks_distance <= 0.03);
}

#include "embed/sim.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "embed/error.hpp"
#include "embed/quadrature.hpp"
#include "embed/rng.hpp"

namespace embed {

std::vector<double> SampleBatch::values() const {
  std::vector<double> v;
  v.reserve(records.size());
  for (const Record& r : records) v.push_back(r.value);
  return v;
}

std::vector<double> SampleBatch::local_times() const {
  std::vector<double> v;
  v.reserve(records.size());
  for (const Record& r : records) v.push_back(r.l);
  return v;
}

namespace {

// Runs kernel(i, record) for every index; a false return drops the record.
// Output order is the index order whatever the schedule.
template <class Kernel>
std::size_t run_records(std::vector<Record>& out, std::size_t count, bool parallel, int threads, Kernel&& kernel) {
  std::vector<Record> recs(count);
  std::vector<unsigned char> ok(count, 0);
  const auto n = static_cast<std::int64_t>(count);
  if (parallel) {
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 64) num_threads(nt)
    for (std::int64_t i = 0; i < n; ++i) ok[i] = kernel(static_cast<std::uint64_t>(i), recs[i]) ? 1 : 0;
  } else {
    for (std::int64_t i = 0; i < n; ++i) ok[i] = kernel(static_cast<std::uint64_t>(i), recs[i]) ? 1 : 0;
  }
  out.clear();
  out.reserve(count);
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (ok[i]) {
      out.push_back(recs[i]);
    } else {
      ++dropped;
    }
  }
  return dropped;
}

void emit(const StoppingRule& rule, double l, double u, Record& r) {
  r.l = l;
  if (u < rule.prob_plus(l)) {
    r.side = StopSide::pos;
    r.value = rule.phi_plus(l);
  } else {
    r.side = StopSide::neg;
    r.value = -rule.phi_minus(l);
  }
}

SampleBatch exact_impl(const StoppingRule& rule, std::uint64_t seed, std::size_t count, bool parallel,
                       int threads) {
  const LocalTimeLaw& law = rule.law();
  const double cap = rule.cap();
  if (!std::isfinite(cap) && !(law.frozen_hazard() > 0.0)) {
    throw EmbedError(ErrorKind::configuration,
                     "hazard integral does not diverge within the tabulated range; L_T may be infinite");
  }
  SampleBatch b;
  b.meta.sampler = "exact";
  b.meta.seed = seed;
  b.meta.count = count;
  run_records(b.records, count, parallel, threads, [&](std::uint64_t i, Record& r) {
    rng::Stream s(seed, i);
    const double l = law.from_exponential(s.exponential());
    const double u = s.uniform();
    if (l >= cap) {
      r = {cap, 0.0, StopSide::zero};
      return true;
    }
    if (!std::isfinite(l)) return false;
    emit(rule, l, u, r);
    return true;
  });
  return b;
}

struct CellTable {
  double mesh = 0.0;
  double cap = kInf;
  std::vector<double> C;  // C[k] = sum of hazard * length over cells < k
  bool ends_at_cap = false;

  double cell_start(std::size_t k) const { return static_cast<double>(k) * mesh; }
  double cell_len(std::size_t k) const { return std::min(mesh, cap - cell_start(k)); }
  double cell_mid(std::size_t k) const { return cell_start(k) + 0.5 * cell_len(k); }
  std::size_t cells_to_cap() const {
    return std::isfinite(cap) ? static_cast<std::size_t>(std::ceil(cap / mesh)) : static_cast<std::size_t>(-1);
  }
};

double cell_mass(const StoppingRule& rule, const CellTable& t, std::size_t k, bool integrate) {
  const auto hazard = [&rule](double l) { return rule.hazard_plus(l) + rule.hazard_minus(l); };
  if (!integrate) return hazard(t.cell_mid(k)) * t.cell_len(k);
  const double a = t.cell_start(k);
  const double len = t.cell_len(k);
  // The first cells may hold an integrable singularity at l = 0; further out a
  // 4-point Gauss-Legendre rule is plenty.
  if (k < 16) return quad::integrate(hazard, a, a + len, {1e-8, 0.0, 30}).value;
  static constexpr double x[2] = {0.3399810435848563, 0.8611363115940526};
  static constexpr double w[2] = {0.6521451548625461, 0.3478548451374538};
  const double c = a + 0.5 * len;
  const double r = 0.5 * len;
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) sum += w[i] * (hazard(c - r * x[i]) + hazard(c + r * x[i]));
  return sum * r;
}

CellTable build_cells(const StoppingRule& rule, double mesh, std::size_t limit, bool integrate) {
  CellTable t;
  t.mesh = mesh;
  t.cap = rule.cap();
  const std::size_t to_cap = t.cells_to_cap();
  t.C.push_back(0.0);
  for (std::size_t k = 0; k < limit; ++k) {
    if (k >= to_cap) {
      t.ends_at_cap = true;
      break;
    }
    t.C.push_back(t.C.back() + cell_mass(rule, t, k, integrate));
    if (t.C.back() > 45.0) break;  // survival below 3e-20
  }
  return t;
}

// Position of the hit within cell k for a uniform v. The power-law fit
// h(l) ~ c l^p through two interior points is exact for the 1/sqrt(l) hazard
// of a sqrt-shaped boundary and close to linear in regular cells.
double place(const StoppingRule& rule, const CellTable& t, std::size_t k, double v, PppOptions::Placement mode) {
  const double a = t.cell_start(k);
  const double len = t.cell_len(k);
  if (mode == PppOptions::Placement::midpoint) return a + 0.5 * len;
  const double uniform = a + v * len;
  if (mode == PppOptions::Placement::uniform) return uniform;
  const double l1 = a + len / 3.0, l2 = a + 2.0 * len / 3.0;
  const double h1 = rule.hazard_plus(l1) + rule.hazard_minus(l1);
  const double h2 = rule.hazard_plus(l2) + rule.hazard_minus(l2);
  if (!(h1 > 0.0 && h2 > 0.0 && std::isfinite(h1) && std::isfinite(h2))) return uniform;
  const double q = std::log(h1 / h2) / std::log(l1 / l2) + 1.0;  // exponent of the cumulative
  const double b = a + len;
  if (a == 0.0) return q > 0.0 ? b * std::pow(v, 1.0 / q) : uniform;
  const double qlr = q * std::log(b / a);
  if (std::abs(qlr) < 1e-12) return a * std::pow(b / a, v);
  if (qlr > 700.0) return uniform;
  const double x = a * std::exp(std::log1p(v * std::expm1(qlr)) / q);
  return std::isfinite(x) ? std::clamp(x, a, b) : uniform;
}

SampleBatch ppp_impl(const StoppingRule& rule, std::uint64_t seed, std::size_t count, double mesh, bool parallel,
                     int threads, const PppOptions& opts) {
  if (!(mesh > 0.0)) throw EmbedError(ErrorKind::invalid_parameter, "mesh must be positive");
  const CellTable t = build_cells(rule, mesh, opts.table_cells, opts.integrate_cells);
  SampleBatch b;
  b.meta.sampler = "ppp";
  b.meta.seed = seed;
  b.meta.count = count;
  b.meta.mesh = mesh;
  // Marking cell k with probability 1 - exp(-h_k dl), first hit wins, is the
  // same as the first k whose cumulative sum passes a unit exponential.
  b.meta.truncated = run_records(b.records, count, parallel, threads, [&](std::uint64_t i, Record& r) {
    rng::Stream s(seed, i);
    const double e = s.exponential();
    const double u = s.uniform();
    const double v = s.uniform_open();
    std::size_t k;
    if (e < t.C.back()) {
      k = static_cast<std::size_t>(std::upper_bound(t.C.begin(), t.C.end(), e) - t.C.begin()) - 1;
    } else {
      if (t.ends_at_cap) {
        r = {t.cap, 0.0, StopSide::zero};
        return true;
      }
      const std::size_t to_cap = t.cells_to_cap();
      double acc = t.C.back();
      k = t.C.size() - 1;
      for (;; ++k) {
        if (k >= opts.max_cells) return false;
        if (k >= to_cap) {
          r = {t.cap, 0.0, StopSide::zero};
          return true;
        }
        acc += cell_mass(rule, t, k, opts.integrate_cells);
        if (acc > e) break;
      }
    }
    emit(rule, place(rule, t, k, v, opts.placement), u, r);
    return true;
  });
  return b;
}

constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();

// Smallest integer n with n >= x, saturating.
std::int64_t ceil_count(double x) {
  if (!(x < 9e18)) return kNever;
  return std::max<std::int64_t>(static_cast<std::int64_t>(std::ceil(x)), 1);
}

struct WalkContext {
  const StoppingRule& rule;
  Functional f;
  double h;
  double kappa;
  std::uint64_t step_cap;
  double value_scale;
  bool jitter;
};

bool walk_path(const WalkContext& c, rng::Stream& s, Record& r) {
  rng::Coin coin(s);
  const double h = c.h;
  const double cap = c.rule.cap();
  std::uint64_t steps = 0;
  double L = 0.0;
  for (;;) {
    // At zero: this visit counts before the next move. The excursion that
    // follows starts somewhere inside the visit's local-time slot
    // [L - h, L); a uniform position keeps the per-visit hazard unbiased even
    // where the boundary hazard is singular at l = 0.
    L += h;
    const double l = c.kappa * (L - (c.jitter ? s.uniform_open() : 0.5) * h);
    if (l >= cap) {
      r = {cap, 0.0, StopSide::zero};
      return true;
    }
    const double up = c.rule.phi_plus(l);
    const double dn = c.rule.phi_minus(l);
    const int first = coin.step();
    ++steps;
    std::int64_t S = first;
    if (c.f == Functional::extrema) {
      const std::int64_t iu = ceil_count(up / h);
      const std::int64_t id = ceil_count(dn / h);
      while (S != 0) {
        if (S >= iu) {
          r = {l, static_cast<double>(S) * h, StopSide::pos};
          return true;
        }
        if (-S >= id) {
          r = {l, static_cast<double>(S) * h, StopSide::neg};
          return true;
        }
        if (steps >= c.step_cap) return false;
        S += coin.step();
        ++steps;
      }
      continue;
    }
    // Age-type statistics: stop once the time since the last zero, in steps,
    // reaches a threshold fixed for the excursion by its sign.
    const double level = first > 0 ? up : dn;
    double need;
    if (c.f == Functional::azema) {
      const double q = level / h;
      need = q * q * 2.0 / M_PI;
    } else {
      need = level / (h * h);
    }
    const std::int64_t k_stop = ceil_count(need);
    std::int64_t k = 1;
    for (;;) {
      if (k >= k_stop) {
        const double age = static_cast<double>(k) * h * h;
        const double mag = c.f == Functional::azema ? std::sqrt(M_PI / 2.0 * age) : age;
        r = {l, first > 0 ? c.value_scale * mag : -c.value_scale * mag, first > 0 ? StopSide::pos : StopSide::neg};
        return true;
      }
      if (steps >= c.step_cap) return false;
      S += coin.step();
      ++steps;
      if (S == 0) break;
      ++k;
    }
  }
}

SampleBatch walk_impl(const StoppingRule& rule, Functional f, double h, std::uint64_t seed, std::size_t count,
                      bool parallel, int threads, const WalkOptions& opts) {
  if (!(h > 0.0)) throw EmbedError(ErrorKind::invalid_parameter, "space step must be positive");
  const WalkContext c{rule, f, h, walk_kappa(rule.n(), f), opts.step_cap,
                      f == Functional::azema && opts.report_alpha ? 2.0 : 1.0, opts.jitter};
  SampleBatch b;
  b.meta.sampler = "walk";
  b.meta.seed = seed;
  b.meta.count = count;
  b.meta.functional = to_string(f);
  b.meta.space_step = h;
  b.meta.kappa = c.kappa;
  b.meta.abandoned = run_records(b.records, count, parallel, threads, [&](std::uint64_t i, Record& r) {
    rng::Stream s(seed, i);
    return walk_path(c, s, r);
  });
  return b;
}

}  // namespace

SampleBatch sample_exact(const StoppingRule& rule, std::uint64_t seed, std::size_t count, int threads) {
  return exact_impl(rule, seed, count, true, threads);
}

SampleBatch sample_exact_serial(const StoppingRule& rule, std::uint64_t seed, std::size_t count) {
  return exact_impl(rule, seed, count, false, 1);
}

SampleBatch sample_ppp(const StoppingRule& rule, std::uint64_t seed, std::size_t count, double mesh, int threads,
                       const PppOptions& opts) {
  return ppp_impl(rule, seed, count, mesh, true, threads, opts);
}

SampleBatch sample_ppp_serial(const StoppingRule& rule, std::uint64_t seed, std::size_t count, double mesh,
                              const PppOptions& opts) {
  return ppp_impl(rule, seed, count, mesh, false, 1, opts);
}

const char* to_string(Functional f) {
  switch (f) {
    case Functional::extrema: return "extrema";
    case Functional::azema: return "azema";
    case Functional::age: return "age";
  }
  return "?";
}

Functional functional_from_string(const std::string& s) {
  if (s == "extrema") return Functional::extrema;
  if (s == "azema") return Functional::azema;
  if (s == "age") return Functional::age;
  throw EmbedError(ErrorKind::configuration, "unknown functional '" + s + "' (extrema, azema, age)");
}

CharMeasure walk_char_measure(Functional f) {
  // Under h * #zero visits the Ito measure gives n(sup |e| > y) = 1/y, split
  // evenly by sign; the Azema statistic sqrt(pi/2) sgn sqrt(t - g) inherits it.
  if (f == Functional::age) return charm::brownian_age();
  return charm::power_signed(0.5, 0.5);
}

double walk_kappa(const CharMeasure& solved, Functional f) {
  const CharMeasure truth = walk_char_measure(f);
  double kappa = 0.0;
  for (double u : {0.25, 1.0, 4.0}) {
    for (Side side : {Side::pos, Side::neg}) {
      if (side == Side::neg && solved.one_sided()) continue;
      const double ratio = truth.side(side, u) / solved.side(side, u);
      if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        throw EmbedError(ErrorKind::configuration, "boundary was not solved for this functional");
      }
      if (kappa == 0.0) kappa = ratio;
      if (std::abs(ratio - kappa) > 1e-9 * kappa) {
        throw EmbedError(ErrorKind::configuration, std::string("characteristic measure '") + solved.label() +
                                                       "' is not a multiple of the " + to_string(f) +
                                                       " measure");
      }
    }
  }
  return kappa;
}

SampleBatch walk_embed(const StoppingRule& rule, Functional f, double h, std::uint64_t seed, std::size_t count,
                       int threads, const WalkOptions& opts) {
  return walk_impl(rule, f, h, seed, count, true, threads, opts);
}

SampleBatch walk_embed_serial(const StoppingRule& rule, Functional f, double h, std::uint64_t seed,
                              std::size_t count, const WalkOptions& opts) {
  return walk_impl(rule, f, h, seed, count, false, 1, opts);
}

LocalTimeEstimate walk_local_time(double h, double t, std::uint64_t seed, std::size_t count, int threads) {
  if (!(h > 0.0) || !(t > 0.0) || count < 2) throw EmbedError(ErrorKind::invalid_parameter, "bad calibration budget");
  const auto steps = static_cast<std::int64_t>(std::llround(t / (h * h)));
  const auto n = static_cast<std::int64_t>(count);
  double sum = 0.0, sum2 = 0.0;
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : sum, sum2) num_threads(nt)
  for (std::int64_t i = 0; i < n; ++i) {
    rng::Stream s(seed, static_cast<std::uint64_t>(i));
    rng::Coin coin(s);
    std::int64_t S = 0, visits = 0;
    for (std::int64_t k = 0; k < steps; ++k) {
      visits += S == 0;
      S += coin.step();
    }
    const double L = h * static_cast<double>(visits);
    sum += L;
    sum2 += L * L;
  }
  const double m = sum / static_cast<double>(count);
  const double var = (sum2 - static_cast<double>(count) * m * m) / static_cast<double>(count - 1);
  return {m, std::sqrt(std::max(var, 0.0) / static_cast<double>(count))};
}

}  // namespace embed

#include "embed/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "embed/error.hpp"

namespace embed {

namespace {

// Kolmogorov survival Q(c) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 c^2).
double kolmogorov_q(double c) {
  if (c < 0.2) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double t = std::exp(-2.0 * k * k * c * c);
    s += (k % 2 ? t : -t);
    if (t < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

bool same_point(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

// mu((-inf, x]) restricted to the continuous part, normalised.
double continuous_cdf(const TargetMeasure& mu, double x) {
  const ContinuousLaw* c = mu.continuous();
  return c->lower(x) / c->mass();
}

}  // namespace

double kolmogorov_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) throw EmbedError(ErrorKind::invalid_parameter, "level must lie in (0, 1)");
  double lo = 0.2, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_q(mid) > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

GofReport ks_statistic(const SampleBatch& batch, const TargetMeasure& mu, double level) {
  return ks_statistic(batch.values(), mu, level);
}

GofReport ks_statistic(std::vector<double> values, const TargetMeasure& mu, double level) {
  if (values.empty()) throw EmbedError(ErrorKind::invalid_parameter, "empty batch");
  GofReport r;
  r.level = level;
  r.sample_size = values.size();
  const double N = static_cast<double>(values.size());
  std::sort(values.begin(), values.end());

  std::vector<double> cont;
  cont.reserve(values.size());
  const std::vector<Atom>& atoms = mu.atoms();
  std::vector<std::size_t> hits(atoms.size(), 0);
  for (double v : values) {
    const auto it = std::lower_bound(atoms.begin(), atoms.end(), v - 1e-9 * std::max(1.0, std::abs(v)),
                                     [](const Atom& a, double x) { return a.location < x; });
    if (it != atoms.end() && same_point(v, it->location)) {
      ++hits[static_cast<std::size_t>(it - atoms.begin())];
    } else {
      cont.push_back(v);
    }
  }
  bool atoms_ok = true;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    AtomCheck a;
    a.location = atoms[k].location;
    a.expected = atoms[k].mass;
    a.observed = static_cast<double>(hits[k]) / N;
    const double sd = std::sqrt(N * a.expected * (1.0 - a.expected));
    a.z = sd > 0.0 ? (static_cast<double>(hits[k]) - N * a.expected) / sd
                   : (static_cast<double>(hits[k]) == N * a.expected ? 0.0 : kInf);
    atoms_ok = atoms_ok && std::abs(a.z) <= 3.0;
    r.atoms.push_back(a);
  }

  r.continuous_size = cont.size();
  if (mu.has_continuous_part() && !cont.empty()) {
    const double M = static_cast<double>(cont.size());
    double d = 0.0;
    for (std::size_t i = 0; i < cont.size(); ++i) {
      const double F = continuous_cdf(mu, cont[i]);
      d = std::max({d, static_cast<double>(i + 1) / M - F, F - static_cast<double>(i) / M});
    }
    r.ks_distance = d;
    r.critical_value = kolmogorov_quantile(level) / std::sqrt(M);
  } else if (!cont.empty()) {
    // Values off every atom of a purely atomic law.
    r.ks_distance = static_cast<double>(cont.size()) / N;
    r.critical_value = 0.0;
  }
  r.pass = atoms_ok && r.ks_distance <= r.critical_value;
  return r;
}

std::string GofReport::to_json() const {
  nlohmann::ordered_json j;
  j["ks_distance"] = ks_distance;
  j["sample_size"] = sample_size;
  j["continuous_size"] = continuous_size;
  j["level"] = level;
  j["critical_value"] = critical_value;
  j["pass"] = pass;
  auto arr = nlohmann::ordered_json::array();
  for (const AtomCheck& a : atoms) {
    arr.push_back({{"location", a.location}, {"expected", a.expected}, {"observed", a.observed}, {"z", a.z}});
  }
  j["atoms"] = arr;
  return j.dump(2);
}

std::string GofReport::summary() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << "  KS " << ks_distance << " (critical " << critical_value << ", level " << level
     << ", n = " << continuous_size << "/" << sample_size << ")";
  for (const AtomCheck& a : atoms) {
    os << "\n  atom " << a.location << ": expected " << a.expected << ", observed " << a.observed << ", z = " << a.z;
  }
  return os.str();
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw EmbedError(ErrorKind::invalid_parameter, "empty batch");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_two_sample(const SampleBatch& a, const SampleBatch& b) { return ks_two_sample(a.values(), b.values()); }

double survival_compare(const SampleBatch& batch, const std::function<double(double)>& survival) {
  std::vector<double> l = batch.local_times();
  if (l.empty()) throw EmbedError(ErrorKind::invalid_parameter, "empty batch");
  std::sort(l.begin(), l.end());
  const double N = static_cast<double>(l.size());
  double gap = std::abs(1.0 - survival(0.0));
  // Empirical survival is (N - i)/N just below l[i] and drops at each tie block.
  for (std::size_t i = 0; i < l.size();) {
    std::size_t k = i;
    while (k < l.size() && l[k] == l[i]) ++k;
    const double s = survival(l[i]);
    const double s_left = survival(std::nextafter(l[i], -kInf));
    gap = std::max({gap, std::abs(static_cast<double>(l.size() - i) / N - s_left),
                    std::abs(static_cast<double>(l.size() - k) / N - s)});
    i = k;
  }
  return gap;
}

double survival_compare(const SampleBatch& batch, const LocalTimeLaw& law) {
  return survival_compare(batch, [&law](double l) { return law.survival(l); });
}

double rescale_invariance(const TargetMeasure& mu, const CharMeasure& n, double c, const std::vector<double>& grid,
                          const EmbedOptions& opts) {
  if (!(c > 0.0)) throw EmbedError(ErrorKind::invalid_parameter, "c must be positive");
  const Embedding base = solve(mu, n, opts);
  const Embedding scaled = solve(mu, n.scaled(c), base.kind, opts);
  const auto dev = [](double a, double b) {
    if (a == b) return 0.0;  // includes matching infinities
    return std::abs(a - b);
  };
  double m = 0.0;
  for (double l : grid) {
    m = std::max(m, dev(scaled.phi_plus(l), base.phi_plus(c * l)));
    m = std::max(m, dev(scaled.phi_minus(l), base.phi_minus(c * l)));
  }
  return m;
}

double round_trip_error(const StoppedLaw& law, const TargetMeasure& mu, const std::vector<double>& grid) {
  double m = 0.0;
  for (double y : grid) {
    if (y > 0) m = std::max(m, std::abs(law.upper(y) - mu.upper_tail(y)));
    if (y < 0) m = std::max(m, std::abs(law.lower(y) - mu.lower_tail(y)));
  }
  return m;
}

}  // namespace embed

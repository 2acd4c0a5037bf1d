#include "embed/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "embed/error.hpp"

namespace embed {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid_parameter";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::unbalanced: return "unbalanced";
    case ErrorKind::inadmissible: return "inadmissible";
    case ErrorKind::use_atomic: return "use_atomic";
    case ErrorKind::use_positive: return "use_positive";
    case ErrorKind::out_of_scope: return "out_of_scope";
    case ErrorKind::configuration: return "configuration";
  }
  return "unknown";
}

const char* to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::absolutely_continuous: return "absolutely-continuous";
    case MeasureKind::purely_atomic: return "purely-atomic";
    case MeasureKind::mixed_positive: return "mixed-positive";
  }
  return "unknown";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::admissible: return "admissible";
    case Verdict::unbalanced: return "unbalanced";
    case Verdict::unsupported: return "unsupported";
  }
  return "unknown";
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw EmbedError(ErrorKind::invalid_parameter, msg); }

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) bad(std::string(name) + " must be positive and finite");
}

// ---- continuous families --------------------------------------------------

class DoubleExponential final : public ContinuousLaw {
 public:
  DoubleExponential(double lambda, double gamma)
      : l_(lambda), g_(gamma), wp_(lambda / (lambda + gamma)), wn_(gamma / (lambda + gamma)) {}
  double density(double x) const override {
    return x >= 0 ? wp_ * l_ * std::exp(-l_ * x) : wn_ * g_ * std::exp(g_ * x);
  }
  double upper(double t) const override {
    return t >= 0 ? wp_ * std::exp(-l_ * t) : 1.0 - wn_ * std::exp(g_ * t);
  }
  double lower(double t) const override {
    return t <= 0 ? wn_ * std::exp(g_ * t) : 1.0 - wp_ * std::exp(-l_ * t);
  }
  double lo() const override { return -kInf; }
  double hi() const override { return kInf; }
  std::vector<double> breakpoints() const override { return {0.0}; }

 private:
  double l_, g_, wp_, wn_;
};

// Density K/x^2 on (-inf, -h] and [g, inf).
class FUniform final : public ContinuousLaw {
 public:
  FUniform(double g, double h, double K) : g_(g), h_(h), k_(K) {}
  double density(double x) const override {
    return (x >= g_ || x <= -h_) ? k_ / (x * x) : 0.0;
  }
  double upper(double t) const override {
    if (t >= g_) return k_ / t;
    if (t > -h_) return k_ / g_;
    return 1.0 - k_ / -t;
  }
  double lower(double t) const override {
    if (t <= -h_) return k_ / -t;
    if (t < g_) return k_ / h_;
    return 1.0 - k_ / t;
  }
  double lo() const override { return -kInf; }
  double hi() const override { return kInf; }
  std::vector<double> breakpoints() const override { return {-h_, g_}; }

 private:
  double g_, h_, k_;
};

class Uniform final : public ContinuousLaw {
 public:
  Uniform(double a, double b) : a_(a), b_(b) {}
  double density(double x) const override { return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0; }
  double upper(double t) const override { return std::clamp((b_ - t) / (b_ - a_), 0.0, 1.0); }
  double lower(double t) const override { return std::clamp((t - a_) / (b_ - a_), 0.0, 1.0); }
  double lo() const override { return a_; }
  double hi() const override { return b_; }
  std::vector<double> breakpoints() const override { return {a_, b_}; }

 private:
  double a_, b_;
};

// Tail exp(-a x^b) on x >= 0.
class Weibull final : public ContinuousLaw {
 public:
  Weibull(double a, double b) : a_(a), b_(b) {}
  double density(double x) const override {
    if (x < 0) return 0.0;
    if (x == 0) return b_ == 1.0 ? a_ : (b_ < 1.0 ? kInf : 0.0);
    const double xb = std::pow(x, b_);
    return a_ * b_ * xb / x * std::exp(-a_ * xb);
  }
  double upper(double t) const override { return t <= 0 ? 1.0 : std::exp(-a_ * std::pow(t, b_)); }
  double lower(double t) const override { return t <= 0 ? 0.0 : -std::expm1(-a_ * std::pow(t, b_)); }
  double lo() const override { return 0.0; }
  double hi() const override { return kInf; }
  std::vector<double> breakpoints() const override { return {0.0}; }

 private:
  double a_, b_;
};

class Gaussian final : public ContinuousLaw {
 public:
  Gaussian(double sigma, double mean) : s_(sigma), m_(mean) {}
  double density(double x) const override {
    const double z = (x - m_) / s_;
    return std::exp(-0.5 * z * z) / (s_ * std::sqrt(2.0 * M_PI));
  }
  double upper(double t) const override { return 0.5 * std::erfc((t - m_) / (s_ * M_SQRT2)); }
  double lower(double t) const override { return 0.5 * std::erfc((m_ - t) / (s_ * M_SQRT2)); }
  double lo() const override { return -kInf; }
  double hi() const override { return kInf; }

 private:
  double s_, m_;
};

// Piecewise-constant density between tail knots.
class TailGridLaw final : public ContinuousLaw {
 public:
  TailGridLaw(std::vector<double> x, std::vector<double> seg_mass)
      : x_(std::move(x)), m_(std::move(seg_mass)) {
    const std::size_t s = m_.size();
    prefix_.assign(s + 1, 0.0);
    suffix_.assign(s + 1, 0.0);
    for (std::size_t k = 0; k < s; ++k) prefix_[k + 1] = prefix_[k] + m_[k];
    for (std::size_t k = s; k-- > 0;) suffix_[k] = suffix_[k + 1] + m_[k];
    std::size_t first = 0;
    while (first < s && m_[first] <= 0) ++first;
    std::size_t last = s;
    while (last > 0 && m_[last - 1] <= 0) --last;
    lo_ = first < s ? x_[first] : x_.front();
    hi_ = last > 0 ? x_[last] : x_.back();
  }
  double density(double t) const override {
    const std::ptrdiff_t k = segment(t);
    if (k < 0) return 0.0;
    return m_[k] / (x_[k + 1] - x_[k]);
  }
  double upper(double t) const override {
    if (t <= x_.front()) return suffix_[0];
    if (t >= x_.back()) return 0.0;
    const std::ptrdiff_t k = segment(t);
    return suffix_[k + 1] + m_[k] * (x_[k + 1] - t) / (x_[k + 1] - x_[k]);
  }
  double lower(double t) const override {
    if (t <= x_.front()) return 0.0;
    if (t >= x_.back()) return prefix_.back();
    const std::ptrdiff_t k = segment(t);
    return prefix_[k] + m_[k] * (t - x_[k]) / (x_[k + 1] - x_[k]);
  }
  double mass() const override { return prefix_.back(); }
  double lo() const override { return lo_; }
  double hi() const override { return hi_; }
  std::vector<double> breakpoints() const override { return x_; }

 private:
  std::ptrdiff_t segment(double t) const {
    if (t < x_.front() || t >= x_.back()) return -1;
    const auto it = std::upper_bound(x_.begin(), x_.end(), t);
    return (it - x_.begin()) - 1;
  }
  std::vector<double> x_, m_, prefix_, suffix_;
  double lo_ = 0.0, hi_ = 0.0;
};

// Largest u in [lo, hi] with pred(u) true, given pred(lo) and !pred(hi).
template <class Pred>
double bisect(double lo, double hi, Pred pred) {
  for (int it = 0; it < 4000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (pred(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

// ---- TargetMeasure --------------------------------------------------------

TargetMeasure::TargetMeasure(std::shared_ptr<const ContinuousLaw> continuous, std::vector<Atom> atoms,
                             std::string label, double mass_at_infinity)
    : continuous_(std::move(continuous)), mass_at_infinity_(mass_at_infinity), label_(std::move(label)) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.location)) bad("atom location must be finite");
    if (!(a.mass > 0.0)) bad("atom mass must be positive");
    if (!atoms_.empty() && atoms_.back().location == a.location) {
      atoms_.back().mass += a.mass;
    } else {
      atoms_.push_back(a);
    }
  }
  suffix_.assign(atoms_.size() + 1, 0.0);
  for (std::size_t k = atoms_.size(); k-- > 0;) suffix_[k] = suffix_[k + 1] + atoms_[k].mass;
  if (mass_at_infinity_ < 0.0) bad("mass at infinity must be non-negative");
  const double total = continuous_mass() + suffix_[0] + mass_at_infinity_;
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "target measure has total mass " << total << ", expected 1";
    bad(os.str());
  }
  if (continuous_ && !atoms_.empty()) {
    const bool negative = continuous_->lower(0.0) > 0.0 || atoms_.front().location < 0.0;
    if (negative) {
      throw EmbedError(ErrorKind::out_of_scope,
                       "mixed atomic + continuous laws are only supported on the positive half-line");
    }
  }
}

MeasureKind TargetMeasure::kind() const {
  if (atoms_.empty()) return MeasureKind::absolutely_continuous;
  if (!continuous_) return MeasureKind::purely_atomic;
  return MeasureKind::mixed_positive;
}

double TargetMeasure::continuous_mass() const { return continuous_ ? continuous_->mass() : 0.0; }

double TargetMeasure::atom_mass(double t) const {
  const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), t,
                                   [](const Atom& a, double v) { return a.location < v; });
  return (it != atoms_.end() && it->location == t) ? it->mass : 0.0;
}

double TargetMeasure::upper_tail(double t) const {
  const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), t,
                                   [](const Atom& a, double v) { return a.location < v; });
  const double c = continuous_ ? continuous_->upper(t) : 0.0;
  return c + suffix_[it - atoms_.begin()] + mass_at_infinity_;
}

double TargetMeasure::open_upper(double t) const {
  const auto it = std::upper_bound(atoms_.begin(), atoms_.end(), t,
                                   [](double v, const Atom& a) { return v < a.location; });
  const double c = continuous_ ? continuous_->upper(t) : 0.0;
  return c + suffix_[it - atoms_.begin()] + mass_at_infinity_;
}

double TargetMeasure::lower_tail(double t) const {
  const auto it = std::upper_bound(atoms_.begin(), atoms_.end(), t,
                                   [](double v, const Atom& a) { return v < a.location; });
  const double c = continuous_ ? continuous_->lower(t) : 0.0;
  return c + (suffix_[0] - suffix_[it - atoms_.begin()]);
}

double TargetMeasure::strict_lower(double t) const {
  const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), t,
                                   [](const Atom& a, double v) { return a.location < v; });
  const double c = continuous_ ? continuous_->lower(t) : 0.0;
  return c + (suffix_[0] - suffix_[it - atoms_.begin()]);
}

double TargetMeasure::density(double x) const { return continuous_ ? continuous_->density(x) : 0.0; }

double TargetMeasure::continuous_side_tail(Side side, double u) const {
  if (!continuous_) return 0.0;
  return side == Side::pos ? continuous_->upper(u) : continuous_->lower(-u);
}

double TargetMeasure::side_tail(Side side, double u) const {
  return side == Side::pos ? upper_tail(u) : lower_tail(-u);
}

double TargetMeasure::side_mass(Side side) const {
  return side == Side::pos ? open_upper(0.0) : strict_lower(0.0);
}

double TargetMeasure::a_mu() const {
  double a = kInf;
  if (continuous_ && continuous_->mass() > 0) a = continuous_->lo();
  if (!atoms_.empty()) a = std::min(a, atoms_.front().location);
  return a;
}

double TargetMeasure::b_mu() const {
  if (mass_at_infinity_ > 0) return kInf;
  double b = -kInf;
  if (continuous_ && continuous_->mass() > 0) b = continuous_->hi();
  if (!atoms_.empty()) b = std::max(b, atoms_.back().location);
  return b;
}

std::vector<double> TargetMeasure::breakpoints() const {
  std::vector<double> out;
  if (continuous_) out = continuous_->breakpoints();
  for (const Atom& a : atoms_) out.push_back(a.location);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool TargetMeasure::is_symmetric(double tol) const {
  if (mass_at_infinity_ > 0) return false;
  for (const Atom& a : atoms_) {
    if (std::abs(atom_mass(-a.location) - a.mass) > tol * a.mass) return false;
  }
  if (!continuous_) return true;
  const auto close = [tol](double a, double b) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) + 1e-300;
  };
  for (int k = -60; k <= 60; ++k) {
    const double u = std::pow(10.0, k / 6.0);
    if (!close(continuous_->upper(u), continuous_->lower(-u))) return false;
    if (!close(continuous_->density(u), continuous_->density(-u))) return false;
  }
  return true;
}

SideGrid TargetMeasure::side_grid(Side side, const GridOptions& opts) const {
  SideGrid out;
  out.u.push_back(0.0);
  std::vector<double> bps;
  for (double b : breakpoints()) {
    const double u = side == Side::pos ? b : -b;
    if (u > 0) bps.push_back(u);
  }
  std::sort(bps.begin(), bps.end());
  const double cmass = continuous_side_tail(side, 0.0);
  if (side == Side::pos) {
    out.support_end = b_mu();
  } else {
    out.support_end = -a_mu();
  }
  if (!(cmass > 0.0)) {
    // Atoms only on this side: knots at the atoms.
    for (double b : bps) out.u.push_back(b);
    out.support_start = bps.empty() ? 0.0 : bps.front();
    out.scale = out.support_start > 0 ? out.support_start : 1.0;
    return out;
  }
  const auto T = [&](double u) { return continuous_side_tail(side, u); };

  double hi = 1.0;
  while (T(hi) >= 0.5 * cmass && hi < 1e300) hi *= 2.0;
  const double s0 = T(hi * 1e-300) < cmass ? 0.0 : bisect(0.0, hi, [&](double u) { return T(u) >= cmass; });
  const double med = bisect(s0, hi, [&](double u) { return T(u) >= 0.5 * cmass; });
  const double w = med > s0 ? med - s0 : std::max(1.0, s0);
  const double cont_end = side == Side::pos ? continuous_->hi() : -continuous_->lo();
  const double e = std::min(cont_end, std::isfinite(out.support_end) ? out.support_end : kInf);
  out.support_start = s0;
  out.scale = w;

  const double total_side = side_mass(side);
  const double r = std::pow(10.0, 1.0 / opts.per_decade) - 1.0;
  const double far = s0 + w * opts.far;
  const double last_bp = bps.empty() ? 0.0 : bps.back();
  std::size_t next_bp = 0;

  if (s0 > 0) out.u.push_back(s0);
  double u = s0 + w * opts.depth;
  if (std::isfinite(e) && u >= e) u = s0 + 0.5 * (e - s0);
  out.u.push_back(u);
  while (true) {
    const double dlo = u - s0;
    const double dhi = e - u;
    if (std::isfinite(e) && dhi <= opts.end_gap * std::max(std::abs(e), w)) break;
    const double Tu = T(u);
    if (u > last_bp) {
      const double finite_tail = side_tail(side, u) - (side == Side::pos ? mass_at_infinity_ : 0.0);
      if (finite_tail < opts.tail_floor * total_side) break;
      if (u > far) break;
    }
    double v = u + r * std::min(dlo, dhi);
    while (next_bp < bps.size() && bps[next_bp] <= u * (1.0 + 1e-14)) ++next_bp;
    if (next_bp < bps.size() && bps[next_bp] < v) v = bps[next_bp];
    if (Tu > 0) {
      const double minw = std::max(1e-13 * u, 1e-300);
      while (v - u > minw) {
        const double Tv = T(v);
        if (Tv > 0 && std::log(Tu / Tv) <= opts.tail_log_step) break;
        v = u + 0.5 * (v - u);
      }
    }
    if (!(v > u)) break;
    out.u.push_back(v);
    u = v;
  }
  if (std::isfinite(e) && out.u.back() < e) out.u.push_back(e);
  // Atoms beyond the continuous range (mixed laws).
  for (double b : bps) {
    if (b > out.u.back()) out.u.push_back(b);
  }
  return out;
}

double tail(const TargetMeasure& mu, double t, TailSide side) {
  return side == TailSide::upper ? mu.upper_tail(t) : mu.lower_tail(t);
}

// ---- target families ------------------------------------------------------

namespace target {

TargetMeasure double_exponential(double lambda, double gamma) {
  require_positive(lambda, "lambda");
  require_positive(gamma, "gamma");
  std::ostringstream os;
  os << "double_exponential(" << lambda << "," << gamma << ")";
  return TargetMeasure(std::make_shared<DoubleExponential>(lambda, gamma), {}, os.str());
}

TargetMeasure f_uniform(double g, double h, double K) {
  require_positive(g, "g");
  require_positive(h, "h");
  const double k_expected = 1.0 / (1.0 / g + 1.0 / h);
  if (K <= 0.0) K = k_expected;
  if (std::abs(K - k_expected) > 1e-12 * k_expected) bad("f_uniform requires K (1/g + 1/h) = 1");
  std::ostringstream os;
  os << "f_uniform(" << g << "," << h << "," << K << ")";
  return TargetMeasure(std::make_shared<FUniform>(g, h, K), {}, os.str());
}

TargetMeasure uniform(double a, double b) {
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) bad("uniform requires finite a < b");
  std::ostringstream os;
  os << "uniform(" << a << "," << b << ")";
  return TargetMeasure(std::make_shared<Uniform>(a, b), {}, os.str());
}

TargetMeasure exponential(double a) {
  require_positive(a, "a");
  std::ostringstream os;
  os << "exponential(" << a << ")";
  return TargetMeasure(std::make_shared<Weibull>(a, 1.0), {}, os.str());
}

TargetMeasure weibull(double a, double b) {
  require_positive(a, "a");
  require_positive(b, "b");
  std::ostringstream os;
  os << "weibull(" << a << "," << b << ")";
  return TargetMeasure(std::make_shared<Weibull>(a, b), {}, os.str());
}

TargetMeasure gaussian(double sigma, double mean) {
  require_positive(sigma, "sigma");
  if (!std::isfinite(mean)) bad("mean must be finite");
  std::ostringstream os;
  os << "gaussian(" << sigma << "," << mean << ")";
  return TargetMeasure(std::make_shared<Gaussian>(sigma, mean), {}, os.str());
}

TargetMeasure geometric(double p, double cutoff) {
  if (!(p > 0.0 && p <= 1.0)) bad("geometric requires p in (0, 1]");
  std::vector<Atom> atoms;
  double remaining = 1.0;
  for (int k = 1; remaining > 0.0; ++k) {
    double m = remaining * p;
    if (remaining - m < cutoff || k >= 100000) m = remaining;
    atoms.push_back({static_cast<double>(k), m});
    remaining -= m;
  }
  std::ostringstream os;
  os << "geometric(" << p << ")";
  return TargetMeasure(nullptr, std::move(atoms), os.str());
}

TargetMeasure from_tail_grid(const std::vector<std::pair<double, double>>& knots) {
  if (knots.size() < 2) bad("tail grid needs at least two knots");
  std::vector<double> x, vl, vr;
  for (std::size_t k = 0; k < knots.size(); ++k) {
    const auto [t, v] = knots[k];
    if (!std::isfinite(t) || !(v >= 0.0 && v <= 1.0)) bad("tail grid knot out of range");
    if (k > 0 && v > knots[k - 1].second) bad("tail grid ordinates must be non-increasing");
    if (!x.empty() && t == x.back()) {
      if (vr.back() != vl.back()) bad("tail grid abscissa repeated more than twice");
      vr.back() = v;
      continue;
    }
    if (!x.empty() && t < x.back()) bad("tail grid abscissae must be non-decreasing");
    x.push_back(t);
    vl.push_back(v);
    vr.push_back(v);
  }
  if (std::abs(vl.front() - 1.0) > 1e-12) bad("tail grid must start at tail 1");
  if (vr.back() > 1e-12) bad("tail grid must end at tail 0");
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (vl[k] > vr[k]) atoms.push_back({x[k], vl[k] - vr[k]});
  }
  std::vector<double> seg(x.size() - 1);
  double cmass = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    seg[k] = vr[k] - vl[k + 1];
    cmass += seg[k];
  }
  std::shared_ptr<const ContinuousLaw> cont;
  if (cmass > 0) cont = std::make_shared<TailGridLaw>(x, seg);
  return TargetMeasure(cont, std::move(atoms), "tail_grid");
}

TargetMeasure from_atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) bad("atom list is empty");
  return TargetMeasure(nullptr, std::move(atoms), "atoms");
}

TargetMeasure from_family(const std::string& family, const std::map<std::string, double>& params) {
  const auto get = [&](const char* key, double def = std::nan("")) {
    const auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (std::isnan(def)) bad("family '" + family + "' needs parameter '" + key + "'");
    return def;
  };
  if (family == "double_exponential") return double_exponential(get("lambda", 1.0), get("gamma", 1.0));
  if (family == "f_uniform") return f_uniform(get("g", 1.0), get("h", 1.0), get("K", 0.0));
  if (family == "uniform") return uniform(get("a", 0.0), get("b", 1.0));
  if (family == "exponential") return exponential(get("a", 1.0));
  if (family == "weibull") return weibull(get("a"), get("b"));
  if (family == "gaussian") return gaussian(get("sigma", 1.0), get("mean", 0.0));
  if (family == "geometric") return geometric(get("p"));
  throw EmbedError(ErrorKind::configuration, "unknown target family '" + family + "'");
}

}  // namespace target

// ---- characteristic measures ----------------------------------------------

CharMeasure::CharMeasure(std::string label, Tail upper, Tail lower, double multiplier,
                         std::map<std::string, double> params)
    : label_(std::move(label)), upper_(std::move(upper)), lower_(std::move(lower)),
      multiplier_(multiplier), params_(std::move(params)) {
  require_positive(multiplier_, "multiplier");
  if (!upper_) bad("characteristic measure needs an upper tail");
}

bool CharMeasure::is_symmetric(double tol) const {
  if (!lower_) return false;
  for (int k = -60; k <= 60; ++k) {
    const double u = std::pow(10.0, k / 6.0);
    const double a = upper(u);
    const double b = lower(-u);
    if (std::abs(a - b) > tol * std::max(a, b) + 1e-300) return false;
  }
  return true;
}

CharMeasure CharMeasure::scaled(double c) const {
  require_positive(c, "scale");
  CharMeasure out = *this;
  out.multiplier_ *= c;
  return out;
}

namespace charm {

CharMeasure power_signed(double c_plus, double c_minus) {
  require_positive(c_plus, "c_plus");
  if (!(c_minus >= 0.0) || !std::isfinite(c_minus)) bad("c_minus must be non-negative");
  CharMeasure::Tail lower;
  if (c_minus > 0) lower = [c_minus](double x) { return c_minus / -x; };
  return CharMeasure("power_signed", [c_plus](double y) { return c_plus / y; }, lower, 1.0,
                     {{"c_plus", c_plus}, {"c_minus", c_minus}});
}

CharMeasure brownian_age() {
  const double c = 1.0 / std::sqrt(2.0 * M_PI);
  return CharMeasure("brownian_age", [c](double v) { return c / std::sqrt(v); },
                     [c](double x) { return c / std::sqrt(-x); });
}

CharMeasure bessel_max(double q) {
  if (!(q > -1.0 && q < 0.0)) bad("bessel_max requires q in (-1, 0)");
  return CharMeasure("bessel_max", [q](double x) { return std::pow(x, 2.0 * q); }, nullptr, 1.0, {{"q", q}});
}

CharMeasure bessel_lifetime(double q) {
  if (!(q > -1.0 && q < 0.0)) bad("bessel_lifetime requires q in (-1, 0)");
  const double c = std::pow(2.0, q) / std::tgamma(std::abs(q) + 1.0);
  return CharMeasure("bessel_lifetime", [q, c](double v) { return c * std::pow(v, q); }, nullptr, 1.0,
                     {{"q", q}});
}

CharMeasure bessel_drift_age(double q, double beta, double C) {
  if (!(q > -1.0 && q <= 0.0)) bad("bessel_drift_age requires q in (-1, 0]");
  require_positive(beta, "beta");
  require_positive(C, "C");
  // int_v^inf e^{-beta s} s^{q-1} ds = beta^{-q} Gamma(q, beta v)
  const auto upper = [q, beta, C](double v) {
    const double x = beta * v;
    double G;
    if (q == 0.0) {
      G = boost::math::expint(1, x);
    } else {
      G = (boost::math::tgamma(q + 1.0, x) - std::pow(x, q) * std::exp(-x)) / q;
    }
    return C * std::pow(beta, -q) * G;
  };
  return CharMeasure("bessel_drift_age", upper, nullptr, 1.0, {{"q", q}, {"beta", beta}, {"C", C}});
}

CharMeasure cir_age(double delta, double gamma, double C) {
  if (!(delta > 0.0 && delta < 2.0)) bad("cir_age requires delta in (0, 2)");
  require_positive(gamma, "gamma");
  if (!(C > 0.0)) C = 2.0 * gamma / (std::tgamma(delta / 2.0) * std::tgamma(1.0 - delta / 2.0));
  const double e = 1.0 - delta / 2.0;
  const auto upper = [=](double v) {
    return C * std::exp(-2.0 * gamma * e * v) / std::pow(-std::expm1(-2.0 * gamma * v), e);
  };
  return CharMeasure("cir_age", upper, nullptr, 1.0, {{"delta", delta}, {"gamma", gamma}, {"C", C}});
}

CharMeasure from_scale_function(std::function<double(double)> W, std::function<double(double)> W_prime,
                                std::string label) {
  if (!W || !W_prime) bad("scale function and its derivative are required");
  double prev = 0.0;
  for (int k = -36; k <= 36; ++k) {
    const double x = std::pow(10.0, k / 6.0);
    const double w = W(x);
    const double wp = W_prime(x);
    if (!(w > 0.0) || !(w >= prev) || !(wp >= 0.0)) bad("scale function must be positive and increasing");
    prev = w;
  }
  return CharMeasure(std::move(label), [W, W_prime](double y) { return W_prime(y) / W(y); }, nullptr);
}

CharMeasure scale_function_brownian(double drift, double sigma) {
  if (!(drift >= 0.0) || !std::isfinite(drift)) bad("drift must be non-negative");
  require_positive(sigma, "sigma");
  CharMeasure out = [&] {
    if (drift == 0.0) {
      return from_scale_function([](double x) { return x; }, [](double) { return 1.0; },
                                 "from_scale_function");
    }
    const double k = 2.0 * drift / (sigma * sigma);
    return from_scale_function([=](double x) { return -std::expm1(-k * x) / drift; },
                               [=](double x) { return 2.0 / (sigma * sigma) * std::exp(-k * x); },
                               "from_scale_function");
  }();
  return CharMeasure(out.label(), [out](double y) { return out.upper(y); }, nullptr, 1.0,
                     {{"drift", drift}, {"sigma", sigma}});
}

CharMeasure make(const std::string& catalog, const std::map<std::string, double>& params) {
  const auto get = [&](const char* key, double def = std::nan("")) {
    const auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (std::isnan(def)) bad("catalog entry '" + catalog + "' needs parameter '" + key + "'");
    return def;
  };
  const double mult = get("multiplier", 1.0);
  const auto with = [mult](CharMeasure n) { return mult == 1.0 ? n : n.scaled(mult); };
  if (catalog == "power_signed") return with(power_signed(get("c_plus", 1.0), get("c_minus", 1.0)));
  if (catalog == "dx_over_x2") return with(power_signed(1.0, 1.0));
  if (catalog == "brownian_extrema") return with(power_signed(0.5, 0.5));
  if (catalog == "skew_brownian") {
    const double p = get("p");
    if (!(p > 0.0 && p < 1.0)) bad("skew_brownian requires p in (0, 1)");
    return with(power_signed(p, 1.0 - p));
  }
  if (catalog == "brownian_age") return with(brownian_age());
  if (catalog == "bessel_max") return with(bessel_max(get("q")));
  if (catalog == "bessel_lifetime") return with(bessel_lifetime(get("q")));
  if (catalog == "bessel_drift_age") return with(bessel_drift_age(get("q"), get("beta"), get("C", 1.0)));
  if (catalog == "cir_age") return with(cir_age(get("delta"), get("gamma"), get("C", 0.0)));
  if (catalog == "from_scale_function") return with(scale_function_brownian(get("drift", 0.0), get("sigma", 1.0)));
  throw EmbedError(ErrorKind::configuration, "unknown characteristic measure '" + catalog + "'");
}

}  // namespace charm

const std::vector<CatalogEntry>& char_catalog() {
  const double req = std::nan("");
  static const std::vector<CatalogEntry> entries = {
      {"power_signed", "N+(y) = c_plus/y, N-(x) = c_minus/|x|", {{"c_plus", 1.0}, {"c_minus", 1.0}},
       "c_plus = c_minus = 1: dx/x^2 (max/min, Azema); 1/2: Brownian extrema under Tanaka local time"},
      {"dx_over_x2", "N+(y) = 1/y, N-(x) = 1/|x|", {}, "power_signed(1, 1)"},
      {"brownian_extrema", "N+(y) = 1/(2y), N-(x) = 1/(2|x|)", {}, "terminal values of B under Tanaka local time"},
      {"skew_brownian", "N+(y) = p/y, N-(x) = (1-p)/|x|", {{"p", req}}, "skew Brownian motion"},
      {"brownian_age", "N+(v) = N-(-v) = 1/sqrt(2 pi v)", {}, "signed excursion age of B"},
      {"bessel_max", "N+(x) = x^(2q)", {{"q", req}}, "Bessel process maximum, q in (-1, 0)"},
      {"bessel_lifetime", "N+(v) = 2^q v^q / Gamma(|q|+1)", {{"q", req}}, "Bessel excursion lifetime"},
      {"bessel_drift_age", "N+(v) = C int_v^inf e^(-beta s) s^(q-1) ds", {{"q", req}, {"beta", req}, {"C", 1.0}},
       "Bessel process with drift, q in (-1, 0]"},
      {"cir_age", "N+(v) = C e^(-2 gamma (1-delta/2) v) / (1 - e^(-2 gamma v))^(1-delta/2)",
       {{"delta", req}, {"gamma", req}, {"C", 0.0}}, "CIR excursion age; C = 0 selects the canonical constant"},
      {"from_scale_function", "N+(y) = W'(y)/W(y)", {{"drift", 0.0}, {"sigma", 1.0}},
       "reflected spectrally negative Levy maximum; shipped W for sigma B + drift t"},
  };
  return entries;
}

}  // namespace embed

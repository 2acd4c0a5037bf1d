#pragma once

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace embed {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Side { pos, neg };
enum class TailSide { upper, lower };
enum class MeasureKind { absolutely_continuous, purely_atomic, mixed_positive };

const char* to_string(MeasureKind kind);

struct Atom {
  double location;
  double mass;
};

/// Absolutely continuous part of a target law. Masses are absolute, i.e. the
/// part may carry total mass below one when atoms are present.
class ContinuousLaw {
 public:
  virtual ~ContinuousLaw() = default;
  virtual double density(double x) const = 0;
  /// Mass of [t, inf).
  virtual double upper(double t) const = 0;
  /// Mass of (-inf, t].
  virtual double lower(double t) const = 0;
  virtual double mass() const { return 1.0; }
  virtual double lo() const = 0;
  virtual double hi() const = 0;
  /// Points where the density is not smooth.
  virtual std::vector<double> breakpoints() const { return {}; }
};

/// Quadrature grid along one side of zero, in absolute coordinates u >= 0.
struct SideGrid {
  std::vector<double> u;
  double support_start = 0.0;  // first u carrying mass on this side
  double support_end = kInf;   // last u carrying mass (abs of a_mu or b_mu)
  double scale = 1.0;          // median offset of the side's mass
};

struct GridOptions {
  int per_decade = 256;         // relative knot spacing 10^(1/per_decade)
  double tail_log_step = 1.0 / 64.0;  // max log-ratio of the side tail per segment
  double depth = 1e-12;         // first offset from the support start, relative to scale
  double far = 1e30;            // give up beyond scale * far
  double tail_floor = 1e-60;    // stop once the side tail drops below this (relative)
  double end_gap = 1e-15;       // closest approach to a finite support end (relative)
};

/// Target law mu: continuous part, atoms, and possibly mass parked at +inf
/// (produced by the atom-at-zero device).
class TargetMeasure {
 public:
  TargetMeasure() = default;
  TargetMeasure(std::shared_ptr<const ContinuousLaw> continuous, std::vector<Atom> atoms,
                std::string label, double mass_at_infinity = 0.0);

  MeasureKind kind() const;
  const std::string& label() const { return label_; }

  /// mu([t, inf)), left-continuous.
  double upper_tail(double t) const;
  /// mu((-inf, t]), right-continuous.
  double lower_tail(double t) const;
  /// mu((-inf, t)).
  double strict_lower(double t) const;
  /// mu((t, inf)).
  double open_upper(double t) const;
  double atom_mass(double t) const;

  double density(double x) const;
  bool has_continuous_part() const { return continuous_ != nullptr; }
  const ContinuousLaw* continuous() const { return continuous_.get(); }
  const std::shared_ptr<const ContinuousLaw>& continuous_shared() const { return continuous_; }
  double continuous_mass() const;
  /// Continuous-part mass beyond u on one side (u >= 0, absolute coordinate).
  double continuous_side_tail(Side side, double u) const;
  /// Full mass beyond u on one side: mu([u, inf)) or mu((-inf, -u]).
  double side_tail(Side side, double u) const;
  /// mu((0, inf)) including mass at +inf, resp. mu((-inf, 0)).
  double side_mass(Side side) const;

  const std::vector<Atom>& atoms() const { return atoms_; }
  double mass_at_infinity() const { return mass_at_infinity_; }

  /// Support bounds a_mu <= b_mu (extended reals).
  double a_mu() const;
  double b_mu() const;

  std::vector<double> breakpoints() const;
  bool is_symmetric(double tol = 1e-12) const;

  SideGrid side_grid(Side side, const GridOptions& opts = {}) const;

 private:
  std::shared_ptr<const ContinuousLaw> continuous_;
  std::vector<Atom> atoms_;        // sorted by location
  std::vector<double> suffix_;     // suffix_[k] = sum of masses of atoms k..end
  double mass_at_infinity_ = 0.0;
  std::string label_;
};

/// tail(mu, t, upper) = mu([t, inf)), tail(mu, t, lower) = mu((-inf, t]).
double tail(const TargetMeasure& mu, double t, TailSide side);

namespace target {
TargetMeasure double_exponential(double lambda, double gamma);
/// K defaults to 1 / (1/g + 1/h); a supplied K must satisfy K (1/g + 1/h) = 1.
TargetMeasure f_uniform(double g, double h, double K = 0.0);
TargetMeasure uniform(double a, double b);
TargetMeasure exponential(double a);
TargetMeasure weibull(double a, double b);
TargetMeasure gaussian(double sigma, double mean = 0.0);
/// mu({k}) = (1-p)^(k-1) p on k = 1, 2, ...; truncated once the remaining
/// mass drops below `cutoff`, the remainder being added to the last atom.
TargetMeasure geometric(double p, double cutoff = 1e-18);
/// Left-continuous tail knots (t, mu([t, inf))); a repeated abscissa marks an
/// atom (first ordinate = tail at t, second = tail just after t). Linear
/// interpolation in between.
TargetMeasure from_tail_grid(const std::vector<std::pair<double, double>>& knots);
TargetMeasure from_atoms(std::vector<Atom> atoms);
/// Named family with parameters, as used by configuration documents.
TargetMeasure from_family(const std::string& family, const std::map<std::string, double>& params);
}  // namespace target

/// Excursion characteristic measure n_F through its tails
/// N+(y) = n_F([y, inf)) for y > 0 and N-(x) = n_F((-inf, x]) for x < 0.
class CharMeasure {
 public:
  using Tail = std::function<double(double)>;

  CharMeasure() = default;
  CharMeasure(std::string label, Tail upper, Tail lower, double multiplier = 1.0,
              std::map<std::string, double> params = {});

  double upper(double y) const { return multiplier_ * upper_(y); }
  double lower(double x) const { return lower_ ? multiplier_ * lower_(x) : 0.0; }
  /// N+(u) or N-(-u) for u > 0.
  double side(Side s, double u) const { return s == Side::pos ? upper(u) : lower(-u); }

  bool one_sided() const { return !lower_; }
  bool is_symmetric(double tol = 1e-12) const;
  const std::string& label() const { return label_; }
  double multiplier() const { return multiplier_; }
  const std::map<std::string, double>& params() const { return params_; }

  /// c * n_F.
  CharMeasure scaled(double c) const;

 private:
  std::string label_;
  Tail upper_;
  Tail lower_;
  double multiplier_ = 1.0;
  std::map<std::string, double> params_;
};

struct CatalogEntry {
  std::string name;
  std::string formula;
  std::vector<std::pair<std::string, double>> params;  // name, default (NaN = required)
  std::string notes;
};

const std::vector<CatalogEntry>& char_catalog();

namespace charm {
/// N+(y) = c_plus / y, N-(x) = c_minus / |x|.
CharMeasure power_signed(double c_plus, double c_minus);
/// Signed age of Brownian excursions under Tanaka local time: 1/sqrt(2 pi v) per sign.
CharMeasure brownian_age();
/// N+(x) = x^(2q), q in (-1, 0); one-sided.
CharMeasure bessel_max(double q);
/// N+(v) = 2^q v^q / Gamma(|q| + 1); one-sided.
CharMeasure bessel_lifetime(double q);
/// N+(v) = C int_v^inf exp(-beta s) s^(q-1) ds, q in (-1, 0]; one-sided.
CharMeasure bessel_drift_age(double q, double beta, double C);
/// N+(v) = C exp(-2 gamma (1 - delta/2) v) / (1 - exp(-2 gamma v))^(1 - delta/2).
/// C <= 0 selects 2 gamma / (Gamma(delta/2) Gamma(1 - delta/2)).
CharMeasure cir_age(double delta, double gamma, double C);
/// N+(y) = W'+(y) / W(y); one-sided. W must be positive and increasing.
CharMeasure from_scale_function(std::function<double(double)> W,
                                std::function<double(double)> W_prime,
                                std::string label = "from_scale_function");
/// Scale function of sigma B_t + drift t (drift >= 0); drift = 0 gives W(x) = x.
CharMeasure scale_function_brownian(double drift = 0.0, double sigma = 1.0);

/// Catalog lookup by name; unknown names and bad parameters throw.
CharMeasure make(const std::string& catalog, const std::map<std::string, double>& params);
}  // namespace charm

enum class Verdict { admissible, unbalanced, unsupported };
const char* to_string(Verdict v);

struct AdmissibilityReport {
  bool supp_ok = false;
  bool positive_case = false;
  double balance_gap = 0.0;  // d_inf - g_inf (inf-inf counts as 0)
  double d_inf = 0.0;
  double g_inf = 0.0;
  Verdict verdict = Verdict::unsupported;
  std::string detail;
};

inline constexpr double kBalanceTolerance = 1e-6;

/// Support and balance check for a (mu, n_F) pair.
AdmissibilityReport validate_pair(const TargetMeasure& mu, const CharMeasure& n,
                                  const GridOptions& grid = {});

}  // namespace embed

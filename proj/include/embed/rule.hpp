#pragma once

#include <functional>
#include <string>
#include <vector>

#include "embed/measures.hpp"
#include "embed/monotone.hpp"

namespace embed {

/// Law of the local time at the stopping time: cumulative hazard H tabulated on
/// l-knots, extended linearly beyond the table with the hazard frozen there.
class LocalTimeLaw {
 public:
  LocalTimeLaw() = default;
  /// `knots` must contain every l at which the hazard may be non-smooth.
  LocalTimeLaw(std::function<double(double)> hazard, std::vector<double> knots, double cap = kInf);

  double hazard(double l) const { return hazard_(l); }
  double cumulative(double l) const;
  /// P(L_T > l).
  double survival(double l) const;
  /// inf{l : H(l) >= e}, or +inf when the hazard never accumulates e.
  double from_exponential(double e) const;

  double cap() const { return cap_; }
  double table_end() const { return H_.hi(); }
  double frozen_hazard() const { return frozen_; }
  const MonotoneFn& cumulative_table() const { return H_; }
  const std::vector<double>& knots() const { return H_.knots(); }

 private:
  std::function<double(double)> hazard_;
  MonotoneFn H_;
  double frozen_ = 0.0;
  double cap_ = kInf;
};

enum class StopSide { pos, neg, zero };
const char* to_string(StopSide s);

/// T = inf{t : F_t not in (-phi_minus(L_t), phi_plus(L_t))}, plus an optional
/// local-time cap (stop at F = 0 once L reaches it).
class StoppingRule {
 public:
  StoppingRule() = default;
  StoppingRule(std::function<double(double)> phi_plus, std::function<double(double)> phi_minus,
               CharMeasure n, std::vector<double> knots, double cap = kInf, std::string source = {});

  double phi_plus(double l) const { return phi_plus_(l); }
  double phi_minus(double l) const { return phi_minus_(l); }
  double hazard_plus(double l) const;
  double hazard_minus(double l) const;
  /// Probability that a stop at local time l happens on the positive side.
  double prob_plus(double l) const;

  const CharMeasure& n() const { return n_; }
  const LocalTimeLaw& law() const { return law_; }
  double cap() const { return cap_; }
  const std::string& source() const { return source_; }

 private:
  std::function<double(double)> phi_plus_;
  std::function<double(double)> phi_minus_;
  CharMeasure n_;
  LocalTimeLaw law_;
  double cap_ = kInf;
  std::string source_;
};

/// Law of F_T implied by a stopping rule, by mixing over L_T.
class StoppedLaw {
 public:
  explicit StoppedLaw(const StoppingRule& rule);

  /// P(F_T >= y) for y > 0.
  double upper(double y) const;
  /// P(F_T <= x) for x < 0.
  double lower(double x) const;
  /// P(F_T = 0), i.e. the cap was reached.
  double zero_mass() const { return zero_mass_; }
  /// mu-style left-continuous tail P(F_T >= t) on the whole line.
  double tail(double t) const;

 private:
  struct SideTable {
    std::vector<double> l;      // knots
    std::vector<double> from;   // from[k] = int_{l_k}^{end} rate
    double beyond = 0.0;        // mass beyond the table end
  };
  double side_integral(const SideTable& t, Side side, double l0) const;
  double threshold(Side side, double y) const;
  double rate(Side side, double l) const;

  StoppingRule rule_;
  SideTable pos_, neg_;
  double zero_mass_ = 0.0;
};

}  // namespace embed

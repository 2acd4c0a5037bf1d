#include "embed/rule.hpp"

#include <algorithm>
#include <cmath>

#include "embed/error.hpp"
#include "embed/quadrature.hpp"

namespace embed {

const char* to_string(StopSide s) {
  switch (s) {
    case StopSide::pos: return "pos";
    case StopSide::neg: return "neg";
    case StopSide::zero: return "zero";
  }
  return "unknown";
}

namespace {

constexpr quad::Tolerance kHazardTol{1e-12, 0.0, 40};

std::vector<double> clean_knots(std::vector<double> knots, double cap) {
  knots.push_back(0.0);
  if (std::isfinite(cap)) knots.push_back(cap);
  std::vector<double> kept;
  for (double k : knots) {
    if (std::isfinite(k) && k >= 0.0 && k <= cap) kept.push_back(k);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<double> out;
  for (double k : kept) {
    if (out.empty() || k - out.back() > 1e-14 * k) out.push_back(k);
  }
  return out;
}

}  // namespace

LocalTimeLaw::LocalTimeLaw(std::function<double(double)> hazard, std::vector<double> knots, double cap)
    : hazard_(std::move(hazard)), cap_(cap) {
  std::vector<double> l = clean_knots(std::move(knots), cap);
  const std::size_t n = l.size();
  std::vector<double> H(n, 0.0), s0(n > 1 ? n - 1 : 0), s1(s0.size());
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double a = l[k];
    const double b = l[k + 1];
    H[k + 1] = H[k] + quad::integrate(hazard_, a, b, kHazardTol).value;
    const double d = 1e-10 * (b - a);
    s0[k] = hazard_(a + d);
    s1[k] = hazard_(b - d);
  }
  if (!std::isfinite(H.back())) {
    throw EmbedError(ErrorKind::configuration, "cumulative hazard is not finite on the tabulated range");
  }
  const double end = l.back();
  frozen_ = hazard_(end > 0 ? end * (1.0 + 1e-12) : 1e-300);
  if (!std::isfinite(frozen_)) frozen_ = 0.0;
  H_ = MonotoneFn::hermite(std::move(l), std::move(H), std::move(s0), std::move(s1), kInf);
}

double LocalTimeLaw::cumulative(double l) const {
  if (!(l > 0.0)) return 0.0;
  const double end = H_.hi();
  if (l <= end) return H_(l);
  return H_.last_value() + frozen_ * (l - end);
}

double LocalTimeLaw::survival(double l) const {
  if (!(l > 0.0)) return 1.0;
  if (l >= cap_) return 0.0;
  return std::exp(-cumulative(l));
}

double LocalTimeLaw::from_exponential(double e) const {
  if (!(e > 0.0)) return 0.0;
  const double h_end = H_.last_value();
  if (e <= h_end) return H_.left_inverse(e);
  if (!(frozen_ > 0.0)) return kInf;
  return H_.hi() + (e - h_end) / frozen_;
}

// ---- StoppingRule ---------------------------------------------------------

namespace {

double side_hazard(const CharMeasure& n, Side side, double level) {
  if (std::isnan(level)) return 0.0;
  if (!(level > 0.0)) return kInf;
  if (std::isinf(level)) return 0.0;
  const double v = n.side(side, level);
  return std::isfinite(v) || v > 0 ? v : 0.0;
}

}  // namespace

StoppingRule::StoppingRule(std::function<double(double)> phi_plus, std::function<double(double)> phi_minus,
                           CharMeasure n, std::vector<double> knots, double cap, std::string source)
    : phi_plus_(std::move(phi_plus)), phi_minus_(std::move(phi_minus)), n_(std::move(n)), cap_(cap),
      source_(std::move(source)) {
  auto pp = phi_plus_;
  auto pm = phi_minus_;
  auto nn = n_;
  law_ = LocalTimeLaw(
      [pp, pm, nn](double l) {
        return side_hazard(nn, Side::pos, pp(l)) + side_hazard(nn, Side::neg, pm(l));
      },
      std::move(knots), cap);
}

double StoppingRule::hazard_plus(double l) const { return side_hazard(n_, Side::pos, phi_plus_(l)); }
double StoppingRule::hazard_minus(double l) const { return side_hazard(n_, Side::neg, phi_minus_(l)); }

double StoppingRule::prob_plus(double l) const {
  const double hp = hazard_plus(l);
  const double hm = hazard_minus(l);
  if (std::isinf(hp) && std::isinf(hm)) return 0.5;
  if (std::isinf(hp)) return 1.0;
  if (std::isinf(hm)) return 0.0;
  const double s = hp + hm;
  return s > 0.0 ? hp / s : 0.5;
}

// ---- StoppedLaw -----------------------------------------------------------

StoppedLaw::StoppedLaw(const StoppingRule& rule) : rule_(rule) {
  const LocalTimeLaw& law = rule_.law();
  const std::vector<double>& l = law.knots();
  const double end = l.back();
  const double cap = rule_.cap();
  const double hz = law.frozen_hazard();
  const double s_end = law.survival(end);
  for (Side side : {Side::pos, Side::neg}) {
    SideTable& t = side == Side::pos ? pos_ : neg_;
    t.l = l;
    t.from.assign(l.size(), 0.0);
    const auto f = [this, side](double s) { return rate(side, s); };
    for (std::size_t k = l.size() - 1; k-- > 0;) {
      t.from[k] = t.from[k + 1] + quad::integrate(f, l[k], l[k + 1], kHazardTol).value;
    }
    const double h_side = side == Side::pos ? rule_.hazard_plus(end > 0 ? end * (1 + 1e-12) : 1e-300)
                                            : rule_.hazard_minus(end > 0 ? end * (1 + 1e-12) : 1e-300);
    if (end >= cap || !(hz > 0.0) || !std::isfinite(h_side)) {
      t.beyond = 0.0;
    } else {
      const double span = cap - end;
      const double frac = std::isfinite(span) ? -std::expm1(-hz * span) : 1.0;
      t.beyond = h_side / hz * s_end * frac;
    }
  }
  zero_mass_ = std::isfinite(cap) ? std::exp(-law.cumulative(cap)) : 0.0;
}

double StoppedLaw::rate(Side side, double l) const {
  const double h = side == Side::pos ? rule_.hazard_plus(l) : rule_.hazard_minus(l);
  if (h == 0.0) return 0.0;
  return h * rule_.law().survival(l);
}

double StoppedLaw::side_integral(const SideTable& t, Side side, double l0) const {
  const double end = t.l.back();
  if (!(l0 >= 0.0)) l0 = 0.0;
  if (std::isinf(l0)) return 0.0;
  if (l0 >= end) {
    if (t.beyond == 0.0) return 0.0;
    // Frozen boundary: exponential decay of the remaining mass.
    const double hz = rule_.law().frozen_hazard();
    const double cap = rule_.cap();
    const double h_side = side == Side::pos ? rule_.hazard_plus(l0) : rule_.hazard_minus(l0);
    const double s0 = rule_.law().survival(l0);
    const double frac = std::isfinite(cap) ? -std::expm1(-hz * std::max(0.0, cap - l0)) : 1.0;
    return h_side / hz * s0 * frac;
  }
  const auto it = std::upper_bound(t.l.begin(), t.l.end(), l0);
  const std::size_t k = static_cast<std::size_t>(it - t.l.begin());  // l0 in [l_{k-1}, l_k)
  const auto f = [this, side](double s) { return rate(side, s); };
  const double partial = l0 == t.l[k - 1] ? t.from[k - 1] - t.from[k]
                                           : quad::integrate(f, l0, t.l[k], kHazardTol).value;
  return partial + t.from[k] + t.beyond;
}

double StoppedLaw::threshold(Side side, double y) const {
  const auto phi = [this, side](double l) { return side == Side::pos ? rule_.phi_plus(l) : rule_.phi_minus(l); };
  const std::vector<double>& l = pos_.l;
  const auto it = std::partition_point(l.begin(), l.end(), [&](double s) { return phi(s) < y; });
  double hi;
  double lo;
  if (it == l.end()) {
    const double end = l.back();
    if (!(phi(end > 0 ? end * (1 + 1e-12) : 1e-300) >= y)) return kInf;
    lo = end;
    hi = end * (1 + 1e-12) + 1e-300;
  } else {
    if (it == l.begin()) return 0.0;
    hi = *it;
    lo = *(it - 1);
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (phi(mid) >= y ? hi : lo) = mid;
  }
  return hi;
}

double StoppedLaw::upper(double y) const {
  if (!(y > 0.0)) return side_integral(pos_, Side::pos, 0.0);
  return side_integral(pos_, Side::pos, threshold(Side::pos, y));
}

double StoppedLaw::lower(double x) const {
  if (!(x < 0.0)) return side_integral(neg_, Side::neg, 0.0);
  return side_integral(neg_, Side::neg, threshold(Side::neg, -x));
}

double StoppedLaw::tail(double t) const {
  if (t > 0.0) return upper(t);
  if (t == 0.0) return 1.0 - lower(-0.0);
  return 1.0 - lower(t);
}

}  // namespace embed

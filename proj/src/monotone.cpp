#include "embed/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace embed {

MonotoneFn::MonotoneFn(std::vector<double> x, std::vector<double> at, std::vector<double> right,
                       std::vector<double> slope_lo, std::vector<double> slope_hi,
                       double beyond)
    : x_(std::move(x)), at_(std::move(at)), right_(std::move(right)),
      m0_(std::move(slope_lo)), m1_(std::move(slope_hi)), beyond_(beyond) {
  const std::size_t n = x_.size();
  if (n == 0 || at_.size() != n || right_.size() != n) {
    throw std::invalid_argument("MonotoneFn: knot/value size mismatch");
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (!(x_[k] > x_[k - 1])) throw std::invalid_argument("MonotoneFn: knots not increasing");
  }
  const std::size_t segments = n - 1;
  if (m0_.empty()) m0_.assign(segments, std::nan(""));
  if (m1_.empty()) m1_.assign(segments, std::nan(""));
  if (m0_.size() != segments || m1_.size() != segments) {
    throw std::invalid_argument("MonotoneFn: slope size mismatch");
  }
  // Monotone repair of ordinates: rounding in cumulative sums must not break order.
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) at_[k] = std::max(at_[k], right_[k - 1]);
    right_[k] = std::max(right_[k], at_[k]);
  }
  if (beyond_ < right_.back()) beyond_ = right_.back();
  clamp_slopes();
}

MonotoneFn MonotoneFn::linear(std::vector<double> x, std::vector<double> v, double beyond) {
  std::vector<double> r = v;
  return MonotoneFn(std::move(x), std::move(v), std::move(r), {}, {}, beyond);
}

MonotoneFn MonotoneFn::hermite(std::vector<double> x, std::vector<double> v,
                               std::vector<double> slope_lo, std::vector<double> slope_hi,
                               double beyond) {
  std::vector<double> r = v;
  return MonotoneFn(std::move(x), std::move(v), std::move(r), std::move(slope_lo),
                    std::move(slope_hi), beyond);
}

void MonotoneFn::clamp_slopes() {
  for (std::size_t k = 0; k + 1 < x_.size(); ++k) {
    const double h = x_[k + 1] - x_[k];
    const double delta = at_[k + 1] - right_[k];
    double a = m0_[k];
    double b = m1_[k];
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(delta)) {
      m0_[k] = m1_[k] = std::nan("");
      continue;
    }
    if (delta <= 0.0) {
      m0_[k] = m1_[k] = 0.0;
      continue;
    }
    // Work with slopes relative to the secant.
    const double secant = delta / h;
    double ra = std::max(a, 0.0) / secant;
    double rb = std::max(b, 0.0) / secant;
    const double r2 = ra * ra + rb * rb;
    if (r2 > 9.0) {
      const double s = 3.0 / std::sqrt(r2);
      ra *= s;
      rb *= s;
    }
    // Stored as ordinate increments over the segment.
    m0_[k] = ra * delta;
    m1_[k] = rb * delta;
  }
}

double MonotoneFn::segment_value(std::size_t k, double x) const {
  const double x0 = x_[k];
  const double h = x_[k + 1] - x0;
  const double t = (x - x0) / h;
  const double p0 = right_[k];
  const double p1 = at_[k + 1];
  if (std::isnan(m0_[k])) return p0 + t * (p1 - p0);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * p0 + h10 * m0_[k] + h01 * p1 + h11 * m1_[k];
}

double MonotoneFn::segment_derivative(std::size_t k, double x) const {
  const double x0 = x_[k];
  const double h = x_[k + 1] - x0;
  const double t = (x - x0) / h;
  const double p0 = right_[k];
  const double p1 = at_[k + 1];
  if (std::isnan(m0_[k])) return (p1 - p0) / h;
  const double t2 = t * t;
  const double d00 = 6 * t2 - 6 * t;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t;
  const double d11 = 3 * t2 - 2 * t;
  return (d00 * p0 + d10 * m0_[k] + d01 * p1 + d11 * m1_[k]) / h;
}

double MonotoneFn::operator()(double x) const {
  if (std::isnan(x)) return x;
  if (x <= x_.front()) return at_.front();
  if (x > x_.back()) return beyond_;
  const auto it = std::lower_bound(x_.begin(), x_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - x_.begin());
  if (*it == x) return at_[k];
  return segment_value(k - 1, x);
}

double MonotoneFn::right_limit(double x) const {
  if (x < x_.front()) return at_.front();
  if (x >= x_.back()) return beyond_;
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - x_.begin());
  if (x_[k - 1] == x) return right_[k - 1];
  return segment_value(k - 1, x);
}

double MonotoneFn::derivative(double x) const {
  if (x <= x_.front() || x >= x_.back()) return 0.0;
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - x_.begin()) - 1;
  return segment_derivative(k, x);
}

// Smallest x in segment k with segment value >= y, given right_[k] < y <= at_[k+1].
double MonotoneFn::solve_segment(std::size_t k, double y) const {
  double a = x_[k];
  double b = x_[k + 1];
  const double p0 = right_[k];
  const double p1 = at_[k + 1];
  if (std::isnan(m0_[k])) {
    const double t = (y - p0) / (p1 - p0);
    return std::clamp(a + t * (b - a), a, b);
  }
  // Safeguarded Newton on a bracket that always satisfies f(a) < y <= f(b).
  double x = a + (y - p0) / (p1 - p0) * (b - a);
  for (int it = 0; it < 100; ++it) {
    if (!(x > a && x < b)) x = 0.5 * (a + b);
    const double fx = segment_value(k, x);
    if (fx >= y) {
      b = x;
    } else {
      a = x;
    }
    if (b - a <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b))) {
      break;
    }
    const double d = segment_derivative(k, x);
    const double step = d > 0.0 ? (y - fx) / d : 0.0;
    double next = x + step;
    if (!(d > 0.0) || !(next > a && next < b)) next = 0.5 * (a + b);
    if (next == x) break;
    x = next;
  }
  return b;
}

double MonotoneFn::left_inverse(double y) const {
  if (std::isnan(y)) return y;
  if (y <= at_.front()) return x_.front();
  // First knot whose right limit reaches y.
  const auto it = std::lower_bound(right_.begin(), right_.end(), y);
  if (it == right_.end()) return beyond_ >= y ? x_.back() : inf;
  const std::size_t j = static_cast<std::size_t>(it - right_.begin());
  if (at_[j] < y) return x_[j];  // y lies inside the jump at x_j
  // at_[j] >= y > right_[j-1]: inside segment j-1 (j >= 1 here because at_[0] < y).
  return solve_segment(j - 1, y);
}

double MonotoneFn::right_inverse(double y) const {
  if (std::isnan(y)) return y;
  if (y < at_.front()) return x_.front();
  const auto it = std::upper_bound(right_.begin(), right_.end(), y);
  if (it == right_.end()) return beyond_ > y ? x_.back() : inf;
  const std::size_t j = static_cast<std::size_t>(it - right_.begin());
  if (!(at_[j] > y)) return x_[j];
  if (j == 0) return x_.front();
  if (right_[j - 1] == y && segment_derivative(j - 1, x_[j - 1]) > 0.0) return x_[j - 1];
  // Smallest x with value > y. For a strictly increasing segment this is the
  // root of f = y; nudge the target up by one ulp so flat ends resolve right.
  return solve_segment(j - 1, std::nextafter(y, inf));
}

MonotoneFn MonotoneFn::scaled(double c) const {
  MonotoneFn out = *this;
  for (auto& v : out.at_) v *= c;
  for (auto& v : out.right_) v *= c;
  for (auto& v : out.m0_) v *= c;
  for (auto& v : out.m1_) v *= c;
  out.beyond_ *= c;
  return out;
}

}  // namespace embed

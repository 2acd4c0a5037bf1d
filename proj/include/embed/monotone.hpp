#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace embed {

/// Non-decreasing function tabulated on a strictly increasing grid.
///
/// Each knot carries two ordinates: the value at the knot and the right
/// limit, so jumps sit exactly on knots and the function is left-continuous
/// there. Between knots the function is a monotone cubic Hermite segment
/// when end slopes are supplied, and linear otherwise. Slopes are clamped
/// (Fritsch-Carlson) so every segment stays monotone.
///
/// Below the first knot the function equals its first value; beyond the last
/// knot it equals `beyond` (which may be +inf, the "open-ended" convention).
class MonotoneFn {
 public:
  static constexpr double inf = std::numeric_limits<double>::infinity();

  MonotoneFn() = default;

  /// General form. `slope_lo[k]` / `slope_hi[k]` are the one-sided end slopes
  /// of segment k = [x_k, x_{k+1}]; pass empty vectors (or NaN entries) for
  /// linear segments.
  MonotoneFn(std::vector<double> x, std::vector<double> at, std::vector<double> right,
             std::vector<double> slope_lo, std::vector<double> slope_hi,
             double beyond);

  /// Continuous, piecewise linear through (x_k, v_k).
  static MonotoneFn linear(std::vector<double> x, std::vector<double> v, double beyond);

  /// Continuous cubic Hermite through (x_k, v_k) with per-segment end slopes.
  static MonotoneFn hermite(std::vector<double> x, std::vector<double> v,
                            std::vector<double> slope_lo, std::vector<double> slope_hi,
                            double beyond);

  bool empty() const { return x_.empty(); }
  std::size_t size() const { return x_.size(); }
  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }
  double beyond() const { return beyond_; }
  /// Largest finite ordinate carried by the table.
  double last_value() const { return right_.back(); }

  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return at_; }
  const std::vector<double>& right_values() const { return right_; }

  /// f(x); left-continuous at knots.
  double operator()(double x) const;
  /// f(x+).
  double right_limit(double x) const;
  /// Derivative inside a segment (0 outside the table).
  double derivative(double x) const;

  /// inf{x : f(x) >= y}; +inf if never reached.
  double left_inverse(double y) const;
  /// inf{x : f(x) > y}; +inf if never exceeded.
  double right_inverse(double y) const;

  /// c * f with c > 0.
  MonotoneFn scaled(double c) const;

 private:
  double segment_value(std::size_t k, double x) const;
  double segment_derivative(std::size_t k, double x) const;
  double solve_segment(std::size_t k, double y) const;
  void clamp_slopes();

  std::vector<double> x_;
  std::vector<double> at_;
  std::vector<double> right_;
  std::vector<double> m0_;  // scaled by segment width after construction
  std::vector<double> m1_;
  double beyond_ = inf;
};

}  // namespace embed

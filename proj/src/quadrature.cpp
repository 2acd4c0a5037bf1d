#include "embed/quadrature.hpp"

#include <array>
#include <cmath>

namespace embed::quad {
namespace {

// Abscissae and weights from QUADPACK qk21.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

Result adapt(const std::function<double(double)>& f, double a, double b,
             const Tolerance& tol, int depth, const Result& whole) {
  const double target = std::max(tol.abs, tol.rel * std::abs(whole.value));
  if (whole.error <= target || depth >= tol.max_depth || !(b - a > 0.0) ||
      !std::isfinite(whole.value)) {
    return whole;
  }
  const double m = 0.5 * (a + b);
  if (m <= a || m >= b) return whole;
  const Result left = gauss_kronrod21(f, a, m);
  const Result right = gauss_kronrod21(f, m, b);
  const Result refined{left.value + right.value, left.error + right.error};
  if (refined.error >= whole.error && depth > 8 && refined.error <= 1e-3 * std::abs(refined.value)) {
    return refined;
  }
  Tolerance sub = tol;
  sub.abs = 0.5 * std::max(tol.abs, tol.rel * std::abs(refined.value));
  sub.rel = 0.0;
  const Result l = adapt(f, a, m, sub, depth + 1, left);
  const Result r = adapt(f, m, b, sub, depth + 1, right);
  return {l.value + r.value, l.error + r.error};
}

}  // namespace

Result gauss_kronrod21(const std::function<double(double)>& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kWgk[10];
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol) {
  if (a == b) return {};
  if (b < a) {
    Result r = integrate(f, b, a, tol);
    r.value = -r.value;
    return r;
  }
  return adapt(f, a, b, tol, 0, gauss_kronrod21(f, a, b));
}

}  // namespace embed::quad

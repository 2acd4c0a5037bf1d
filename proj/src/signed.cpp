#include "embed/signed.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "embed/error.hpp"
#include "embed/quadrature.hpp"

namespace embed {
namespace {

double signed_point(Side side, double u) { return side == Side::pos ? u : -u; }

MonotoneFn zero_table() { return MonotoneFn::linear({0.0}, {0.0}, 0.0); }

struct SideIntegral {
  MonotoneFn fwd;
  MonotoneFn tail;
  double total = 0.0;
};

// int dmu/N over one side, tabulated on the side grid.
SideIntegral integrate_side(const TargetMeasure& mu, const CharMeasure& n, Side side, const SideGrid& grid,
                            double rel_tol) {
  SideIntegral out;
  const std::vector<double>& u = grid.u;
  const std::size_t K = u.size();
  if (K < 2) {
    out.fwd = out.tail = zero_table();
    return out;
  }
  const auto integrand = [&](double s) {
    const double p = mu.density(signed_point(side, s));
    if (p == 0.0) return 0.0;
    const double N = n.side(side, s);
    if (!(N > 0.0)) {
      std::ostringstream os;
      os << "characteristic tail vanishes inside the support at " << signed_point(side, s);
      throw EmbedError(ErrorKind::unsupported, os.str());
    }
    return p / N;
  };
  std::vector<double> seg(K - 1, 0.0), jump(K, 0.0), s0(K - 1), s1(K - 1);
  for (std::size_t k = 0; k < K; ++k) {
    const double a = mu.atom_mass(signed_point(side, u[k]));
    if (a > 0.0 && u[k] > 0.0) {
      const double N = n.side(side, u[k]);
      if (!(N > 0.0)) throw EmbedError(ErrorKind::unsupported, "characteristic tail vanishes at an atom");
      jump[k] = a / N;
    }
  }
  if (mu.has_continuous_part()) {
    const quad::Tolerance tol{rel_tol, 0.0, 40};
    for (std::size_t k = 0; k + 1 < K; ++k) {
      seg[k] = quad::integrate(integrand, u[k], u[k + 1], tol).value;
      const double d = 1e-10 * (u[k + 1] - u[k]);
      s0[k] = integrand(u[k] + d);
      s1[k] = integrand(u[k + 1] - d);
    }
  }
  std::vector<double> at(K), right(K);
  double acc = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    if (k > 0) acc += seg[k - 1];
    at[k] = acc;
    acc += jump[k];
    right[k] = acc;
  }
  // Remainder past the last knot: lower bound mu-tail / N (N is non-increasing).
  const double last = u.back();
  double rem = 0.0;
  if (!(std::isfinite(grid.support_end) && last >= grid.support_end)) {
    const double T = mu.side_tail(side, last) - mu.atom_mass(signed_point(side, last));
    if (T > 0.0) {
      const double N = n.side(side, last);
      rem = N > 0.0 ? T / N : kInf;
    }
  }
  const bool infinite = !(rem <= 1e-12 * std::max(right.back(), 1e-300));
  out.total = infinite ? kInf : right.back() + rem;

  std::vector<double> tat(K), tright(K);
  if (infinite) {
    tat = at;
    tright = right;
  } else {
    double suffix = rem;
    for (std::size_t k = K; k-- > 0;) {
      tright[k] = -suffix;
      suffix += jump[k];
      tat[k] = -suffix;
      if (k > 0) suffix += seg[k - 1];
    }
  }
  std::vector<double> x = u;
  out.fwd = MonotoneFn(x, std::move(at), std::move(right), s0, s1, out.total);
  out.tail = MonotoneFn(std::move(x), std::move(tat), std::move(tright), std::move(s0), std::move(s1),
                        infinite ? kInf : 0.0);
  return out;
}

bool close_rel(double a, double b, double tol) {
  if (std::isinf(a) && std::isinf(b)) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

AdmissibilityReport assess(const TargetMeasure& mu, const CharMeasure& /*n*/, const BalanceFunctions* bf,
                           std::string failure) {
  AdmissibilityReport r;
  r.positive_case = mu.side_mass(Side::neg) == 0.0;
  if (!failure.empty()) {
    r.supp_ok = false;
    r.verdict = Verdict::unsupported;
    r.detail = std::move(failure);
    return r;
  }
  r.supp_ok = true;
  r.d_inf = bf->d_inf;
  r.g_inf = r.positive_case ? 0.0 : bf->g_inf;
  if (r.positive_case) {
    r.balance_gap = 0.0;
    r.verdict = Verdict::admissible;
    r.detail = "one-sided law: no balance condition";
    return r;
  }
  if (std::isinf(r.d_inf) && std::isinf(r.g_inf)) {
    r.balance_gap = 0.0;
  } else {
    r.balance_gap = r.d_inf - r.g_inf;
  }
  if (close_rel(r.d_inf, r.g_inf, kBalanceTolerance)) {
    r.verdict = Verdict::admissible;
  } else {
    r.verdict = Verdict::unbalanced;
    std::ostringstream os;
    os << "D(inf) = " << r.d_inf << " differs from G(-inf) = " << r.g_inf;
    r.detail = os.str();
  }
  return r;
}

std::string support_failure(const TargetMeasure& mu, const CharMeasure& n) {
  if (mu.atom_mass(0.0) > 0.0) return "atom at zero";
  const bool neg = mu.side_mass(Side::neg) > 0.0;
  const bool pos = mu.side_mass(Side::pos) > 0.0;
  if (neg && n.one_sided()) return "law charges the negative half-line but the characteristic measure is one-sided";
  for (Side side : {Side::pos, Side::neg}) {
    if (!(side == Side::pos ? pos : neg)) continue;
    // Probe the relevant support: atoms plus quantile points of the continuous part.
    std::vector<double> probes;
    for (const Atom& a : mu.atoms()) {
      const double u = side == Side::pos ? a.location : -a.location;
      if (u > 0) probes.push_back(u);
    }
    if (mu.has_continuous_part() && mu.continuous_side_tail(side, 0.0) > 0.0) {
      const SideGrid g = mu.side_grid(side, GridOptions{16, 0.25, 1e-12, 1e30, 1e-12, 1e-15});
      for (double u : g.u) {
        if (u > g.support_start) probes.push_back(u);
      }
    }
    for (double u : probes) {
      if (!(n.side(side, u) > 0.0)) {
        std::ostringstream os;
        os << "characteristic tail vanishes on the support at " << signed_point(side, u);
        return os.str();
      }
    }
  }
  return {};
}

}  // namespace

BalanceFunctions balance_functions(const TargetMeasure& mu, const CharMeasure& n, const SolverOptions& opts) {
  BalanceFunctions bf;
  bf.pos_grid = mu.side_grid(Side::pos, opts.grid);
  bf.neg_grid = mu.side_grid(Side::neg, opts.grid);
  SideIntegral d = integrate_side(mu, n, Side::pos, bf.pos_grid, opts.rel_tol);
  SideIntegral g;
  if (mu.side_mass(Side::neg) > 0.0) {
    g = integrate_side(mu, n, Side::neg, bf.neg_grid, opts.rel_tol);
  } else {
    g.fwd = g.tail = zero_table();
  }
  bf.D = std::move(d.fwd);
  bf.D_tail = std::move(d.tail);
  bf.d_inf = d.total;
  bf.G = std::move(g.fwd);
  bf.G_tail = std::move(g.tail);
  bf.g_inf = g.total;
  return bf;
}

AdmissibilityReport validate_pair(const TargetMeasure& mu, const CharMeasure& n, const GridOptions& grid) {
  std::string failure = support_failure(mu, n);
  if (!failure.empty()) return assess(mu, n, nullptr, failure);
  SolverOptions opts;
  opts.grid = grid;
  try {
    const BalanceFunctions bf = balance_functions(mu, n, opts);
    return assess(mu, n, &bf, {});
  } catch (const EmbedError& e) {
    if (e.kind() != ErrorKind::unsupported) throw;
    return assess(mu, n, nullptr, e.what());
  }
}

double ConjugateMaps::conjugate(const MonotoneFn& from, const MonotoneFn& from_tail, double from_inf,
                                const MonotoneFn& to, const MonotoneFn& to_tail, double to_inf, double u) {
  const double v = from(u);
  if (std::isfinite(from_inf) && std::isfinite(to_inf) && v > 0.5 * from_inf) {
    // Deep in the tail: match the complements instead of the cancelling totals.
    const double vbar = -from_tail(u);
    return to_tail.right_inverse(-vbar);
  }
  return to.right_inverse(v);
}

double ConjugateMaps::g(double y) const {
  if (y < 0) y = 0;
  return -conjugate(bf_->D, bf_->D_tail, bf_->d_inf, bf_->G, bf_->G_tail, bf_->g_inf, y);
}

double ConjugateMaps::f(double x) const {
  if (x > 0) x = 0;
  return conjugate(bf_->G, bf_->G_tail, bf_->g_inf, bf_->D, bf_->D_tail, bf_->d_inf, -x);
}

ConjugateMaps conjugate_maps(const BalanceFunctions& bf) {
  return ConjugateMaps(std::make_shared<BalanceFunctions>(bf));
}

namespace {

// psi on one side: int_0^u p / (N * den), cut once psi exceeds psi_max.
template <class Den>
MonotoneFn psi_table(const TargetMeasure& mu, const CharMeasure& n, Side side, const SideGrid& grid,
                     const Den& den, const SolverOptions& opts) {
  const std::vector<double>& u = grid.u;
  if (u.size() < 2) return zero_table();
  const auto integrand = [&](double s) {
    const double x = signed_point(side, s);
    const double p = mu.density(x);
    if (p == 0.0) return 0.0;
    return p / (n.side(side, s) * den(s));
  };
  const quad::Tolerance tol{opts.rel_tol, 0.0, 40};
  std::vector<double> x{u[0]}, v{0.0}, s0, s1;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    const double a = u[k];
    const double b = u[k + 1];
    if (!(den(b) > 0.0)) break;
    const double seg = quad::integrate(integrand, a, b, tol).value;
    if (!std::isfinite(seg)) break;
    acc += seg;
    const double d = 1e-10 * (b - a);
    x.push_back(b);
    v.push_back(acc);
    s0.push_back(integrand(a + d));
    s1.push_back(integrand(b - d));
    if (acc > opts.psi_max) break;
  }
  return MonotoneFn::hermite(std::move(x), std::move(v), std::move(s0), std::move(s1), kInf);
}

}  // namespace

BoundaryPair boundary_signed(const TargetMeasure& mu, const CharMeasure& n, const SolverOptions& opts) {
  switch (mu.kind()) {
    case MeasureKind::purely_atomic:
      throw EmbedError(ErrorKind::use_atomic, "atomic target: use the atomic solver");
    case MeasureKind::mixed_positive:
      throw EmbedError(ErrorKind::use_positive, "target with atoms on the half-line: use the positive solver");
    case MeasureKind::absolutely_continuous:
      break;
  }
  const bool has_neg = mu.side_mass(Side::neg) > 0.0;
  const bool has_pos = mu.side_mass(Side::pos) > 0.0;
  if (!has_pos) throw EmbedError(ErrorKind::use_positive, "target has no positive mass (mirror it)");
  if (!has_neg && !opts.one_sided_as_signed) {
    throw EmbedError(ErrorKind::use_positive, "one-sided target: use the positive solver");
  }

  BoundaryPair b;
  const std::string failure = support_failure(mu, n);
  if (!failure.empty()) throw EmbedError(ErrorKind::unsupported, failure);
  auto bf = std::make_shared<BalanceFunctions>(balance_functions(mu, n, opts));
  b.report = assess(mu, n, bf.get(), {});
  if (b.report.verdict == Verdict::unbalanced) throw EmbedError(ErrorKind::unbalanced, b.report.detail);
  b.c_mu = bf->d_inf;
  b.balance = bf;

  if (opts.symmetric_shortcut && has_neg && mu.is_symmetric() && n.is_symmetric()) {
    const auto den = [&](double s) { return 2.0 * mu.upper_tail(s); };
    b.psi_plus = psi_table(mu, n, Side::pos, bf->pos_grid, den, opts);
    b.psi_minus = b.psi_plus;
    b.used_symmetry = true;
    return b;
  }
  const ConjugateMaps maps(bf);
  const auto den_plus = [&](double s) {
    const double x = maps.g(s);
    return mu.upper_tail(s) + (std::isfinite(x) ? mu.strict_lower(x) : 0.0);
  };
  const auto den_minus = [&](double s) {
    const double y = maps.f(-s);
    return (std::isfinite(y) ? mu.upper_tail(y) : 0.0) + mu.strict_lower(-s);
  };
  b.psi_plus = psi_table(mu, n, Side::pos, bf->pos_grid, den_plus, opts);
  b.psi_minus = has_neg ? psi_table(mu, n, Side::neg, bf->neg_grid, den_minus, opts) : zero_table();
  return b;
}

namespace {

std::vector<double> ordinate_knots(const MonotoneFn& f) {
  std::vector<double> out;
  for (std::size_t k = 0; k < f.size(); ++k) {
    out.push_back(f.values()[k]);
    out.push_back(f.right_values()[k]);
  }
  return out;
}

}  // namespace

StoppingRule make_rule(const BoundaryPair& b, const CharMeasure& n) {
  std::vector<double> knots = ordinate_knots(b.psi_plus);
  const std::vector<double> more = ordinate_knots(b.psi_minus);
  knots.insert(knots.end(), more.begin(), more.end());
  auto held = std::make_shared<const BoundaryPair>(b);
  return StoppingRule([held](double l) { return held->phi_plus(l); },
                      [held](double l) { return held->phi_minus(l); }, n, std::move(knots), kInf, "signed");
}

LocalTimeLaw local_time_survival(const BoundaryPair& b, const CharMeasure& n) { return make_rule(b, n).law(); }

StoppedLaw stopped_distribution(const BoundaryPair& b, const CharMeasure& n) { return StoppedLaw(make_rule(b, n)); }

}  // namespace embed

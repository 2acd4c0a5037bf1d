#include "embed/positive.hpp"

#include <cmath>
#include <sstream>

#include "embed/error.hpp"
#include "embed/quadrature.hpp"

namespace embed {

PositiveBoundary dual_hardy_littlewood(const TargetMeasure& mu, const CharMeasure& n, const SolverOptions& opts) {
  if (mu.side_mass(Side::neg) > 0.0) throw EmbedError(ErrorKind::invalid_parameter, "law charges the negative half-line");
  if (mu.atom_mass(0.0) > 0.0) {
    throw EmbedError(ErrorKind::unsupported, "atom at zero: apply atom_at_zero first");
  }
  PositiveBoundary b;
  const SideGrid grid = mu.side_grid(Side::pos, opts.grid);
  const std::vector<double>& u = grid.u;
  if (u.size() < 2) {
    b.psi = MonotoneFn::linear({0.0}, {0.0}, 0.0);
    b.cap = 0.0;
    return b;
  }
  const auto N = [&](double s) {
    const double v = n.upper(s);
    if (!(v > 0.0)) {
      std::ostringstream os;
      os << "characteristic tail vanishes inside the support at " << s;
      throw EmbedError(ErrorKind::unsupported, os.str());
    }
    return v;
  };
  const auto integrand = [&](double s) {
    const double p = mu.density(s);
    if (p == 0.0) return 0.0;
    return p / (mu.upper_tail(s) * N(s));
  };
  const quad::Tolerance tol{opts.rel_tol, 0.0, 40};
  std::vector<double> x, at, right, s0, s1;
  double acc = 0.0;
  double beyond = kInf;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (k > 0) {
      const double a = u[k - 1];
      const double c = u[k];
      double seg = 0.0;
      if (mu.has_continuous_part()) {
        if (!(mu.upper_tail(c) > 0.0) && mu.atom_mass(c) == 0.0) break;
        seg = quad::integrate(integrand, a, c, tol).value;
        if (!std::isfinite(seg)) break;
      }
      const double d = 1e-10 * (c - a);
      s0.push_back(mu.has_continuous_part() ? integrand(a + d) : 0.0);
      s1.push_back(mu.has_continuous_part() ? integrand(c - d) : 0.0);
      acc += seg;
    }
    x.push_back(u[k]);
    at.push_back(acc);
    const double m = u[k] > 0.0 ? mu.atom_mass(u[k]) : 0.0;
    if (m > 0.0) {
      const double tail = mu.upper_tail(u[k]);
      if (m >= tail) {
        // Last atom with nothing beyond: psi jumps to +inf here.
        right.push_back(acc);
        beyond = kInf;
        break;
      }
      acc += -std::log1p(-m / tail) / N(u[k]);
    }
    right.push_back(acc);
    if (acc > opts.psi_max) break;
  }
  s0.resize(x.size() - 1);
  s1.resize(x.size() - 1);
  b.psi = MonotoneFn(std::move(x), std::move(at), std::move(right), std::move(s0), std::move(s1), beyond);
  return b;
}

AtomAtZero atom_at_zero(const TargetMeasure& mu) {
  AtomAtZero out{mu, mu.atom_mass(0.0)};
  if (out.varsigma == 0.0) return out;
  std::vector<Atom> atoms;
  for (const Atom& a : mu.atoms()) {
    if (a.location != 0.0) atoms.push_back(a);
  }
  out.mu_tilde = TargetMeasure(mu.continuous_shared(), std::move(atoms), mu.label() + "~",
                               mu.mass_at_infinity() + out.varsigma);
  return out;
}

PositiveBoundary boundary_positive(const TargetMeasure& mu, const CharMeasure& n, const SolverOptions& opts) {
  const AtomAtZero moved = atom_at_zero(mu);
  if (moved.varsigma == 0.0) return dual_hardy_littlewood(mu, n, opts);
  SolverOptions o = opts;
  o.psi_max = kInf;  // the whole table is needed to read off psi(inf)
  PositiveBoundary b = dual_hardy_littlewood(moved.mu_tilde, n, o);
  b.varsigma = moved.varsigma;
  b.cap = b.psi.last_value();
  return b;
}

StoppingRule make_rule(const PositiveBoundary& b, const CharMeasure& n) {
  std::vector<double> knots;
  for (std::size_t k = 0; k < b.psi.size(); ++k) {
    knots.push_back(b.psi.values()[k]);
    knots.push_back(b.psi.right_values()[k]);
  }
  auto held = std::make_shared<const PositiveBoundary>(b);
  return StoppingRule([held](double l) { return held->phi(l); },
                      [](double) { return kInf; }, n, std::move(knots), b.cap, "positive");
}

ClosedForm closed_form_reference(const std::string& family, const std::map<std::string, double>& params) {
  const auto get = [&](const char* key, double def) {
    const auto it = params.find(key);
    return it == params.end() ? def : it->second;
  };
  ClosedForm cf;
  if (family == "weibull" || family == "exponential") {
    const double a = get("a", 1.0);
    const double b = family == "exponential" ? 1.0 : get("b", 1.0);
    cf.psi = [a, b](double x) { return x <= 0 ? 0.0 : a * b * std::pow(x, b + 1) / (b + 1); };
    cf.phi = [a, b](double l) { return l <= 0 ? 0.0 : std::pow((b + 1) * l / (a * b), 1.0 / (b + 1)); };
    return cf;
  }
  if (family == "uniform") {
    cf.psi = [](double x) { return x <= 0 ? 0.0 : (x >= 1 ? kInf : -std::log1p(-x) - x); };
    cf.phi = [psi = cf.psi](double l) {
      if (l <= 0) return 0.0;
      double lo = 0.0, hi = 1.0;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (psi(mid) >= l ? hi : lo) = mid;
      }
      return hi;
    };
    return cf;
  }
  if (family == "geometric") {
    const double c = -std::log1p(-get("p", 0.5));
    // psi(k) = (k-1) k / 2 c, psi(k+) = k (k+1) / 2 c.
    cf.psi = [c](double x) {
      if (x <= 1) return 0.0;
      const double k = std::ceil(x) - 1.0;
      return k * (k + 1) / 2 * c;
    };
    cf.phi = [c](double l) {
      if (l <= 0) return 1.0;
      double k = std::floor(0.5 * (1.0 + std::sqrt(1.0 + 8.0 * l / c)));
      while (k * (k + 1) / 2 * c <= l) k += 1;
      while (k > 1 && (k - 1) * k / 2 * c > l) k -= 1;
      return k;
    };
    return cf;
  }
  if (family == "double_exponential") {
    const double lam = get("lambda", 1.0);
    const double gam = get("gamma", 1.0);
    cf.phi = [lam, gam](double l) { return std::sqrt((lam + gam) * l) / gam; };
    cf.phi_minus = [lam, gam](double l) { return std::sqrt((lam + gam) * l) / lam; };
    return cf;
  }
  if (family == "f_uniform") {
    const double g = get("g", 1.0);
    const double h = get("h", 1.0);
    const double K = get("K", 1.0 / (1.0 / g + 1.0 / h));
    cf.phi = [g, K](double l) { return g * (1.0 + l / (2.0 * K)); };
    cf.phi_minus = [h, K](double l) { return h * (1.0 + l / (2.0 * K)); };
    return cf;
  }
  throw EmbedError(ErrorKind::invalid_parameter, "no closed form for family '" + family + "'");
}

}  // namespace embed

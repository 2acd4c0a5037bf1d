#include "embed/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "embed/error.hpp"

namespace embed {

AtomicProblem atomic_problem(const TargetMeasure& mu) {
  if (mu.kind() != MeasureKind::purely_atomic) {
    throw EmbedError(ErrorKind::invalid_parameter, "atomic solver needs a purely atomic law");
  }
  AtomicProblem p;
  for (const Atom& a : mu.atoms()) {
    if (a.location < 0) p.neg.push_back(a);
    if (a.location > 0) p.pos.push_back(a);
    if (a.location == 0) throw EmbedError(ErrorKind::unsupported, "atom at zero");
  }
  std::reverse(p.neg.begin(), p.neg.end());
  if (p.neg.empty() || p.pos.empty()) {
    throw EmbedError(ErrorKind::use_positive, "one-sided atomic law: use the positive solver");
  }
  return p;
}

double Breakpoints::phi_plus(double l) const {
  const auto it = std::upper_bound(beta.begin(), beta.end(), l);
  return it == beta.end() ? level_pos.back() : level_pos[it - beta.begin()];
}

double Breakpoints::phi_minus(double l) const {
  const auto it = std::upper_bound(alpha.begin(), alpha.end(), l);
  return it == alpha.end() ? level_neg.back() : level_neg[it - alpha.begin()];
}

namespace {

// Local time needed for one side to use up `remaining`, given survival S and
// total hazard h in the current cell, of which `side` belongs to this atom.
double exhaust_time(double remaining, double side, double h, double S) {
  const double arg = remaining * h / (side * S);
  if (!(arg < 1.0)) return kInf;
  return -std::log1p(-arg) / h;
}

}  // namespace

Breakpoints solve_atomic(const AtomicProblem& p, const CharMeasure& n, const AtomicOptions& opts) {
  Breakpoints bp;
  for (const Atom& a : p.neg) bp.level_neg.push_back(-a.location);
  for (const Atom& a : p.pos) bp.level_pos.push_back(a.location);
  const std::size_t nn = p.neg.size();
  const std::size_t mm = p.pos.size();
  for (std::size_t i = 0; i < nn; ++i) {
    if (!(n.lower(p.neg[i].location) > 0.0)) throw EmbedError(ErrorKind::unsupported, "N- vanishes at an atom");
  }
  for (std::size_t j = 0; j < mm; ++j) {
    if (!(n.upper(p.pos[j].location) > 0.0)) throw EmbedError(ErrorKind::unsupported, "N+ vanishes at an atom");
  }

  const auto fail = [&](std::size_t step, const std::string& why) {
    bp.admissible = false;
    bp.failing_step = step;
    bp.failure = why;
    if (!opts.lenient) {
      std::ostringstream os;
      os << "inadmissible atomic law at step " << step << ": " << why;
      throw EmbedError(ErrorKind::inadmissible, os.str());
    }
  };

  std::size_t i = 0, j = 0;
  double t = 0.0;
  double S = 1.0;
  double r_neg = p.neg[0].mass;
  double r_pos = p.pos[0].mass;
  for (std::size_t step = 1; step <= opts.max_steps; ++step) {
    const double A = n.lower(p.neg[i].location);
    const double B = n.upper(p.pos[j].location);
    const double h = A + B;
    const bool last_neg = i + 1 == nn;
    const bool last_pos = j + 1 == mm;
    if (S < opts.truncate_below && !(last_neg && last_pos)) {
      bp.truncated = true;
      break;
    }
    const double dp = exhaust_time(r_pos, B, h, S);
    const double dn = exhaust_time(r_neg, A, h, S);
    if (last_neg && last_pos) {
      bp.residual = std::abs(r_neg - A * S / h);
      if (bp.residual > opts.terminal_tol) {
        std::ostringstream os;
        os << "terminal condition violated: remaining negative mass " << r_neg << " vs required " << A * S / h;
        fail(step, os.str());
      }
      break;
    }
    // Tie: the positive side moves first.
    const bool advance_pos = dp <= dn;
    const double d = advance_pos ? dp : dn;
    if (!std::isfinite(d)) {
      fail(step, "neither side can exhaust its atom before the other runs out");
      break;
    }
    if (advance_pos ? last_pos : last_neg) {
      fail(step, advance_pos ? "last positive atom exhausted before the negative side"
                             : "last negative atom exhausted before the positive side");
      break;
    }
    const double frac = -std::expm1(-h * d);
    if (advance_pos) {
      r_neg -= A * S * frac / h;
      bp.beta.push_back(t + d);
      r_pos = p.pos[++j].mass;
    } else {
      r_pos -= B * S * frac / h;
      bp.alpha.push_back(t + d);
      r_neg = p.neg[++i].mass;
    }
    S *= 1.0 - frac;
    t += d;
  }
  bp.alpha.resize(nn, kInf);
  bp.beta.resize(mm, kInf);
  return bp;
}

Breakpoints solve_atomic(const TargetMeasure& mu, const CharMeasure& n, const AtomicOptions& opts) {
  return solve_atomic(atomic_problem(mu), n, opts);
}

StoppingRule make_rule(const Breakpoints& bp, const CharMeasure& n) {
  std::vector<double> knots;
  for (double a : bp.alpha) knots.push_back(a);
  for (double b : bp.beta) knots.push_back(b);
  Breakpoints copy = bp;
  return StoppingRule([copy](double l) { return copy.phi_plus(l); },
                      [copy](double l) { return copy.phi_minus(l); }, n, std::move(knots), kInf, "atomic");
}

LocalTimeLaw atomic_survival(const Breakpoints& bp, const CharMeasure& n) { return make_rule(bp, n).law(); }

}  // namespace embed

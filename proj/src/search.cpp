#include "oscert/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <string>

#include "oscert/errors.hpp"

namespace oscert {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

Solution shoot_vanishing(const CoeffPtr& coeffs, double tol) {
  if (!coeffs) throw InputError("shoot_vanishing needs a coefficient set");
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  SolveOptions opt;
  opt.tol = std::min(tol, 1e-10);
  Solution u = solve_ivp(coeffs, coeffs->a(), 0.0, 1.0, opt);
  double scale = 0.0;
  for (double x : u.sample_points())
    scale = std::max(scale, std::fabs(u.u(x)));
  double residual = std::fabs(u.u(coeffs->b()));
  if (residual > tol * scale)
    throw HypothesisError(
        "no endpoint-vanishing solution: the shot from u(a) = 0 ends with "
        "|u(b)| = " + num(residual) + " against solution scale " +
        num(scale));
  return u;
}

namespace {

Certificate scan_objective(const CoeffPtr& tilde, const CoeffPtr& target,
                           const Solution& tilde_u, double c, double tol) {
  double a = tilde->a(), b = tilde->b();
  ComparisonProblem prob(tilde, target, GaugeFunction::linear(a, b, 0.5 * c),
                         GaugeFunction::linear(a, b, c));
  return evaluate_con(prob, tilde_u, tol);
}

}  // namespace

GaugeScan linear_gauge_scan(const CoeffPtr& tilde, const CoeffPtr& target,
                            const Solution& tilde_u, double c_lo, double c_hi,
                            int steps, double tol, RunPolicy policy) {
  if (!(c_lo < c_hi)) throw InputError("gauge scan range has c_lo >= c_hi");
  if (steps < 2) throw InputError("gauge scan needs at least two steps");
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");

  std::vector<double> cs(steps);
  for (int i = 0; i < steps; ++i)
    cs[i] = c_lo + (c_hi - c_lo) * i / (steps - 1);

  std::vector<Certificate> certs(steps);
  std::exception_ptr first_error = nullptr;
  if (policy == RunPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < steps; ++i) {
      try {
        certs[i] = scan_objective(tilde, target, tilde_u, cs[i], tol);
      } catch (...) {
#pragma omp critical
        if (!first_error) first_error = std::current_exception();
      }
    }
  } else {
    for (int i = 0; i < steps; ++i) {
      try {
        certs[i] = scan_objective(tilde, target, tilde_u, cs[i], tol);
      } catch (...) {
        if (!first_error) first_error = std::current_exception();
        break;
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<std::pair<double, Certificate>> evals;
  evals.reserve(steps + 64);
  for (int i = 0; i < steps; ++i) evals.push_back({cs[i], certs[i]});

  int best = 0;
  for (int i = 1; i < steps; ++i)
    if (certs[i].value < certs[best].value) best = i;

  // Golden-section refinement inside the bracket around the best grid
  // point; the scan stays correct for non-unimodal objectives because the
  // final minimizer is taken over every point evaluated.
  double lo = cs[std::max(best - 1, 0)];
  double hi = cs[std::min(best + 1, steps - 1)];
  constexpr double kGolden = 0.61803398874989484820;
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  Certificate f1 = scan_objective(tilde, target, tilde_u, x1, tol);
  Certificate f2 = scan_objective(tilde, target, tilde_u, x2, tol);
  evals.push_back({x1, f1});
  evals.push_back({x2, f2});
  int guard = 0;
  while (hi - lo > tol && ++guard < 200) {
    if (f1.value <= f2.value) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = scan_objective(tilde, target, tilde_u, x1, tol);
      evals.push_back({x1, f1});
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = scan_objective(tilde, target, tilde_u, x2, tol);
      evals.push_back({x2, f2});
    }
  }

  GaugeScan out;
  std::size_t win = 0;
  for (std::size_t i = 1; i < evals.size(); ++i) {
    bool better = evals[i].second.value < evals[win].second.value;
    bool tie = evals[i].second.value == evals[win].second.value &&
               evals[i].first < evals[win].first;
    if (better || tie) win = i;
  }
  out.c = evals[win].first;
  out.certificate = evals[win].second;
  std::sort(evals.begin(), evals.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (const auto& e : evals)
    out.table.push_back({e.first, e.second.value, e.second.err});
  return out;
}

CoeffPtr leighton_tilde() {
  double b = std::numbers::pi;
  PiecewiseFunction one(0.0, b, Expr::number(1.0));
  PiecewiseFunction minus_one(0.0, b, Expr::number(-1.0));
  PiecewiseFunction zero(0.0, b, Expr::number(0.0));
  return std::make_shared<CoefficientSet>(one, minus_one, zero, zero);
}

CoeffPtr leighton_target(double k) {
  double b = std::numbers::pi;
  PiecewiseFunction one(0.0, b, Expr::number(1.0));
  PiecewiseFunction q(0.0, b, Expr::number(k - 1.0) - Expr::variable());
  PiecewiseFunction zero(0.0, b, Expr::number(0.0));
  return std::make_shared<CoefficientSet>(one, q, zero, zero);
}

Report leighton_driver(double k, double c, double tol, int sweep_n,
                       RunPolicy policy) {
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  CoeffPtr tilde = leighton_tilde();
  CoeffPtr target = leighton_target(k);
  Solution tilde_u = shoot_vanishing(tilde, std::max(tol, 1e-9));
  double b = std::numbers::pi;
  ComparisonProblem prob(tilde, target,
                         GaugeFunction::linear(0.0, b, 0.5 * c),
                         GaugeFunction::linear(0.0, b, c));
  Report rep = compare(prob, tilde_u, sweep_n, tol, policy);
  if (rep.certificate.verdict != Verdict::StrictlyNegative && rep.sweep_ran &&
      rep.sweep.zero_free == 0 && sweep_n > 0) {
    int fine = std::max(8 * sweep_n, 512);
    Report refined = compare(prob, tilde_u, fine, tol, policy);
    refined.notes.push_back(
        "direction sweep refined to " + std::to_string(fine) +
        " angles after the coarse sweep found no zero-free solution");
    return refined;
  }
  return rep;
}

ThresholdBracket leighton_threshold(double k_lo, double k_hi, double width,
                                    double tol, RunPolicy policy) {
  if (!(k_lo < k_hi)) throw InputError("threshold bracket needs k_lo < k_hi");
  if (!(width > 0.0)) throw InputError("bracket width must be positive");
  CoeffPtr tilde = leighton_tilde();
  Solution tilde_u = shoot_vanishing(tilde, std::max(tol, 1e-9));
  auto scan_at = [&](double k) {
    return linear_gauge_scan(tilde, leighton_target(k), tilde_u, 0.0, 1.2, 13,
                             tol, policy);
  };
  auto strict = [](const GaugeScan& s) {
    return s.certificate.verdict == Verdict::StrictlyNegative;
  };

  ThresholdBracket out;
  out.lo = k_lo;
  out.hi = k_hi;
  out.scan_lo = scan_at(k_lo);
  out.scan_hi = scan_at(k_hi);
  if (!strict(out.scan_lo))
    throw HypothesisError(
        "no certificate at the lower end: the scanned minimum at k = " +
        num(k_lo) + " is not strictly negative");
  if (strict(out.scan_hi))
    throw HypothesisError(
        "certificate still negative at the upper end k = " +
        num(k_hi) + "; widen the bracket");

  while (out.hi - out.lo > width) {
    double mid = 0.5 * (out.lo + out.hi);
    GaugeScan s = scan_at(mid);
    if (strict(s)) {
      out.lo = mid;
      out.scan_lo = std::move(s);
    } else {
      out.hi = mid;
      out.scan_hi = std::move(s);
    }
  }
  return out;
}

}  // namespace oscert

#pragma once

#include <functional>
#include <vector>

#include "oscert/errors.hpp"

namespace oscert {

struct QuadResult {
  double value = 0.0;
  double err = 0.0;  // rigorous-style estimate, not a proven bound
};

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_panels = 60000;
  bool singular_a = false;  // integrable singularity at the left endpoint
  bool singular_b = false;
  std::vector<double> breakpoints;  // interior points panels must not straddle
};

/// Quadrature failed to reach the requested tolerance within the panel
/// budget (typically a non-integrable or undeclared singularity).
class NonConvergentIntegral : public NumericsError {
 public:
  NonConvergentIntegral(const std::string& what, QuadResult achieved)
      : NumericsError(what), achieved_(achieved) {}
  QuadResult achieved() const { return achieved_; }

 private:
  QuadResult achieved_;
};

/// Adaptive Gauss-Kronrod 7-15 integration of f over [a, b] (a <= b).
///
/// The worst panel by error estimate is bisected until the summed estimate
/// meets max(abs_tol, rel_tol * |value|).  Panels never straddle declared
/// breakpoints.  Declared singular endpoints are handled by geometrically
/// shrinking shells with empirical-ratio tail extrapolation, so integrable
/// endpoint singularities (x^alpha with alpha > -1, log) converge; anything
/// worse exhausts the budget and throws NonConvergentIntegral.
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, const QuadOptions& opt = {});

/// An antiderivative x -> integral of f from `a` to x, for x in [a, b].
///
/// Construction integrates once over the whole interval keeping the
/// accepted panel decomposition; queries combine the cumulative table with
/// a fresh small integration over the partial panel, so every returned
/// value satisfies |result - true integral| <= error_bound().
class Antiderivative {
 public:
  Antiderivative() = default;
  Antiderivative(std::function<double(double)> f, double a, double b,
                 QuadOptions opt = {});

  double operator()(double x) const;
  double a() const { return a_; }
  double b() const { return b_; }
  double error_bound() const { return bound_; }
  /// Value of the full integral over [a, b].
  double total() const;

 private:
  struct Panel {
    double lo, hi;
    double value;
    bool stub;    // unresolved sliver hugging a singular endpoint
    double beta;  // fitted power-law exponent for queries inside a stub
  };

  std::function<double(double)> f_;
  double a_ = 0.0, b_ = 1.0;
  double bound_ = 0.0;
  double query_tol_ = 0.0;
  std::vector<Panel> panels_;
  std::vector<double> prefix_;  // prefix_[i] = sum of panel values before i
};

}  // namespace oscert

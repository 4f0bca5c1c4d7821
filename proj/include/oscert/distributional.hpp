#pragma once

#include <string>
#include <vector>

#include "oscert/comparison.hpp"

namespace oscert {

/// A step discontinuity of the antiderivative: the potential carries the
/// point mass weight * delta_at.
struct PotentialJump {
  double at = 0.0;
  double weight = 0.0;
};

/// A distributional potential v on (a, b) represented by an antiderivative
/// V in L^2: v is the derivative of V, so an absolutely continuous part
/// V' plus one point mass per declared jump.  The pieces of V realize the
/// jumps (right-continuous steps); the jump list declares where they sit
/// and how big they are, and construction cross-checks the two against
/// each other and probes the square-integrability of V.
class PotentialAntiderivative {
 public:
  explicit PotentialAntiderivative(PiecewiseFunction V,
                                   std::vector<PotentialJump> jumps = {});

  double a() const { return V_.a(); }
  double b() const { return V_.b(); }
  double operator()(double x) const { return V_(x); }
  const PiecewiseFunction& antiderivative() const { return V_; }
  const std::vector<PotentialJump>& jumps() const { return jumps_; }
  /// Declared weight at x, 0 when x is not a jump position.
  double jump_weight(double x) const;

 private:
  PiecewiseFunction V_;
  std::vector<PotentialJump> jumps_;
};

/// Coefficients whose generalized equation realizes -u'' + vu = 0:
/// (p, q, r, s) = (1, -V^2, -V, -V).  The quasi-derivative is u' - Vu.
CoeffPtr build_coefficients(const PotentialAntiderivative& V);

struct MeasureCheck {
  bool nondecreasing = true;
  double witness = 0.0;  // first violating point when !nondecreasing
  std::string detail;
};

/// Checks that mu = tildeV - V is non-decreasing, sampling the absolutely
/// continuous part on a uniform grid refined by the piece breakpoints and
/// testing every jump of mu for a non-negative weight.
MeasureCheck measure_nonneg(const PotentialAntiderivative& tildeV,
                            const PotentialAntiderivative& V,
                            int samples = 257);

/// Largest defect of u'(c+) - u'(c-) = w u(c) over the declared jumps,
/// with the one-sided derivatives taken from the solution's dense output
/// and the one-sided coefficient limits.
double jump_condition_residual(const PotentialAntiderivative& V,
                               const Solution& u);

/// Comparison driver for two potentials sharing (a, b): requires
/// mu = tildeV - V non-decreasing and a reference solution of the tildeV
/// equation vanishing at both endpoints.  The certificate is the
/// Stieltjes form -int u~^2 dmu with point masses summed exactly
/// (part[2]) and the absolutely continuous part by midpoint
/// Riemann-Stieltjes sums with Richardson extrapolation (part[1]); it is
/// cross-checked against the integration-by-parts route
/// int 2(V~-V)u~'u~, which is what the generic certificate machinery
/// produces for these coefficient sets with both gauges zero.
Report distributional_compare(const PotentialAntiderivative& tildeV,
                              const PotentialAntiderivative& V,
                              const Solution& tilde_u, double tol,
                              int sweep_n = 64);

}  // namespace oscert

#pragma once

#include <memory>
#include <vector>

#include "oscert/coefficients.hpp"

namespace oscert {

/// Point value of a solution together with its quasi-derivative
/// v = p (u' + s u).
struct QuasiState {
  double x, u, v;
};

struct SolveOptions {
  double tol = 1e-10;       // local error tolerance (absolute and relative)
  int max_steps = 400000;   // accepted + rejected steps over the whole solve
  bool allow_trivial = false;
};

/// One zero of u, bracketed: |x - true zero| <= halfwidth.  min_abs_v
/// records the smallest |v| seen inside the bracket; a genuine simple zero
/// keeps it away from zero, by uniqueness of the initial value problem.
struct ZeroEnclosure {
  double x;
  double halfwidth;
  double min_abs_v;
};
using ZeroList = std::vector<ZeroEnclosure>;

enum class RunPolicy { Serial, Parallel };

/// A solution of -(p(u'+su))' + rp(u'+su) + qu = 0 in first-order form
///   u' = -s u + v/p,   v' = q u + r v,
/// densely evaluable on [a, b].  On segments where all four coefficients
/// are constant the solver stores the closed-form 2x2 matrix exponential,
/// so evaluation there is exact; elsewhere it stores the Dormand-Prince
/// 5(4) dense-output polynomial of each accepted step.
class Solution {
 public:
  double u(double x) const;
  double v(double x) const;
  QuasiState state(double x) const;

  double a() const;
  double b() const;
  double x0() const { return x0_; }
  double initial_u() const { return u0_; }
  double initial_v() const { return v0_; }
  double tol() const { return tol_; }
  bool trivial() const { return trivial_; }
  const CoeffPtr& coefficients() const { return coeffs_; }
  /// Accepted step endpoints (sorted, includes a, x0, b).
  const std::vector<double>& mesh() const { return mesh_; }
  /// Mesh refined so consecutive points subtend less than a quarter turn
  /// of the solution's rotation.  RK steps already resolve oscillation,
  /// but a constant-coefficient segment is one record regardless of how
  /// many periods it spans, so its interior is subdivided here using the
  /// segment's exact angular rate sqrt(-q/p - ((r+s)/2)^2).
  std::vector<double> sample_points() const;

  // One accepted step (or whole constant-coefficient segment) of the
  // dense representation; an implementation detail kept public for the
  // stepping code in solver.cpp.
  struct StepRec {
    double xa, h;    // covers [xa, xa+h], h signed and nonzero
    double ua, va;   // state at xa
    bool exact;      // constant-coefficient segment: matrix exponential
    double sv, pinv, qv, rv;  // exact records
    double rc[2][5];          // RK dense-output coefficients
    double lo, hi;
    void eval(double x, double& u, double& v) const;
  };

 private:
  const StepRec& record_at(double x) const;

  CoeffPtr coeffs_;
  double x0_ = 0.0, u0_ = 0.0, v0_ = 0.0, tol_ = 0.0;
  bool trivial_ = false;
  std::vector<StepRec> recs_;
  std::vector<double> mesh_;

  friend Solution solve_ivp(CoeffPtr, double, double, double,
                            const SolveOptions&);
};

/// Integrate from x0 in [a, b] with u(x0) = A, v(x0) = B over the whole
/// interval (both directions when x0 is interior).  The sweep has to
/// cross every point of [a, b], so all four coefficients (and 1/p) must
/// stay bounded up to both endpoints: sets with a declared singular
/// endpoint are rejected.  (A, B) = (0, 0) is rejected unless
/// opt.allow_trivial is set.
Solution solve_ivp(CoeffPtr coeffs, double x0, double A, double B,
                   const SolveOptions& opt = {});

/// All zeros of u strictly inside (lo, hi), each bracketed to halfwidth
/// <= max(tol, a few ulps).  Sample points come from sample_points() and
/// are refined wherever the phase proxy atan2(v/scale, u) turns by more
/// than a quarter turn, so closely spaced zeros are separated.  Zeros
/// within max(tol, 1e-12 * (hi - lo)) of lo or hi are excluded.
ZeroList find_zeros(const Solution& sol, double lo, double hi, double tol);

/// Max over `samples` uniform points of |W(x) e^{S-R} - W(a) e^{S-R}(a)|
/// where W = u1 v2 - u2 v1.  The weighted Wronskian of two solutions of
/// the same equation is conserved, so this measures solver drift.
/// Both solutions must share the same CoefficientSet object.
double wronskian_drift(const Solution& s1, const Solution& s2,
                       int samples = 257);

/// Max relative defect of the integral form of the system over `probes`
/// sub-intervals: |u(x2)-u(x1) - int(-su+v/p)| / scale and likewise for v.
double solution_residual(const Solution& sol, int probes = 6);

/// Initial state (cos theta, sin theta); values within a few ulps of zero
/// snap to exact zero so axis directions are exact.
void theta_state(double theta, double& u, double& v);

/// Solutions for n equally spaced directions theta_j = j pi / n, j < n,
/// all launched at x0.  Policy selects the serial reference loop or the
/// OpenMP-parallel one; both produce bitwise-identical solutions.
std::vector<Solution> theta_sweep(CoeffPtr coeffs, double x0, int n,
                                  const SolveOptions& opt = {},
                                  RunPolicy policy = RunPolicy::Serial);

}  // namespace oscert

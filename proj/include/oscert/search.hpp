#pragma once

#include <vector>

#include "oscert/comparison.hpp"

namespace oscert {

/// Solves from (u, v)(a) = (0, 1) and accepts when |u(b)| <= tol * scale.
/// The solution space is two-dimensional, so u(a) = 0 pins the candidate
/// up to scaling and endpoint vanishing is a test, not a search; failure
/// reports the terminal residual.
Solution shoot_vanishing(const CoeffPtr& coeffs, double tol);

struct ScanPoint {
  double c = 0.0;
  double value = 0.0;
  double err = 0.0;
};

struct GaugeScan {
  double c = 0.0;            // minimizer over everything evaluated
  Certificate certificate;   // certificate at c
  std::vector<ScanPoint> table;  // all evaluated points, ascending in c
};

/// Minimizes the certificate value over the linear gauge family G = c x,
/// F = c x / 2 between c_lo and c_hi: a uniform grid of `steps` points
/// followed by golden-section refinement of the best bracket down to
/// width tol.  Ties go to the lowest c.  Grid points are evaluated
/// concurrently under the parallel policy with a deterministic reduction.
GaugeScan linear_gauge_scan(const CoeffPtr& tilde, const CoeffPtr& target,
                            const Solution& tilde_u, double c_lo, double c_hi,
                            int steps, double tol,
                            RunPolicy policy = RunPolicy::Serial);

/// The flagship comparison: q~ = -1 against q = k - 1 - x on (0, pi) with
/// p = p~ = 1, r = s = 0 on both sides, reference solution sin, and
/// gauges F = c x / 2, G = c x, so the certificate reduces to
/// int_0^pi (k - x + c^2/4) e^{cx} sin^2 x dx.  When the certificate does
/// not force oscillation and the sweep finds no zero-free direction, the
/// sweep is re-run at finer angular resolution before reporting.
Report leighton_driver(double k, double c, double tol, int sweep_n = 64,
                       RunPolicy policy = RunPolicy::Serial);

/// Coefficient sets used by leighton_driver, exposed for reuse.
CoeffPtr leighton_tilde();
CoeffPtr leighton_target(double k);

/// Bisection bracket for the largest k the linear gauge family can
/// certify: phi(k) = min over c in [0, 1.2] of the scanned certificate is
/// increasing in k, and the bracket satisfies phi(lo) strictly negative,
/// phi(hi) not, with hi - lo <= width.  The certificate is sufficient,
/// not sharp, so this brackets what the toolkit can prove, a lower bound
/// for the true oscillation threshold of the family q = k - 1 - x.
struct ThresholdBracket {
  double lo = 0.0, hi = 0.0;
  GaugeScan scan_lo, scan_hi;
};
ThresholdBracket leighton_threshold(double k_lo, double k_hi, double width,
                                    double tol,
                                    RunPolicy policy = RunPolicy::Serial);

}  // namespace oscert

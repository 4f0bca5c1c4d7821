#pragma once

#include <functional>
#include <string>
#include <vector>

#include "oscert/coefficients.hpp"
#include "oscert/solver.hpp"

namespace oscert {

/// Sign classification of a certificate value with its error bound.
/// The bands partition the finite reals:
///   StrictlyNegative  value + err < 0
///   Positive          value - err > 0
///   WeakNonpositive   |value| <= err
/// Inconclusive is reserved for non-finite values (failed evaluation).
enum class Verdict { StrictlyNegative, WeakNonpositive, Inconclusive, Positive };

Verdict classify(double value, double err);
const char* verdict_name(Verdict v);

/// The certificate integral
///   int_a^b [ A (u~' + s~ u~)^2 + B (u~' + s~ u~) u~ + C u~^2 ] dx
/// with its three-part breakdown (parts indexed A=0, B=1, C=2).
struct Certificate {
  double value = 0.0;
  double err = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double part[3] = {0.0, 0.0, 0.0};
  double part_err[3] = {0.0, 0.0, 0.0};
};

/// A comparison instance: the reference ("tilde") equation whose
/// endpoint-vanishing solution drives the certificate, the target
/// equation being tested for oscillation, and the two gauges.
struct ComparisonProblem {
  ComparisonProblem(CoeffPtr tilde_set, CoeffPtr target_set, GaugeFunction F_,
                    GaugeFunction G_);

  CoeffPtr tilde;
  CoeffPtr target;
  GaugeFunction F;
  GaugeFunction G;
};

/// The certificate integrand coefficients as dense evaluable functions
///   A = p e^{2F+S-R} - p~ e^G
///   B = 2 p (f + s - s~) e^{2F+S-R} - p~ (g + r~ - s~) e^G
///   C = (q + p (f + s - s~)^2) e^{2F+S-R} - q~ e^G
/// where lower-case letters are the target coefficients, tilded ones the
/// reference, f = F', g = G', and S, R are the target antiderivatives.
struct AbcCoefficients {
  std::function<double(double)> A, B, C;
  std::vector<double> breakpoints;
  bool singular_a = false, singular_b = false;
};

/// Builds the integrand coefficients and probes integrability of A/p~^2,
/// B/p~ and C by convergent quadrature (the certificate integral converges
/// exactly when these do, since u~' + s~ u~ = v~/p~ with bounded v~).
/// Throws HypothesisError naming the ratio that failed.
AbcCoefficients abc_coefficients(const ComparisonProblem& prob);

/// The quadratic form int_a^b e^{S-R} (p (phi' + s phi)^2 + q phi^2) dx
/// for an absolutely continuous phi vanishing at both endpoints.  The
/// Solution overload accepts a solution of any equation on the same
/// interval and uses its quasi-derivative for phi' (never numerical
/// differentiation); the function overload takes phi and phi' explicitly.
double quadratic_form(const CoefficientSet& c, const Solution& phi,
                      double tol);
double quadratic_form(const CoefficientSet& c,
                      const std::function<double(double)>& phi,
                      const std::function<double(double)>& dphi,
                      const std::vector<double>& phi_breakpoints, double tol);

/// Evaluates the certificate for a nontrivial solution of the tilde
/// equation vanishing at both endpoints (both facts are verified; the
/// quasi-derivative identity u~' + s~ u~ = v~/p~ is used throughout).
Certificate evaluate_con(const ComparisonProblem& prob,
                         const Solution& tilde_u, double tol);

/// The integration-by-parts identity
///   0 = int_a^b e^G [ v~^2/p~ + (g + r~ - s~) v~ u~ + q~ u~^2 ] dx,
/// exact for every admissible gauge G and every solution of the tilde
/// equation vanishing at a and b.  Returns the numerically evaluated
/// right-hand side; its distance from zero measures the combined solver
/// and quadrature error, making this the strongest internal consistency
/// check of the module.
double gauge_identity_residual(const CoefficientSet& tilde,
                               const Solution& tilde_u,
                               const GaugeFunction& G, double tol);

/// Zero counts across a theta sweep of the target equation.
struct SweepSummary {
  int n = 0;
  int zero_free = 0;
  std::vector<double> zero_free_thetas;
  int min_zeros = 0;
  int max_zeros = 0;
};

struct Report {
  Certificate certificate;
  double gauge_residual = 0.0;
  SweepSummary sweep;
  bool sweep_ran = false;
  /// Set when u~ e^F is itself (numerically) a solution of the target
  /// equation, the only way a strict conclusion can degrade to weak.
  bool exceptional_multiple = false;
  double multiple_defect = 0.0;
  /// Cleared when any cross-check disagrees with the verdict; the notes
  /// then carry the details.
  bool consistent = true;
  std::vector<std::string> notes;
};

/// Full comparison driver: evaluates the certificate, the gauge identity
/// residual, and (when the target is solvable) a theta sweep of the
/// target equation launched at a.  A StrictlyNegative certificate asserts
/// every sampled solution has a zero strictly inside (a, b); violations
/// are reported as numerical inconsistencies, never silently dropped.  A
/// WeakNonpositive certificate additionally tests the exceptional case
/// that u~ e^F solves the target equation.
Report compare(const ComparisonProblem& prob, const Solution& tilde_u,
               int sweep_n, double tol,
               RunPolicy policy = RunPolicy::Serial);

/// Monotone-weight comparison for sets with r = s and r~ = s~: verifies
/// 0 < p <= p~ and q <= q~ at samples and that mu = p~ (s - s~) e^{-2S}
/// is nondecreasing (tolerance -tol), then runs compare with the gauges
/// G = 2F = 2S~ - 2S.  The middle certificate part is cross-checked
/// against the independent Stieltjes evaluation -int v~^2 dmu, where
/// v~ = u~ e^{S~} (midpoint sums with Richardson extrapolation, plus the
/// exact jump terms of mu at breakpoints).
Report sturm_picone(CoeffPtr tilde, CoeffPtr target, const Solution& tilde_u,
                    double tol, int sweep_n = 64,
                    RunPolicy policy = RunPolicy::Serial);

/// Separation driver for two solutions of the same equation: with
/// F = 0, G = S - R all three integrand coefficients vanish identically,
/// so u either has a zero strictly between consecutive zeros of u~ or is
/// a constant multiple of it (tested via the conserved weighted
/// Wronskian).
Report separation(CoeffPtr c, const Solution& tilde_u, const Solution& u,
                  double tol);

/// Human-readable multi-line table.
std::string render_table(const Report& rep);
/// Machine-readable single CSV line matching render_csv_header().
std::string render_csv(const Report& rep);
std::string render_csv_header();

}  // namespace oscert

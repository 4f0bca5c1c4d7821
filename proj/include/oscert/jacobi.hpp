#pragma once

#include <vector>

#include "oscert/comparison.hpp"

namespace oscert {

/// The three-term recurrence
///   alpha_{n-1} u_{n-1} + beta_n u_n + alpha_n u_{n+1} = 0
/// in forward-difference form
///   -alpha_n (u_{n+1} - u_n) + alpha_{n-1} (u_n - u_{n-1}) + v_n u_n = 0
/// with v_n = -beta_n - alpha_n - alpha_{n-1}, on the integer range
/// [N0, N1].  alpha is indexed [N0, N1-1] and must be positive; v is
/// indexed [N0+1, N1-1].
struct JacobiProblem {
  JacobiProblem(int n0, int n1, std::vector<double> alpha_,
                std::vector<double> v_);
  static JacobiProblem from_beta(int n0, int n1, std::vector<double> alpha_,
                                 std::vector<double> beta);

  int N0, N1;
  std::vector<double> alpha;  // alpha[n - N0] for n in [N0, N1-1]
  std::vector<double> v;      // v[n - N0 - 1] for n in [N0+1, N1-1]

  double alpha_at(int n) const;
  double v_at(int n) const;
};

/// Lattice values u indexed [N0, N1].
struct JacobiSolution {
  int N0 = 0;
  std::vector<double> u;

  int N1() const { return N0 + (int)u.size() - 1; }
  double at(int n) const;
};

/// Forward recursion from the first two values; exact up to floating
/// rounding (alpha > 0 makes every step solvable).
JacobiSolution solve_recurrence(const JacobiProblem& p, double u_first,
                                double u_second);

/// Max absolute defect of the forward-difference recurrence over the
/// interior indices.
double recurrence_residual(const JacobiProblem& p, const JacobiSolution& u);

/// True iff u_n u_m < 0 for some pair of indices.
bool changes_sign(const JacobiSolution& u);

/// The discrete certificate
///   sum_{n=N0+1}^{N1-1} [ (alpha_{n-1} - alpha~_{n-1}) (u~_n - u~_{n-1})^2
///                         + (v_n - v~_n) u~_n^2 ]
///   + (alpha_{N1-1} - alpha~_{N1-1}) (u~_{N1-1}^2 - u~_{N1-1} u~_{N1})
/// for a nontrivial reference solution with u~_{N0} = 0 and
/// u~_{N1-1} u~_{N1} <= 0.  dcon_certificate carries a rounding-level
/// error bound, so the verdict distinguishes "negative beyond rounding"
/// from weakly nonpositive; part[0] holds the difference-quotient and
/// boundary terms, part[2] the potential term.
double dcon_value(const JacobiProblem& tilde, const JacobiProblem& target,
                  const JacobiSolution& tilde_u);
Certificate dcon_certificate(const JacobiProblem& tilde,
                             const JacobiProblem& target,
                             const JacobiSolution& tilde_u);

/// Piecewise-constant continuous coefficients whose solutions interpolate
/// the lattice solutions linearly: on [n, n+1),
///   p~ = alpha_n, s~ = -(v_{N0+1} + ... + v_n)/alpha_n, q~ = -p~ s~^2,
///   r~ = s~.
/// embed_on builds them on [N0, b]; embed derives b from the reference
/// solution (the abscissa crossing of its last linear segment, in closed
/// form).
struct Embedding {
  CoeffPtr set;
  double b;
};
CoeffPtr embed_on(const JacobiProblem& p, double b);
Embedding embed(const JacobiProblem& p, const JacobiSolution& tilde_u);

/// Discrete comparison driver: evaluates the discrete certificate, sweeps
/// target recurrence solutions over initial directions (sign change
/// checked on the full integer range), tests the proportional-solution
/// case on a weak verdict, and cross-checks the certificate against the
/// continuous one on the embedded problems with both gauges zero
/// (certificate evaluated on [N0, b]).
Report discrete_compare(const JacobiProblem& tilde,
                        const JacobiProblem& target,
                        const JacobiSolution& tilde_u, int sweep_n = 256);

}  // namespace oscert

#include "oscert/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "oscert/errors.hpp"

namespace oscert {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

JacobiProblem::JacobiProblem(int n0, int n1, std::vector<double> alpha_,
                             std::vector<double> v_)
    : N0(n0), N1(n1), alpha(std::move(alpha_)), v(std::move(v_)) {
  if (N1 - N0 < 2)
    throw InputError("lattice range [" + std::to_string(N0) + ", " +
                     std::to_string(N1) + "] is too short (need N1-N0 >= 2)");
  if ((int)alpha.size() != N1 - N0)
    throw InputError("expected " + std::to_string(N1 - N0) +
                     " alpha values, got " + std::to_string(alpha.size()));
  if ((int)v.size() != N1 - N0 - 1)
    throw InputError("expected " + std::to_string(N1 - N0 - 1) +
                     " v values, got " + std::to_string(v.size()));
  for (int n = N0; n < N1; ++n)
    if (!(alpha[n - N0] > 0.0))
      throw InputError("alpha must be positive; alpha_" + std::to_string(n) +
                       " = " + std::to_string(alpha[n - N0]));
}

JacobiProblem JacobiProblem::from_beta(int n0, int n1,
                                       std::vector<double> alpha_,
                                       std::vector<double> beta) {
  if ((int)alpha_.size() != n1 - n0)
    throw InputError("expected " + std::to_string(n1 - n0) +
                     " alpha values, got " + std::to_string(alpha_.size()));
  if ((int)beta.size() != n1 - n0 - 1)
    throw InputError("expected " + std::to_string(n1 - n0 - 1) +
                     " beta values, got " + std::to_string(beta.size()));
  std::vector<double> v_(beta.size());
  for (int n = n0 + 1; n <= n1 - 1; ++n)
    v_[n - n0 - 1] =
        -beta[n - n0 - 1] - alpha_[n - n0] - alpha_[n - n0 - 1];
  return JacobiProblem(n0, n1, std::move(alpha_), std::move(v_));
}

double JacobiProblem::alpha_at(int n) const {
  if (n < N0 || n >= N1)
    throw InputError("alpha index " + std::to_string(n) + " outside [" +
                     std::to_string(N0) + ", " + std::to_string(N1 - 1) +
                     "]");
  return alpha[n - N0];
}

double JacobiProblem::v_at(int n) const {
  if (n <= N0 || n >= N1)
    throw InputError("v index " + std::to_string(n) + " outside [" +
                     std::to_string(N0 + 1) + ", " + std::to_string(N1 - 1) +
                     "]");
  return v[n - N0 - 1];
}

double JacobiSolution::at(int n) const {
  if (n < N0 || n > N1())
    throw InputError("lattice index " + std::to_string(n) + " outside [" +
                     std::to_string(N0) + ", " + std::to_string(N1()) + "]");
  return u[n - N0];
}

JacobiSolution solve_recurrence(const JacobiProblem& p, double u_first,
                                double u_second) {
  if (u_first == 0.0 && u_second == 0.0)
    throw InputError("zero initial pair gives the trivial lattice solution");
  JacobiSolution out;
  out.N0 = p.N0;
  out.u.resize(p.N1 - p.N0 + 1);
  out.u[0] = u_first;
  out.u[1] = u_second;
  for (int n = p.N0 + 1; n <= p.N1 - 1; ++n) {
    double un = out.u[n - p.N0];
    double um = out.u[n - p.N0 - 1];
    out.u[n - p.N0 + 1] =
        un + (p.alpha_at(n - 1) * (un - um) + p.v_at(n) * un) / p.alpha_at(n);
  }
  return out;
}

double recurrence_residual(const JacobiProblem& p, const JacobiSolution& u) {
  double worst = 0.0;
  for (int n = p.N0 + 1; n <= p.N1 - 1; ++n) {
    double d = -p.alpha_at(n) * (u.at(n + 1) - u.at(n)) +
               p.alpha_at(n - 1) * (u.at(n) - u.at(n - 1)) +
               p.v_at(n) * u.at(n);
    worst = std::max(worst, std::fabs(d));
  }
  return worst;
}

bool changes_sign(const JacobiSolution& u) {
  bool pos = false, neg = false;
  for (double t : u.u) {
    if (t > 0.0) pos = true;
    if (t < 0.0) neg = true;
  }
  return pos && neg;
}

namespace {

void check_dcon_inputs(const JacobiProblem& tilde, const JacobiProblem& target,
                       const JacobiSolution& tu) {
  if (tilde.N0 != target.N0 || tilde.N1 != target.N1)
    throw InputError("lattice ranges differ: [" + std::to_string(tilde.N0) +
                     ", " + std::to_string(tilde.N1) + "] vs [" +
                     std::to_string(target.N0) + ", " +
                     std::to_string(target.N1) + "]");
  if (tu.N0 != tilde.N0 || tu.N1() != tilde.N1)
    throw InputError("reference lattice solution covers [" +
                     std::to_string(tu.N0) + ", " + std::to_string(tu.N1()) +
                     "], problem needs [" + std::to_string(tilde.N0) + ", " +
                     std::to_string(tilde.N1) + "]");
  bool nontrivial = false;
  for (double t : tu.u)
    if (t != 0.0) nontrivial = true;
  if (!nontrivial)
    throw HypothesisError("reference lattice solution is trivial");
  if (tu.at(tilde.N0) != 0.0)
    throw HypothesisError("reference solution must vanish at n = " +
                          std::to_string(tilde.N0) + "; got " +
                          std::to_string(tu.at(tilde.N0)));
  if (tu.at(tilde.N1 - 1) * tu.at(tilde.N1) > 0.0)
    throw HypothesisError(
        "reference solution needs u_{N1-1} u_{N1} <= 0; at n = " +
        std::to_string(tilde.N1 - 1) + " the product is " +
        std::to_string(tu.at(tilde.N1 - 1) * tu.at(tilde.N1)));
}

}  // namespace

Certificate dcon_certificate(const JacobiProblem& tilde,
                             const JacobiProblem& target,
                             const JacobiSolution& tu) {
  check_dcon_inputs(tilde, target, tu);
  int n0 = tilde.N0, n1 = tilde.N1;
  double quad = 0.0, pot = 0.0, abssum = 0.0;
  for (int n = n0 + 1; n <= n1 - 1; ++n) {
    double du = tu.at(n) - tu.at(n - 1);
    double t1 = (target.alpha_at(n - 1) - tilde.alpha_at(n - 1)) * du * du;
    double t2 = (target.v_at(n) - tilde.v_at(n)) * tu.at(n) * tu.at(n);
    quad += t1;
    pot += t2;
    abssum += std::fabs(t1) + std::fabs(t2);
  }
  double un = tu.at(n1 - 1);
  double boundary = (target.alpha_at(n1 - 1) - tilde.alpha_at(n1 - 1)) *
                    (un * un - un * tu.at(n1));
  quad += boundary;
  abssum += std::fabs(boundary);

  Certificate cert;
  cert.part[0] = quad;
  cert.part[1] = 0.0;
  cert.part[2] = pot;
  cert.value = quad + pot;
  cert.err = 64.0 * kEps * abssum;
  cert.verdict = classify(cert.value, cert.err);
  return cert;
}

double dcon_value(const JacobiProblem& tilde, const JacobiProblem& target,
                  const JacobiSolution& tilde_u) {
  return dcon_certificate(tilde, target, tilde_u).value;
}

CoeffPtr embed_on(const JacobiProblem& p, double b) {
  if (!(b > p.N0 && b <= p.N1))
    throw InputError("embedding endpoint " + std::to_string(b) +
                     " outside (" + std::to_string(p.N0) + ", " +
                     std::to_string(p.N1) + "]");
  double a = p.N0;
  std::vector<double> bks;
  std::vector<Expr> pp, qp, rp, sp;
  double vsum = 0.0;
  for (int n = p.N0; n < p.N1 && n < b; ++n) {
    if (n > p.N0) {
      bks.push_back(n);
      vsum += p.v_at(n);
    }
    double pa = p.alpha_at(n);
    double s = -vsum / pa;
    pp.push_back(Expr::number(pa));
    sp.push_back(Expr::number(s));
    rp.push_back(Expr::number(s));
    qp.push_back(Expr::number(-pa * s * s));
  }
  auto mk = [&](std::vector<Expr> pieces) {
    return PiecewiseFunction(a, b, bks, std::move(pieces));
  };
  return std::make_shared<CoefficientSet>(mk(std::move(pp)), mk(std::move(qp)),
                                          mk(std::move(rp)),
                                          mk(std::move(sp)));
}

Embedding embed(const JacobiProblem& p, const JacobiSolution& tilde_u) {
  if (tilde_u.N0 != p.N0 || tilde_u.N1() != p.N1)
    throw InputError("lattice solution does not cover the problem range");
  double u1 = tilde_u.at(p.N1 - 1), u2 = tilde_u.at(p.N1);
  double b;
  if (u1 == 0.0)
    b = p.N1 - 1;
  else if (u2 == 0.0)
    b = p.N1;
  else if (u1 * u2 < 0.0)
    b = (p.N1 - 1) + u1 / (u1 - u2);
  else
    throw HypothesisError(
        "reference solution needs u_{N1-1} u_{N1} <= 0 to pin the "
        "embedding endpoint; the product is " + std::to_string(u1 * u2));
  return {embed_on(p, b), b};
}

Report discrete_compare(const JacobiProblem& tilde,
                        const JacobiProblem& target,
                        const JacobiSolution& tilde_u, int sweep_n) {
  Report rep;
  rep.certificate = dcon_certificate(tilde, target, tilde_u);

  double uscale = 0.0;
  for (double t : tilde_u.u) uscale = std::max(uscale, std::fabs(t));

  // Continuous cross-check on the embedded problems with zero gauges:
  // the certificate integral equals the discrete sum exactly, and the
  // continuous solution interpolates the lattice solution linearly.
  Embedding et = embed(tilde, tilde_u);
  CoeffPtr eg = embed_on(target, et.b);
  double v0 = tilde.alpha_at(tilde.N0) * tilde_u.at(tilde.N0 + 1);
  SolveOptions sopt;
  sopt.tol = 1e-12;
  Solution cont = solve_ivp(et.set, tilde.N0, 0.0, v0, sopt);
  double fid = 0.0;
  for (int n = tilde.N0; n <= tilde.N1 && n <= et.b; ++n)
    fid = std::max(fid, std::fabs(cont.u(n) - tilde_u.at(n)));
  if (fid > 1e-9 * std::max(1.0, uscale)) {
    rep.consistent = false;
    rep.notes.push_back("embedded solution strays from the lattice values "
                        "by " + std::to_string(fid));
  }
  ComparisonProblem prob(et.set, eg, GaugeFunction(), GaugeFunction());
  Certificate con = evaluate_con(prob, cont, 1e-10);
  double dfc = std::fabs(con.value - rep.certificate.value);
  double thr = 1e-8 * std::max(1.0, std::fabs(rep.certificate.value));
  if (dfc > thr + con.err) {
    rep.consistent = false;
    rep.notes.push_back(
        "discrete certificate disagrees with the embedded continuous one: " +
        std::to_string(rep.certificate.value) + " vs " +
        std::to_string(con.value));
  } else {
    rep.notes.push_back("embedded continuous certificate matches within " +
                        std::to_string(dfc));
  }

  // Sweep of target lattice solutions over initial directions; the sign
  // change is judged on the full integer range.
  rep.sweep.n = sweep_n;
  bool first = true;
  for (int j = 0; j < sweep_n; ++j) {
    double th = j * std::numbers::pi / sweep_n;
    double cu = std::cos(th), su = std::sin(th);
    if (std::fabs(cu) < 4.0 * kEps) cu = 0.0;
    if (std::fabs(su) < 4.0 * kEps) su = 0.0;
    JacobiSolution w = solve_recurrence(target, cu, su);
    int flips = 0;
    for (std::size_t i = 0; i + 1 < w.u.size(); ++i)
      if (w.u[i] * w.u[i + 1] < 0.0) ++flips;
    bool flipped = changes_sign(w);
    if (first || flips < rep.sweep.min_zeros) rep.sweep.min_zeros = flips;
    if (first || flips > rep.sweep.max_zeros) rep.sweep.max_zeros = flips;
    first = false;
    if (!flipped) {
      ++rep.sweep.zero_free;
      rep.sweep.zero_free_thetas.push_back(th);
    }
  }
  rep.sweep_ran = true;

  switch (rep.certificate.verdict) {
    case Verdict::StrictlyNegative:
      if (rep.sweep.zero_free > 0) {
        rep.consistent = false;
        rep.notes.push_back("certificate is strictly negative but " +
                            std::to_string(rep.sweep.zero_free) + " of " +
                            std::to_string(rep.sweep.n) +
                            " sampled lattice solutions never change sign");
      } else {
        rep.notes.push_back("all " + std::to_string(rep.sweep.n) +
                            " sampled lattice solutions change sign");
      }
      break;
    case Verdict::WeakNonpositive: {
      JacobiSolution w = solve_recurrence(target, tilde_u.at(tilde.N0),
                                          tilde_u.at(tilde.N0 + 1));
      double d = 0.0;
      for (std::size_t i = 0; i < w.u.size(); ++i)
        d = std::max(d, std::fabs(w.u[i] - tilde_u.u[i]));
      rep.multiple_defect = d / std::max(uscale, 1e-300);
      rep.exceptional_multiple = rep.multiple_defect <= 1e-10;
      if (rep.exceptional_multiple)
        rep.notes.push_back(
            "weak case: the reference lattice solution also solves the "
            "target recurrence");
      break;
    }
    default:
      break;
  }
  return rep;
}

}  // namespace oscert

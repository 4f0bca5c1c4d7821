#include "oscert/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "oscert/errors.hpp"
#include "oscert/quadrature.hpp"

namespace oscert {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void solution_scales(const Solution& sol, double& us, double& vs) {
  us = vs = 0.0;
  std::vector<double> pts = sol.sample_points();
  for (int i = 0; i <= 32; ++i)
    pts.push_back(sol.a() + (sol.b() - sol.a()) * i / 32.0);
  for (double x : pts) {
    QuasiState st = sol.state(x);
    us = std::max(us, std::fabs(st.u));
    vs = std::max(vs, std::fabs(st.v));
  }
}

// Shared preconditions on the reference solution: right coefficient set,
// nontrivial, actually a solution, vanishing at both endpoints.
void check_reference_solution(const CoeffPtr& tilde, const Solution& tu,
                              double tol) {
  if (tu.coefficients().get() != tilde.get())
    throw InputError(
        "reference solution was not produced from the reference "
        "coefficient set");
  if (tu.trivial())
    throw HypothesisError("reference solution is trivial");
  double defect = solution_residual(tu);
  if (!(defect <= 1e-6))
    throw HypothesisError("reference solution fails its residual check "
                          "(relative defect " + short_num(defect) + ")");
  double us, vs;
  solution_scales(tu, us, vs);
  double thr = std::max(tol, 16.0 * kEps) * us;
  double ua = std::fabs(tu.u(tu.a()));
  double ub = std::fabs(tu.u(tu.b()));
  if (ua > thr)
    throw HypothesisError("reference solution does not vanish at x = " +
                          short_num(tu.a()) + ": |u| = " + short_num(ua) +
                          " against scale " + short_num(us));
  if (ub > thr)
    throw HypothesisError("reference solution does not vanish at x = " +
                          short_num(tu.b()) + ": |u| = " + short_num(ub) +
                          " against scale " + short_num(us));
}

void or_singular(const PiecewiseFunction& f, bool& sa, bool& sb) {
  sa = sa || f.singular_a();
  sb = sb || f.singular_b();
}

}  // namespace

Verdict classify(double value, double err) {
  if (!std::isfinite(value) || !std::isfinite(err))
    return Verdict::Inconclusive;
  if (value + err < 0.0) return Verdict::StrictlyNegative;
  if (value - err > 0.0) return Verdict::Positive;
  return Verdict::WeakNonpositive;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::StrictlyNegative: return "strictly-negative";
    case Verdict::WeakNonpositive: return "weak-nonpositive";
    case Verdict::Positive: return "positive";
    case Verdict::Inconclusive: break;
  }
  return "inconclusive";
}

ComparisonProblem::ComparisonProblem(CoeffPtr tilde_set, CoeffPtr target_set,
                                     GaugeFunction F_, GaugeFunction G_)
    : tilde(std::move(tilde_set)),
      target(std::move(target_set)),
      F(std::move(F_)),
      G(std::move(G_)) {
  if (!tilde || !target)
    throw InputError("comparison problem needs both coefficient sets");
  if (tilde->a() != target->a() || tilde->b() != target->b())
    throw InputError("reference and target sets live on different intervals");
  if (F.zero())
    F = GaugeFunction::zero_gauge(tilde->a(), tilde->b());
  else if (F.derivative_function().a() != tilde->a() ||
           F.derivative_function().b() != tilde->b())
    throw InputError("gauge F is defined on the wrong interval");
  if (G.zero())
    G = GaugeFunction::zero_gauge(tilde->a(), tilde->b());
  else if (G.derivative_function().a() != tilde->a() ||
           G.derivative_function().b() != tilde->b())
    throw InputError("gauge G is defined on the wrong interval");
}

AbcCoefficients abc_coefficients(const ComparisonProblem& prob) {
  CoeffPtr tl = prob.tilde;
  CoeffPtr tg = prob.target;
  GaugeFunction F = prob.F, G = prob.G;

  AbcCoefficients out;
  out.breakpoints = merge_breakpoints(
      {&tl->breakpoints(), &tg->breakpoints(),
       &F.derivative_function().breakpoints(),
       &G.derivative_function().breakpoints()},
      tl->a(), tl->b());
  for (const PiecewiseFunction* f :
       {&tl->p(), &tl->q(), &tl->r(), &tl->s(), &tg->p(), &tg->q(), &tg->r(),
        &tg->s(), &F.derivative_function(), &G.derivative_function()})
    or_singular(*f, out.singular_a, out.singular_b);

  // w1 = e^{2F+S-R} (target antiderivatives), w2 = e^G, fs = f + s - s~.
  auto weights = [tl, tg, F, G](double x, double& w1, double& w2,
                                double& fs) {
    w1 = std::exp(2.0 * F(x) + tg->S(x) - tg->R(x));
    w2 = std::exp(G(x));
    fs = F.derivative(x) + tg->s()(x) - tl->s()(x);
  };
  out.A = [tl, tg, weights](double x) {
    double w1, w2, fs;
    weights(x, w1, w2, fs);
    return tg->p()(x) * w1 - tl->p()(x) * w2;
  };
  out.B = [tl, tg, G, weights](double x) {
    double w1, w2, fs;
    weights(x, w1, w2, fs);
    double gd = G.derivative(x) + tl->r()(x) - tl->s()(x);
    return 2.0 * tg->p()(x) * fs * w1 - tl->p()(x) * gd * w2;
  };
  out.C = [tl, tg, weights](double x) {
    double w1, w2, fs;
    weights(x, w1, w2, fs);
    return (tg->q()(x) + tg->p()(x) * fs * fs) * w1 - tl->q()(x) * w2;
  };

  // The certificate integrand is bounded by (A/p~^2) v~^2, (B/p~) v~ u~
  // and C u~^2 with v~, u~ bounded, so these three ratios being
  // integrable is what makes the certificate quadrature meaningful.
  QuadOptions qo;
  qo.abs_tol = 1e-6;
  qo.rel_tol = 1e-6;
  qo.breakpoints = out.breakpoints;
  qo.singular_a = out.singular_a;
  qo.singular_b = out.singular_b;
  struct Probe {
    const char* name;
    std::function<double(double)> f;
  };
  const Probe probes[] = {
      {"A/p~^2", [tl, &out](double x) {
         double pt = tl->p()(x);
         return std::fabs(out.A(x)) / (pt * pt);
       }},
      {"B/p~", [tl, &out](double x) {
         return std::fabs(out.B(x)) / tl->p()(x);
       }},
      {"C", [&out](double x) { return std::fabs(out.C(x)); }},
  };
  for (const Probe& pr : probes) {
    try {
      integrate(pr.f, tl->a(), tl->b(), qo);
    } catch (const NonConvergentIntegral& e) {
      throw HypothesisError(std::string("certificate coefficient ") +
                            pr.name + " failed its integrability probe: " +
                            e.what());
    }
  }
  return out;
}

double quadratic_form(const CoefficientSet& c, const Solution& phi,
                      double tol) {
  if (phi.trivial()) throw HypothesisError("test function is trivial");
  if (phi.a() != c.a() || phi.b() != c.b())
    throw InputError("test function and coefficients on different intervals");
  double us, vs;
  solution_scales(phi, us, vs);
  double thr = std::max(tol, 16.0 * kEps) * us;
  if (std::fabs(phi.u(c.a())) > thr || std::fabs(phi.u(c.b())) > thr)
    throw HypothesisError("test function does not vanish at both endpoints");

  const CoefficientSet& d = *phi.coefficients();
  auto integrand = [&](double x) {
    QuasiState st = phi.state(x);
    // phi' + s phi through phi's own quasi-derivative: phi' = v/p_d - s_d phi.
    double quasi = st.v / d.p()(x) + (c.s()(x) - d.s()(x)) * st.u;
    double w = std::exp(c.S(x) - c.R(x));
    return w * (c.p()(x) * quasi * quasi + c.q()(x) * st.u * st.u);
  };
  QuadOptions qo;
  qo.abs_tol = tol;
  qo.rel_tol = 1e-12;
  qo.breakpoints = merge_breakpoints(
      {&c.breakpoints(), &d.breakpoints(), &phi.mesh()}, c.a(), c.b());
  bool sa = false, sb = false;
  for (const PiecewiseFunction* f : {&c.p(), &c.q(), &c.r(), &c.s()})
    or_singular(*f, sa, sb);
  qo.singular_a = sa;
  qo.singular_b = sb;
  return integrate(integrand, c.a(), c.b(), qo).value;
}

double quadratic_form(const CoefficientSet& c,
                      const std::function<double(double)>& phi,
                      const std::function<double(double)>& dphi,
                      const std::vector<double>& phi_breakpoints,
                      double tol) {
  double a = c.a(), b = c.b();
  double scale = 0.0;
  for (int i = 0; i <= 128; ++i)
    scale = std::max(scale, std::fabs(phi(a + (b - a) * i / 128.0)));
  if (scale == 0.0) throw HypothesisError("test function is trivial");
  double thr = std::max(tol, 16.0 * kEps) * scale;
  if (std::fabs(phi(a)) > thr || std::fabs(phi(b)) > thr)
    throw HypothesisError("test function does not vanish at both endpoints");

  auto integrand = [&](double x) {
    double t = phi(x);
    double quasi = dphi(x) + c.s()(x) * t;
    double w = std::exp(c.S(x) - c.R(x));
    return w * (c.p()(x) * quasi * quasi + c.q()(x) * t * t);
  };
  QuadOptions qo;
  qo.abs_tol = tol;
  qo.rel_tol = 1e-12;
  qo.breakpoints =
      merge_breakpoints({&c.breakpoints(), &phi_breakpoints}, a, b);
  bool sa = false, sb = false;
  for (const PiecewiseFunction* f : {&c.p(), &c.q(), &c.r(), &c.s()})
    or_singular(*f, sa, sb);
  qo.singular_a = sa;
  qo.singular_b = sb;
  return integrate(integrand, a, b, qo).value;
}

Certificate evaluate_con(const ComparisonProblem& prob,
                         const Solution& tilde_u, double tol) {
  check_reference_solution(prob.tilde, tilde_u, tol);
  AbcCoefficients abc = abc_coefficients(prob);

  CoeffPtr tl = prob.tilde;
  QuadOptions qo;
  qo.abs_tol = tol / 3.0;
  qo.rel_tol = 1e-12;
  qo.breakpoints = merge_breakpoints({&abc.breakpoints, &tilde_u.mesh()},
                                     tl->a(), tl->b());
  qo.singular_a = abc.singular_a;
  qo.singular_b = abc.singular_b;

  // u~' + s~ u~ is always evaluated as v~/p~.
  auto wq = [&](double x) { return tilde_u.v(x) / tl->p()(x); };

  QuadResult ia = integrate(
      [&](double x) {
        double w = wq(x);
        return abc.A(x) * w * w;
      },
      tl->a(), tl->b(), qo);
  QuadResult ib = integrate(
      [&](double x) { return abc.B(x) * wq(x) * tilde_u.u(x); }, tl->a(),
      tl->b(), qo);
  QuadResult ic = integrate(
      [&](double x) {
        double t = tilde_u.u(x);
        return abc.C(x) * t * t;
      },
      tl->a(), tl->b(), qo);

  Certificate cert;
  cert.part[0] = ia.value;
  cert.part[1] = ib.value;
  cert.part[2] = ic.value;
  cert.part_err[0] = ia.err;
  cert.part_err[1] = ib.err;
  cert.part_err[2] = ic.err;
  cert.value = ia.value + ib.value + ic.value;
  cert.err = ia.err + ib.err + ic.err;
  cert.verdict = classify(cert.value, cert.err);
  return cert;
}

double gauge_identity_residual(const CoefficientSet& tilde,
                               const Solution& tilde_u,
                               const GaugeFunction& G, double tol) {
  if (tilde_u.coefficients().get() != &tilde)
    throw InputError(
        "reference solution was not produced from the reference "
        "coefficient set");
  if (tilde_u.trivial())
    throw HypothesisError("reference solution is trivial");
  GaugeFunction g = G;
  if (g.zero()) g = GaugeFunction::zero_gauge(tilde.a(), tilde.b());
  double us, vs;
  solution_scales(tilde_u, us, vs);
  double thr = std::max(tol, 16.0 * kEps) * us;
  if (std::fabs(tilde_u.u(tilde.a())) > thr ||
      std::fabs(tilde_u.u(tilde.b())) > thr)
    throw HypothesisError(
        "reference solution does not vanish at both endpoints");

  auto integrand = [&](double x) {
    QuasiState st = tilde_u.state(x);
    double pt = tilde.p()(x);
    double gd = g.derivative(x) + tilde.r()(x) - tilde.s()(x);
    return std::exp(g(x)) *
           (st.v * st.v / pt + gd * st.v * st.u + tilde.q()(x) * st.u * st.u);
  };
  QuadOptions qo;
  qo.abs_tol = tol;
  qo.rel_tol = 1e-12;
  qo.breakpoints = merge_breakpoints(
      {&tilde.breakpoints(), &g.derivative_function().breakpoints(),
       &tilde_u.mesh()},
      tilde.a(), tilde.b());
  bool sa = false, sb = false;
  for (const PiecewiseFunction* f :
       {&tilde.p(), &tilde.q(), &tilde.r(), &tilde.s(),
        &g.derivative_function()})
    or_singular(*f, sa, sb);
  qo.singular_a = sa;
  qo.singular_b = sb;
  return integrate(integrand, tilde.a(), tilde.b(), qo).value;
}

namespace {

// Relative integral-form defect of w = u~ e^F as a candidate solution of
// the target equation, mirroring solution_residual.  Small defect means
// the exceptional case of the weak verdict: u~ e^F solves the target.
double gauge_multiple_defect(const ComparisonProblem& prob,
                             const Solution& tu) {
  CoeffPtr tl = prob.tilde;
  CoeffPtr tg = prob.target;
  const GaugeFunction& F = prob.F;
  double a = tl->a(), b = tl->b();

  auto wpair = [&](double x, double& w, double& wv) {
    QuasiState st = tu.state(x);
    double ef = std::exp(F(x));
    double fs = F.derivative(x) + tg->s()(x) - tl->s()(x);
    w = ef * st.u;
    wv = tg->p()(x) * ef * (st.v / tl->p()(x) + fs * st.u);
  };

  double sw = 0.0, swv = 0.0;
  std::vector<double> pts = tu.sample_points();
  for (int i = 0; i <= 32; ++i) pts.push_back(a + (b - a) * i / 32.0);
  for (double x : pts) {
    double w, wv;
    wpair(x, w, wv);
    sw = std::max(sw, std::fabs(w));
    swv = std::max(swv, std::fabs(wv));
  }
  if (sw == 0.0) sw = 1.0;
  if (swv == 0.0) swv = 1.0;

  QuadOptions qo;
  qo.abs_tol = 1e-13 * std::max(sw, swv);
  qo.rel_tol = 1e-11;
  qo.breakpoints = merge_breakpoints(
      {&tl->breakpoints(), &tg->breakpoints(),
       &F.derivative_function().breakpoints(), &tu.mesh()},
      a, b);

  const int cells = 6;
  double worst = 0.0;
  double step = (b - a) / cells;
  for (int i = 0; i < cells; ++i) {
    double x1 = a + (i + 0.15) * step;
    double x2 = a + (i + 0.85) * step;
    double w1, wv1, w2, wv2;
    wpair(x1, w1, wv1);
    wpair(x2, w2, wv2);
    QuadResult iu = integrate(
        [&](double x) {
          double w, wv;
          wpair(x, w, wv);
          return -tg->s()(x) * w + wv / tg->p()(x);
        },
        x1, x2, qo);
    QuadResult iv = integrate(
        [&](double x) {
          double w, wv;
          wpair(x, w, wv);
          return tg->q()(x) * w + tg->r()(x) * wv;
        },
        x1, x2, qo);
    worst = std::max(worst, std::fabs(w2 - w1 - iu.value) / sw);
    worst = std::max(worst, std::fabs(wv2 - wv1 - iv.value) / swv);
  }
  return worst;
}

}  // namespace

Report compare(const ComparisonProblem& prob, const Solution& tilde_u,
               int sweep_n, double tol, RunPolicy policy) {
  Report rep;
  rep.certificate = evaluate_con(prob, tilde_u, tol);
  rep.gauge_residual =
      gauge_identity_residual(*prob.tilde, tilde_u, prob.G, tol);

  double ref = 1.0;
  for (double p : rep.certificate.part) ref += std::fabs(p);
  double gthr = std::max(10.0 * tol, 1e-9 * ref);
  if (std::fabs(rep.gauge_residual) > gthr) {
    rep.consistent = false;
    rep.notes.push_back("gauge identity residual " +
                        short_num(rep.gauge_residual) +
                        " exceeds its tolerance " + short_num(gthr));
  }

  double a = prob.tilde->a(), b = prob.tilde->b();
  if (sweep_n > 0) {
    try {
      std::vector<Solution> sols =
          theta_sweep(prob.target, a, sweep_n, {}, policy);
      rep.sweep.n = sweep_n;
      double ztol = std::max(1e-12, 1e-10 * (b - a));
      bool first = true;
      for (int j = 0; j < sweep_n; ++j) {
        ZeroList zs = find_zeros(sols[j], a, b, ztol);
        int k = (int)zs.size();
        if (first || k < rep.sweep.min_zeros) rep.sweep.min_zeros = k;
        if (first || k > rep.sweep.max_zeros) rep.sweep.max_zeros = k;
        first = false;
        if (k == 0) {
          ++rep.sweep.zero_free;
          rep.sweep.zero_free_thetas.push_back(j * std::numbers::pi /
                                               sweep_n);
        }
      }
      rep.sweep_ran = true;
    } catch (const InputError& e) {
      rep.notes.push_back(std::string("theta sweep skipped: ") + e.what());
    }
  }

  switch (rep.certificate.verdict) {
    case Verdict::StrictlyNegative:
      if (rep.sweep_ran) {
        if (rep.sweep.zero_free > 0) {
          rep.consistent = false;
          rep.notes.push_back(
              "certificate is strictly negative but " +
              std::to_string(rep.sweep.zero_free) + " of " +
              std::to_string(rep.sweep.n) +
              " sampled solutions have no zero inside the interval");
        } else {
          rep.notes.push_back("all " + std::to_string(rep.sweep.n) +
                              " sampled target solutions vanish inside the "
                              "interval");
        }
      }
      break;
    case Verdict::WeakNonpositive: {
      rep.multiple_defect = gauge_multiple_defect(prob, tilde_u);
      rep.exceptional_multiple = rep.multiple_defect <= 1e-6;
      if (rep.exceptional_multiple)
        rep.notes.push_back(
            "weak case: the gauged reference solution solves the target "
            "equation (defect " + short_num(rep.multiple_defect) + ")");
      else
        rep.notes.push_back(
            "weak case: the gauged reference solution is not a target "
            "solution (defect " + short_num(rep.multiple_defect) +
            "), so every target solution still vanishes somewhere in the "
            "closed interval");
      break;
    }
    case Verdict::Positive:
      if (rep.sweep_ran && rep.sweep.zero_free > 0)
        rep.notes.push_back(
            "certificate is positive and the sweep found " +
            std::to_string(rep.sweep.zero_free) +
            " solutions with no interior zero");
      break;
    case Verdict::Inconclusive:
      rep.consistent = false;
      rep.notes.push_back("certificate evaluation was not finite");
      break;
  }
  return rep;
}

namespace {

struct CellPair {
  double lo, hi;
  const CoefficientSet::Segment* tl;
  const CoefficientSet::Segment* tg;
};

const CoefficientSet::Segment* segment_at(const CoefficientSet& c,
                                          double x) {
  for (const auto& seg : c.segments())
    if (x >= seg.lo && x <= seg.hi) return &seg;
  return &c.segments().back();
}

std::vector<CellPair> merged_cells(const CoefficientSet& tl,
                                   const CoefficientSet& tg) {
  std::vector<double> nodes =
      merge_breakpoints({&tl.breakpoints(), &tg.breakpoints()}, tl.a(),
                        tl.b());
  nodes.insert(nodes.begin(), tl.a());
  nodes.push_back(tl.b());
  std::vector<CellPair> cells;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double mid = 0.5 * (nodes[i] + nodes[i + 1]);
    cells.push_back({nodes[i], nodes[i + 1], segment_at(tl, mid),
                     segment_at(tg, mid)});
  }
  return cells;
}

}  // namespace

Report sturm_picone(CoeffPtr tilde, CoeffPtr target, const Solution& tilde_u,
                    double tol, int sweep_n, RunPolicy policy) {
  if (!tilde || !target)
    throw InputError("comparison needs both coefficient sets");
  if (tilde->a() != target->a() || tilde->b() != target->b())
    throw InputError("reference and target sets live on different intervals");
  const int ns = 48;

  for (const auto* c : {tilde.get(), target.get()}) {
    const char* which = c == tilde.get() ? "reference" : "target";
    for (const auto& seg : c->segments())
      for (int i = 0; i <= ns; ++i) {
        double x = seg.lo + (seg.hi - seg.lo) * i / ns;
        double d = std::fabs(seg.r(x) - seg.s(x));
        if (d > tol)
          throw HypothesisError(std::string("monotone-weight comparison "
                                            "needs r = s in the ") +
                                which + " set; |r - s| = " + short_num(d) +
                                " at x = " + short_num(x));
      }
  }

  std::vector<CellPair> cells = merged_cells(*tilde, *target);
  for (const CellPair& cp : cells)
    for (int i = 0; i <= ns; ++i) {
      double x = cp.lo + (cp.hi - cp.lo) * i / ns;
      double pt = cp.tg->p(x), ptl = cp.tl->p(x);
      if (pt > ptl + tol)
        throw HypothesisError("hypothesis 0 < p <= p~ fails at x = " +
                              short_num(x) + ": p = " + short_num(pt) +
                              ", p~ = " + short_num(ptl));
      double qt = cp.tg->q(x), qtl = cp.tl->q(x);
      if (qt > qtl + tol)
        throw HypothesisError("hypothesis q <= q~ fails at x = " +
                              short_num(x) + ": q = " + short_num(qt) +
                              ", q~ = " + short_num(qtl));
    }

  // mu = p~ (s - s~) e^{-2S} sampled one-sidedly on every cell; only
  // upward jumps are allowed at the cell joints.
  auto mu_on = [&](const CellPair& cp, double x) {
    return cp.tl->p(x) * (cp.tg->s(x) - cp.tl->s(x)) *
           std::exp(-2.0 * target->S(x));
  };
  {
    double prev = 0.0;
    bool have_prev = false;
    double prev_x = 0.0;
    for (const CellPair& cp : cells)
      for (int i = 0; i <= ns; ++i) {
        double x = cp.lo + (cp.hi - cp.lo) * i / ns;
        double m = mu_on(cp, x);
        if (have_prev && m < prev - tol)
          throw HypothesisError("weight mu decreases from " +
                                short_num(prev) + " at x = " +
                                short_num(prev_x) + " to " + short_num(m) +
                                " at x = " + short_num(x));
        prev = m;
        prev_x = x;
        have_prev = true;
      }
  }

  auto minus = [](const Expr& u, const Expr& w) { return u - w; };
  auto minus2 = [](const Expr& u, const Expr& w) {
    return Expr::number(2.0) * (u - w);
  };
  GaugeFunction F(combine(tilde->s(), target->s(), minus), 0.0);
  GaugeFunction G(combine(tilde->s(), target->s(), minus2), 0.0);
  ComparisonProblem prob(tilde, target, F, G);
  Report rep = compare(prob, tilde_u, sweep_n, tol, policy);

  // Independent route for the middle part: -int w~^2 dmu with
  // w~ = u~ e^{S~}, by midpoint Stieltjes sums with Richardson
  // extrapolation per cell plus the exact jump terms at the joints.
  auto w2 = [&](double x) {
    double t = tilde_u.u(x) * std::exp(tilde->S(x));
    return t * t;
  };
  double total = 0.0, rs_err = 0.0;
  double cell_tol = std::max(tol, 1e-13) / (2.0 * cells.size());
  for (const CellPair& cp : cells) {
    auto rs_sum = [&](int n) {
      double h = (cp.hi - cp.lo) / n;
      double sum = 0.0, prev_mu = mu_on(cp, cp.lo);
      for (int j = 1; j <= n; ++j) {
        double x = j == n ? cp.hi : cp.lo + j * h;
        double m = mu_on(cp, x);
        sum += w2(cp.lo + (j - 0.5) * h) * (m - prev_mu);
        prev_mu = m;
      }
      return sum;
    };
    int n = 128;
    double prev = rs_sum(n), cur = rs_sum(2 * n);
    while (std::fabs(cur - prev) / 3.0 > cell_tol && n < (1 << 16)) {
      n *= 2;
      prev = cur;
      cur = rs_sum(2 * n);
    }
    total += cur + (cur - prev) / 3.0;
    rs_err += std::fabs(cur - prev) / 3.0;
  }
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    double x = cells[i].hi;
    double jump = mu_on(cells[i + 1], x) - mu_on(cells[i], x);
    total += w2(x) * jump;
  }
  double stieltjes = -total;

  double diff = std::fabs(rep.certificate.part[1] - stieltjes);
  double thr = tol + rep.certificate.part_err[1] + rs_err +
               1e-9 * std::fabs(stieltjes);
  if (diff > thr) {
    rep.consistent = false;
    rep.notes.push_back("middle certificate part " +
                        g17(rep.certificate.part[1]) +
                        " disagrees with the Stieltjes route " +
                        g17(stieltjes));
  } else {
    rep.notes.push_back("middle certificate part matches the Stieltjes "
                        "route -int w~^2 dmu = " + g17(stieltjes) +
                        " within " + short_num(thr));
  }
  return rep;
}

Report separation(CoeffPtr c, const Solution& tilde_u, const Solution& u,
                  double tol) {
  if (!c) throw InputError("separation needs a coefficient set");
  if (u.coefficients().get() != c.get())
    throw InputError("second solution was not produced from the same "
                     "coefficient set");
  if (u.trivial()) throw HypothesisError("second solution is trivial");
  double defect = solution_residual(u);
  if (!(defect <= 1e-6))
    throw HypothesisError("second solution fails its residual check "
                          "(relative defect " + short_num(defect) + ")");

  auto minus = [](const Expr& lhs, const Expr& rhs) { return lhs - rhs; };
  GaugeFunction G(combine(c->s(), c->r(), minus), 0.0);
  ComparisonProblem prob(c, c, GaugeFunction::zero_gauge(c->a(), c->b()), G);
  Report rep = compare(prob, tilde_u, 0, tol, RunPolicy::Serial);

  // Dependence test via the conserved weighted Wronskian.
  double us1, vs1, us2, vs2;
  solution_scales(tilde_u, us1, vs1);
  solution_scales(u, us2, vs2);
  double s1 = std::max(us1, vs1), s2 = std::max(us2, vs2);
  double dep = 0.0;
  for (int i = 0; i <= 8; ++i) {
    double x = c->a() + (c->b() - c->a()) * i / 8.0;
    QuasiState a1 = tilde_u.state(x), a2 = u.state(x);
    double w = a1.u * a2.v - a2.u * a1.v;
    dep = std::max(dep, std::fabs(w * std::exp(c->S(x) - c->R(x))));
  }
  bool dependent = dep <= std::max(1e-9, 10.0 * tol) * s1 * s2;
  rep.exceptional_multiple = dependent;
  rep.multiple_defect = dep / (s1 * s2);
  if (dependent) {
    rep.notes.push_back("solutions are dependent: weighted Wronskian " +
                        short_num(dep) + " against scale " +
                        short_num(s1 * s2));
  } else {
    ZeroList zs =
        find_zeros(u, c->a(), c->b(), 1e-10 * (c->b() - c->a()));
    if (zs.empty()) {
      rep.consistent = false;
      rep.notes.push_back(
          "independent second solution has no zero inside the interval");
    } else {
      rep.notes.push_back("independent second solution vanishes at x = " +
                          g17(zs.front().x) + " (" +
                          std::to_string(zs.size()) + " zeros found)");
    }
  }
  return rep;
}

std::string render_table(const Report& rep) {
  const Certificate& c = rep.certificate;
  std::string out;
  out += "certificate  " + g17(c.value) + " +/- " + g17(c.err) + "\n";
  out += "verdict      " + std::string(verdict_name(c.verdict)) + "\n";
  const char* part_names[3] = {"part A", "part B", "part C"};
  for (int i = 0; i < 3; ++i)
    out += "  " + std::string(part_names[i]) + "     " + g17(c.part[i]) +
           " +/- " + g17(c.part_err[i]) + "\n";
  out += "gauge check  " + g17(rep.gauge_residual) + "\n";
  if (rep.sweep_ran) {
    out += "sweep        " + std::to_string(rep.sweep.n) +
           " directions, zeros per solution " +
           std::to_string(rep.sweep.min_zeros) + ".." +
           std::to_string(rep.sweep.max_zeros) + ", zero-free " +
           std::to_string(rep.sweep.zero_free) + "\n";
    if (!rep.sweep.zero_free_thetas.empty()) {
      out += "  zero-free theta:";
      std::size_t shown = std::min<std::size_t>(
          rep.sweep.zero_free_thetas.size(), 8);
      for (std::size_t i = 0; i < shown; ++i)
        out += " " + short_num(rep.sweep.zero_free_thetas[i]);
      if (shown < rep.sweep.zero_free_thetas.size()) out += " ...";
      out += "\n";
    }
  }
  out += "multiple     ";
  out += rep.exceptional_multiple ? "yes" : "no";
  out += " (defect " + short_num(rep.multiple_defect) + ")\n";
  out += "consistent   ";
  out += rep.consistent ? "yes" : "no";
  out += "\n";
  for (const std::string& n : rep.notes) out += "note         " + n + "\n";
  return out;
}

std::string render_csv_header() {
  return "value,err,verdict,part_a,err_a,part_b,err_b,part_c,err_c,"
         "gauge_residual,sweep_n,zero_free,min_zeros,max_zeros,"
         "exceptional_multiple,consistent";
}

std::string render_csv(const Report& rep) {
  const Certificate& c = rep.certificate;
  std::string out = g17(c.value) + "," + g17(c.err) + "," +
                    verdict_name(c.verdict);
  for (int i = 0; i < 3; ++i)
    out += "," + g17(c.part[i]) + "," + g17(c.part_err[i]);
  out += "," + g17(rep.gauge_residual);
  out += "," + std::to_string(rep.sweep.n);
  out += "," + std::to_string(rep.sweep.zero_free);
  out += "," + std::to_string(rep.sweep.min_zeros);
  out += "," + std::to_string(rep.sweep.max_zeros);
  out += rep.exceptional_multiple ? ",1" : ",0";
  out += rep.consistent ? ",1" : ",0";
  return out;
}

}  // namespace oscert

#include "oscert/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <string>

#include "oscert/errors.hpp"

namespace oscert {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// cosh(sqrt(z2)) and sinh(sqrt(z2))/sqrt(z2), continued to z2 < 0 where
// they become cos and sinc.  Series near zero keeps full precision and
// makes nilpotent segments (z2 == 0) exact: C = 1, S = 1.
void cosh_sinhc(double z2, double& C, double& S) {
  if (std::fabs(z2) < 1e-4) {
    C = 1.0 + z2 * (0.5 + z2 * (1.0 / 24.0 + z2 / 720.0));
    S = 1.0 + z2 * (1.0 / 6.0 + z2 * (1.0 / 120.0 + z2 / 5040.0));
  } else if (z2 > 0.0) {
    double z = std::sqrt(z2);
    C = std::cosh(z);
    S = std::sinh(z) / z;
  } else {
    double z = std::sqrt(-z2);
    C = std::cos(z);
    S = std::sin(z) / z;
  }
}

// exp(M t) (u0, v0) for M = [[-s, 1/p], [q, r]] with constant entries.
void expm_apply(double sv, double pinv, double qv, double rv, double t,
                double u0, double v0, double& u, double& v) {
  double alpha = 0.5 * (rv - sv);
  double n00 = -sv - alpha;  // trace-free part N = M - alpha I
  double d2 = n00 * n00 + qv * pinv;  // N^2 = d2 I
  double C, S;
  cosh_sinhc(d2 * t * t, C, S);
  double tS = t * S;
  double ea = std::exp(alpha * t);
  u = ea * ((C + tS * n00) * u0 + tS * pinv * v0);
  v = ea * (tS * qv * u0 + (C - tS * n00) * v0);
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                 c5 = 8.0 / 9.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                 e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

struct SegmentRhs {
  const CoefficientSet::Segment* seg;
  void operator()(double x, const double y[2], double dy[2]) const {
    double pv = seg->p(x);
    double sv = seg->s(x);
    double qv = seg->q(x);
    double rv = seg->r(x);
    dy[0] = -sv * y[0] + y[1] / pv;
    dy[1] = qv * y[0] + rv * y[1];
  }
};

double error_norm(const double e[2], const double y0[2], const double y1[2],
                  double tol) {
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    double sc = tol + tol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
    double q = e[i] / sc;
    sum += q * q;
  }
  return std::sqrt(0.5 * sum);
}

double initial_step(const SegmentRhs& rhs, double x, const double y[2],
                    const double f0[2], double dir, double span, double tol) {
  double sc[2], d0 = 0.0, d1 = 0.0;
  for (int i = 0; i < 2; ++i) {
    sc[i] = tol + tol * std::fabs(y[i]);
    d0 += (y[i] / sc[i]) * (y[i] / sc[i]);
    d1 += (f0[i] / sc[i]) * (f0[i] / sc[i]);
  }
  d0 = std::sqrt(0.5 * d0);
  d1 = std::sqrt(0.5 * d1);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span
                                       : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  double y1[2] = {y[0] + dir * h0 * f0[0], y[1] + dir * h0 * f0[1]};
  double f1[2];
  rhs(x + dir * h0, y1, f1);
  double d2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    double q = (f1[i] - f0[i]) / sc[i];
    d2 += q * q;
  }
  d2 = std::sqrt(0.5 * d2) / h0;
  double dmax = std::max(d1, d2);
  double h1 = dmax > 1e-15 ? std::pow(0.01 / dmax, 0.2) : h0 * 100.0;
  return std::min({100.0 * h0, h1, span});
}

}  // namespace

void Solution::StepRec::eval(double x, double& u, double& v) const {
  if (exact) {
    expm_apply(sv, pinv, qv, rv, x - xa, ua, va, u, v);
    return;
  }
  double th = (x - xa) / h;
  double th1 = 1.0 - th;
  u = rc[0][0] + th * (rc[0][1] + th1 * (rc[0][2] + th * (rc[0][3] + th1 * rc[0][4])));
  v = rc[1][0] + th * (rc[1][1] + th1 * (rc[1][2] + th * (rc[1][3] + th1 * rc[1][4])));
}

const Solution::StepRec& Solution::record_at(double x) const {
  // Last record whose lower end is <= x.
  std::size_t lo = 0, hi = recs_.size();
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (recs_[mid].lo <= x)
      lo = mid;
    else
      hi = mid;
  }
  return recs_[lo];
}

double Solution::a() const { return coeffs_->a(); }
double Solution::b() const { return coeffs_->b(); }

QuasiState Solution::state(double x) const {
  // Grid arithmetic like a + (b - a) * t may overshoot an endpoint by a
  // rounding error; snap those queries instead of rejecting them.
  double slack = 4.0 * std::numeric_limits<double>::epsilon() *
                 std::max({1.0, std::fabs(a()), std::fabs(b())});
  if (x < a() && x >= a() - slack) x = a();
  if (x > b() && x <= b() + slack) x = b();
  if (!(x >= a() && x <= b()))
    throw InputError("solution evaluated outside [" + std::to_string(a()) +
                     ", " + std::to_string(b()) + "]");
  if (trivial_) return {x, 0.0, 0.0};
  QuasiState st;
  st.x = x;
  record_at(x).eval(x, st.u, st.v);
  return st;
}

double Solution::u(double x) const { return state(x).u; }
double Solution::v(double x) const { return state(x).v; }

std::vector<double> Solution::sample_points() const {
  std::vector<double> pts = mesh_;
  for (const StepRec& rec : recs_) {
    if (!rec.exact) continue;
    double alpha = 0.5 * (rec.rv - rec.sv);
    double n00 = -rec.sv - alpha;
    double d2 = n00 * n00 + rec.qv * rec.pinv;
    if (!(d2 < 0.0)) continue;
    double omega = std::sqrt(-d2);
    double span = rec.hi - rec.lo;
    // Less than a quarter turn between consecutive samples.
    double need = span * omega / (0.25 * std::numbers::pi);
    if (need * 8.0 > 4e7)
      throw NumericsError("constant segment spans " +
                          std::to_string(span * omega / std::numbers::pi) +
                          " half-turns; too many zeros to enumerate");
    int n = (int)need + 2;
    for (int i = 1; i < n; ++i)
      pts.push_back(rec.lo + span * i / n);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

namespace {

// Integrate one direction from (x_from, y) to x_to, appending records and
// mesh nodes; returns the state at x_to.
void sweep(const CoefficientSet& c, double x_from, double x_to, double y[2],
           const SolveOptions& opt, std::vector<Solution::StepRec>& recs,
           std::vector<double>& mesh, int& steps_used) {
  double dir = x_to > x_from ? 1.0 : -1.0;
  const auto& segs = c.segments();
  // Visit segments in sweep order.
  int n = (int)segs.size();
  for (int idx = dir > 0 ? 0 : n - 1; idx >= 0 && idx < n; idx += (int)dir) {
    const auto& seg = segs[idx];
    double s_lo = std::max(seg.lo, std::min(x_from, x_to));
    double s_hi = std::min(seg.hi, std::max(x_from, x_to));
    if (!(s_lo < s_hi)) continue;
    double xs = dir > 0 ? s_lo : s_hi;
    double xe = dir > 0 ? s_hi : s_lo;

    if (seg.constant) {
      Solution::StepRec rec;
      rec.xa = xs;
      rec.h = xe - xs;
      rec.ua = y[0];
      rec.va = y[1];
      rec.exact = true;
      rec.sv = seg.sv;
      rec.pinv = 1.0 / seg.pv;
      rec.qv = seg.qv;
      rec.rv = seg.rv;
      rec.lo = std::min(xs, xe);
      rec.hi = std::max(xs, xe);
      expm_apply(rec.sv, rec.pinv, rec.qv, rec.rv, rec.h, y[0], y[1], y[0],
                 y[1]);
      recs.push_back(rec);
      mesh.push_back(xe);
      continue;
    }

    SegmentRhs rhs{&seg};
    double x = xs;
    double f0[2];
    rhs(x, y, f0);
    double span = std::fabs(xe - xs);
    double h = dir * initial_step(rhs, x, y, f0, dir, span, opt.tol);
    bool last = false;
    while (!last) {
      if (++steps_used > opt.max_steps)
        throw NumericsError("solver exceeded the step budget near x = " +
                            std::to_string(x));
      if (std::fabs(h) < 4.0 * kEps * std::max(std::fabs(x), 1.0))
        throw NumericsError("solver step size underflow near x = " +
                            std::to_string(x));
      if ((dir > 0 && x + h >= xe) || (dir < 0 && x + h <= xe)) {
        h = xe - x;
        last = true;
      }
      double k1[2] = {f0[0], f0[1]};
      double yt[2], k2[2], k3[2], k4[2], k5[2], k6[2], k7[2], y1[2];
      for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * a21 * k1[i];
      rhs(x + c2 * h, yt, k2);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      rhs(x + c3 * h, yt, k3);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      rhs(x + c4 * h, yt, k4);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                            a54 * k4[i]);
      rhs(x + c5 * h, yt, k5);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
      rhs(x + h, yt, k6);
      for (int i = 0; i < 2; ++i)
        y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                            b5 * k5[i] + b6 * k6[i]);
      rhs(x + h, y1, k7);
      double e[2];
      for (int i = 0; i < 2; ++i)
        e[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                    e6 * k6[i] + e7 * k7[i]);
      double err = error_norm(e, y, y1, opt.tol);
      if (err <= 1.0) {
        Solution::StepRec rec;
        rec.xa = x;
        rec.h = h;
        rec.ua = y[0];
        rec.va = y[1];
        rec.exact = false;
        rec.sv = rec.pinv = rec.qv = rec.rv = 0.0;
        rec.lo = std::min(x, x + h);
        rec.hi = std::max(x, x + h);
        for (int i = 0; i < 2; ++i) {
          double ydiff = y1[i] - y[i];
          double bspl = h * k1[i] - ydiff;
          rec.rc[i][0] = y[i];
          rec.rc[i][1] = ydiff;
          rec.rc[i][2] = bspl;
          rec.rc[i][3] = ydiff - h * k7[i] - bspl;
          rec.rc[i][4] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                              d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        recs.push_back(rec);
        x += h;
        y[0] = y1[0];
        y[1] = y1[1];
        f0[0] = k7[0];
        f0[1] = k7[1];
        mesh.push_back(x);
        double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2),
                                0.2, 5.0);
        h *= fac;
      } else {
        last = false;
        double fac =
            std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
        h *= fac;
      }
    }
  }
}

}  // namespace

Solution solve_ivp(CoeffPtr coeffs, double x0, double A, double B,
                   const SolveOptions& opt) {
  if (!coeffs) throw InputError("solve_ivp: null coefficient set");
  const CoefficientSet& c = *coeffs;
  if (!(x0 >= c.a() && x0 <= c.b()))
    throw InputError("initial point " + std::to_string(x0) +
                     " outside [" + std::to_string(c.a()) + ", " +
                     std::to_string(c.b()) + "]");
  if (c.singular_a() || c.singular_b())
    throw InputError("coefficient set has a singular endpoint; the dense "
                     "sweep cannot cross it");
  if (A == 0.0 && B == 0.0 && !opt.allow_trivial)
    throw InputError("zero initial data gives the trivial solution "
                     "(set allow_trivial to permit it)");

  Solution sol;
  sol.coeffs_ = std::move(coeffs);
  sol.x0_ = x0;
  sol.u0_ = A;
  sol.v0_ = B;
  sol.tol_ = opt.tol;
  sol.trivial_ = A == 0.0 && B == 0.0;
  sol.mesh_.push_back(x0);
  if (sol.trivial_) {
    sol.mesh_ = {c.a(), x0, c.b()};
    std::sort(sol.mesh_.begin(), sol.mesh_.end());
    sol.mesh_.erase(std::unique(sol.mesh_.begin(), sol.mesh_.end()),
                    sol.mesh_.end());
    return sol;
  }

  int steps_used = 0;
  if (x0 < c.b()) {
    double y[2] = {A, B};
    sweep(c, x0, c.b(), y, opt, sol.recs_, sol.mesh_, steps_used);
  }
  if (x0 > c.a()) {
    double y[2] = {A, B};
    sweep(c, x0, c.a(), y, opt, sol.recs_, sol.mesh_, steps_used);
  }
  std::sort(sol.recs_.begin(), sol.recs_.end(),
            [](const Solution::StepRec& r1, const Solution::StepRec& r2) {
              return r1.lo < r2.lo;
            });
  std::sort(sol.mesh_.begin(), sol.mesh_.end());
  sol.mesh_.erase(std::unique(sol.mesh_.begin(), sol.mesh_.end()),
                  sol.mesh_.end());
  return sol;
}

namespace {

double wrap_angle(double t) {
  while (t > std::numbers::pi) t -= 2.0 * std::numbers::pi;
  while (t <= -std::numbers::pi) t += 2.0 * std::numbers::pi;
  return t;
}

}  // namespace

ZeroList find_zeros(const Solution& sol, double lo, double hi, double tol) {
  if (sol.trivial())
    throw InputError("zeros of the trivial solution are undefined");
  lo = std::max(lo, sol.a());
  hi = std::min(hi, sol.b());
  if (!(lo < hi)) return {};

  // Sample at mesh nodes, then refine until the phase proxy moves by less
  // than a quarter turn between neighbours.
  std::vector<double> xs{lo};
  for (double m : sol.sample_points())
    if (m > lo && m < hi) xs.push_back(m);
  xs.push_back(hi);

  // Scale making u and v comparable, from mesh magnitudes.
  std::vector<double> au, av;
  for (double x : xs) {
    QuasiState st = sol.state(x);
    au.push_back(std::fabs(st.u));
    av.push_back(std::fabs(st.v));
  }
  auto median = [](std::vector<double> w) {
    std::sort(w.begin(), w.end());
    return w[w.size() / 2];
  };
  double mu = median(au), mv = median(av);
  double scale = (mu > 0.0 && mv > 0.0) ? mv / mu : 1.0;

  auto phase = [&](double x) {
    QuasiState st = sol.state(x);
    return std::atan2(st.v / scale, st.u);
  };

  std::vector<double> refined;
  refined.push_back(xs[0]);
  // Depth-first refinement between consecutive samples.
  struct Span {
    double x1, x2, p1, p2;
    int depth;
  };
  std::vector<Span> work;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    work.push_back({xs[i], xs[i + 1], phase(xs[i]), phase(xs[i + 1]), 0});
  std::reverse(work.begin(), work.end());
  while (!work.empty()) {
    Span sp = work.back();
    work.pop_back();
    double gap = std::fabs(wrap_angle(sp.p2 - sp.p1));
    if (gap < 0.5 * std::numbers::pi || sp.depth >= 48 ||
        sp.x2 - sp.x1 < 16.0 * kEps * std::max(1.0, std::fabs(sp.x1))) {
      refined.push_back(sp.x2);
      continue;
    }
    double xm = 0.5 * (sp.x1 + sp.x2);
    double pm = phase(xm);
    work.push_back({xm, sp.x2, pm, sp.p2, sp.depth + 1});
    work.push_back({sp.x1, xm, sp.p1, pm, sp.depth + 1});
  }

  double span = hi - lo;
  double margin = std::max(tol, 1e-12 * span);
  double width_goal = std::max(tol, 4.0 * kEps);
  ZeroList zeros;
  auto push_zero = [&](double x, double halfwidth, double minv) {
    if (x - halfwidth <= lo + margin || x + halfwidth >= hi - margin) return;
    zeros.push_back({x, halfwidth, minv});
  };

  for (std::size_t i = 0; i + 1 < refined.size(); ++i) {
    double x1 = refined[i], x2 = refined[i + 1];
    QuasiState s1 = sol.state(x1);
    if (s1.u == 0.0) {
      push_zero(x1, 0.0, std::fabs(s1.v));
      continue;
    }
    QuasiState s2 = sol.state(x2);
    if (s2.u == 0.0) continue;  // handled as the next span's left end
    if (!(s1.u * s2.u < 0.0)) continue;
    double u1 = s1.u;
    int it = 0;
    while (x2 - x1 > width_goal && ++it < 200) {
      double xm = 0.5 * (x1 + x2);
      if (xm <= x1 || xm >= x2) break;
      QuasiState sm = sol.state(xm);
      if (sm.u == 0.0) {
        x1 = x2 = xm;
        break;
      }
      if (u1 * sm.u < 0.0)
        x2 = xm;
      else {
        x1 = xm;
        u1 = sm.u;
      }
    }
    // |v| over the final enclosure witnesses that the zero is simple.
    double minv = std::min(std::fabs(sol.v(x1)), std::fabs(sol.v(x2)));
    push_zero(0.5 * (x1 + x2), 0.5 * (x2 - x1), minv);
  }
  return zeros;
}

double wronskian_drift(const Solution& s1, const Solution& s2, int samples) {
  if (s1.coefficients().get() != s2.coefficients().get())
    throw InputError("wronskian_drift needs two solutions of the same "
                     "coefficient set");
  const CoefficientSet& c = *s1.coefficients();
  auto weighted = [&](double x) {
    QuasiState a = s1.state(x);
    QuasiState b = s2.state(x);
    return (a.u * b.v - b.u * a.v) * std::exp(c.S(x) - c.R(x));
  };
  double ref = weighted(c.a());
  double drift = 0.0;
  for (int i = 0; i < samples; ++i) {
    double x = c.a() + (c.b() - c.a()) * i / (samples - 1.0);
    drift = std::max(drift, std::fabs(weighted(x) - ref));
  }
  return drift;
}

double solution_residual(const Solution& sol, int probes) {
  const CoefficientSet& c = *sol.coefficients();
  double lo = c.a(), hi = c.b();
  double su = 0.0, sv = 0.0;
  std::vector<double> pts = sol.sample_points();
  for (int i = 0; i <= 32; ++i) pts.push_back(lo + (hi - lo) * i / 32.0);
  for (double x : pts) {
    QuasiState st = sol.state(x);
    su = std::max(su, std::fabs(st.u));
    sv = std::max(sv, std::fabs(st.v));
  }
  if (su == 0.0) su = 1.0;
  if (sv == 0.0) sv = 1.0;

  QuadOptions qo;
  qo.abs_tol = 1e-13 * std::max(su, sv);
  qo.rel_tol = 1e-11;
  // Panels should not straddle coefficient breakpoints or the joints of
  // the dense output.
  qo.breakpoints = c.breakpoints();
  for (double m : sol.mesh()) qo.breakpoints.push_back(m);
  double worst = 0.0;
  double step = (hi - lo) / probes;
  for (int i = 0; i < probes; ++i) {
    double x1 = lo + (i + 0.15) * step;
    double x2 = lo + (i + 0.85) * step;
    QuasiState st1 = sol.state(x1);
    QuasiState st2 = sol.state(x2);
    QuadResult iu = integrate(
        [&](double x) {
          QuasiState st = sol.state(x);
          return -c.s()(x) * st.u + st.v / c.p()(x);
        },
        x1, x2, qo);
    QuadResult iv = integrate(
        [&](double x) {
          QuasiState st = sol.state(x);
          return c.q()(x) * st.u + c.r()(x) * st.v;
        },
        x1, x2, qo);
    worst = std::max(worst, std::fabs(st2.u - st1.u - iu.value) / su);
    worst = std::max(worst, std::fabs(st2.v - st1.v - iv.value) / sv);
  }
  return worst;
}

void theta_state(double theta, double& u, double& v) {
  u = std::cos(theta);
  v = std::sin(theta);
  if (std::fabs(u) < 4.0 * kEps) u = 0.0;
  if (std::fabs(v) < 4.0 * kEps) v = 0.0;
}

std::vector<Solution> theta_sweep(CoeffPtr coeffs, double x0, int n,
                                  const SolveOptions& opt, RunPolicy policy) {
  if (n < 1) throw InputError("theta_sweep needs n >= 1");
  std::vector<Solution> out(n);
  std::exception_ptr first_error = nullptr;
  if (policy == RunPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < n; ++j) {
      try {
        double u, v;
        theta_state(j * std::numbers::pi / n, u, v);
        out[j] = solve_ivp(coeffs, x0, u, v, opt);
      } catch (...) {
#pragma omp critical
        if (!first_error) first_error = std::current_exception();
      }
    }
  } else {
    for (int j = 0; j < n; ++j) {
      try {
        double u, v;
        theta_state(j * std::numbers::pi / n, u, v);
        out[j] = solve_ivp(coeffs, x0, u, v, opt);
      } catch (...) {
        if (!first_error) first_error = std::current_exception();
        break;
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace oscert

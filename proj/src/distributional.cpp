#include "oscert/distributional.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "oscert/errors.hpp"
#include "oscert/quadrature.hpp"

namespace oscert {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

PiecewiseFunction split_at(const PiecewiseFunction& f,
                           const std::vector<double>& cuts) {
  std::vector<double> bks = f.breakpoints();
  std::vector<Expr> pieces = f.pieces();
  for (double t : cuts) {
    auto it = std::lower_bound(bks.begin(), bks.end(), t);
    if (it != bks.end() && *it == t) continue;
    std::size_t i = it - bks.begin();
    bks.insert(it, t);
    Expr copy = pieces[i];
    pieces.insert(pieces.begin() + i + 1, std::move(copy));
  }
  return PiecewiseFunction(f.a(), f.b(), std::move(bks), std::move(pieces),
                           f.singular_a(), f.singular_b());
}

}  // namespace

PotentialAntiderivative::PotentialAntiderivative(
    PiecewiseFunction V, std::vector<PotentialJump> jumps)
    : V_(std::move(V)), jumps_(std::move(jumps)) {
  std::sort(jumps_.begin(), jumps_.end(),
            [](const PotentialJump& x, const PotentialJump& y) {
              return x.at < y.at;
            });
  std::vector<double> cuts;
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    double t = jumps_[i].at;
    if (!(t > a() && t < b()))
      throw InputError("jump at x = " + num(t) +
                       " lies outside the open interval (" + num(a()) + ", " +
                       num(b()) + ")");
    if (i > 0 && t == jumps_[i - 1].at)
      throw InputError("duplicate jump at x = " + num(t));
    cuts.push_back(t);
  }
  V_ = split_at(V_, cuts);

  double delta = (b() - a()) * 0x1p-40;
  auto realized_step = [&](double t) {
    return V_(t) - V_(std::max(t - delta, a()));
  };
  for (const PotentialJump& j : jumps_) {
    double realized = realized_step(j.at);
    double slack = 1e-8 * (1.0 + std::fabs(j.weight) +
                           std::fabs(V_(j.at)) + std::fabs(realized));
    if (std::fabs(realized - j.weight) > slack)
      throw InputError("declared jump at x = " + num(j.at) + " has weight " +
                       num(j.weight) + " but the antiderivative steps by " +
                       num(realized));
  }
  for (double t : V_.breakpoints()) {
    bool declared = false;
    for (const PotentialJump& j : jumps_) declared = declared || j.at == t;
    if (declared) continue;
    double realized = realized_step(t);
    if (std::fabs(realized) > 1e-8 * (1.0 + std::fabs(V_(t))))
      throw InputError("antiderivative steps by " + num(realized) +
                       " at x = " + num(t) +
                       " without a declared jump there");
  }

  QuadOptions probe;
  probe.abs_tol = 1e-8;
  probe.rel_tol = 1e-6;
  probe.max_panels = 20000;
  probe.breakpoints = V_.breakpoints();
  probe.singular_a = V_.singular_a();
  probe.singular_b = V_.singular_b();
  try {
    integrate([this](double x) { double t = V_(x); return t * t; }, a(), b(),
              probe);
  } catch (const NonConvergentIntegral& e) {
    throw InputError(
        std::string("potential antiderivative fails the "
                    "square-integrability probe: ") + e.what());
  }
}

double PotentialAntiderivative::jump_weight(double x) const {
  for (const PotentialJump& j : jumps_)
    if (j.at == x) return j.weight;
  return 0.0;
}

CoeffPtr build_coefficients(const PotentialAntiderivative& V) {
  const PiecewiseFunction& f = V.antiderivative();
  std::vector<Expr> qp, sp;
  for (const Expr& e : f.pieces()) {
    qp.push_back(Expr::number(0.0) - e * e);
    sp.push_back(Expr::number(0.0) - e);
  }
  PiecewiseFunction p(f.a(), f.b(), Expr::number(1.0));
  PiecewiseFunction q(f.a(), f.b(), f.breakpoints(), std::move(qp),
                      f.singular_a(), f.singular_b());
  PiecewiseFunction s(f.a(), f.b(), f.breakpoints(), std::move(sp),
                      f.singular_a(), f.singular_b());
  PiecewiseFunction r = s;
  return std::make_shared<CoefficientSet>(std::move(p), std::move(q),
                                          std::move(r), std::move(s));
}

MeasureCheck measure_nonneg(const PotentialAntiderivative& tildeV,
                            const PotentialAntiderivative& V, int samples) {
  MeasureCheck out;
  if (tildeV.a() != V.a() || tildeV.b() != V.b())
    throw InputError("potentials live on different intervals");
  if (samples < 2) throw InputError("need at least two sample points");

  // Every jump of mu must have non-negative weight; jumps present in only
  // one potential count with the other's weight as zero.
  std::vector<double> jump_xs;
  for (const PotentialJump& j : tildeV.jumps()) jump_xs.push_back(j.at);
  for (const PotentialJump& j : V.jumps()) jump_xs.push_back(j.at);
  std::sort(jump_xs.begin(), jump_xs.end());
  jump_xs.erase(std::unique(jump_xs.begin(), jump_xs.end()), jump_xs.end());
  for (double t : jump_xs) {
    double w = tildeV.jump_weight(t) - V.jump_weight(t);
    if (w < 0.0) {
      out.nondecreasing = false;
      out.witness = t;
      out.detail = "jump of tildeV - V at x = " + num(t) +
                   " has negative weight " + num(w);
      return out;
    }
  }

  std::vector<double> xs;
  double a = V.a(), b = V.b();
  for (int i = 0; i < samples; ++i)
    xs.push_back(a + (b - a) * i / (samples - 1));
  for (double t : tildeV.antiderivative().breakpoints()) xs.push_back(t);
  for (double t : V.antiderivative().breakpoints()) xs.push_back(t);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double prev = tildeV(xs[0]) - V(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    double cur = tildeV(xs[i]) - V(xs[i]);
    if (cur < prev) {
      out.nondecreasing = false;
      out.witness = xs[i];
      out.detail = "tildeV - V decreases from " + num(prev) + " to " +
                   num(cur) + " at x = " + num(xs[i]);
      return out;
    }
    prev = cur;
  }
  return out;
}

double jump_condition_residual(const PotentialAntiderivative& V,
                               const Solution& u) {
  const CoefficientSet& c = *u.coefficients();
  double worst = 0.0;
  for (const PotentialJump& j : V.jumps()) {
    double t = j.at;
    double tl = std::nextafter(t, u.a());
    QuasiState right = u.state(t);
    QuasiState left = u.state(tl);
    double du_right = -c.s()(t) * right.u + right.v / c.p()(t);
    double du_left = -c.s()(tl) * left.u + left.v / c.p()(tl);
    worst = std::max(worst,
                     std::fabs(du_right - du_left - j.weight * right.u));
  }
  return worst;
}

namespace {

// -int u~^2 dmu over the open interval: atoms exactly, the absolutely
// continuous part by midpoint Riemann-Stieltjes sums per smooth cell with
// one Richardson extrapolation.  mu is evaluated pointwise, so cell-edge
// values take the left limit at the upper edge to keep atoms out of the
// differences.
Certificate stieltjes_certificate(const PotentialAntiderivative& tildeV,
                                  const PotentialAntiderivative& V,
                                  const Solution& tu, double tol) {
  double a = V.a(), b = V.b();
  auto mu = [&](double x) { return tildeV(x) - V(x); };

  double atoms = 0.0, atoms_abs = 0.0;
  std::vector<double> jump_xs;
  for (const PotentialJump& j : tildeV.jumps()) jump_xs.push_back(j.at);
  for (const PotentialJump& j : V.jumps()) jump_xs.push_back(j.at);
  std::sort(jump_xs.begin(), jump_xs.end());
  jump_xs.erase(std::unique(jump_xs.begin(), jump_xs.end()), jump_xs.end());
  for (double t : jump_xs) {
    double w = tildeV.jump_weight(t) - V.jump_weight(t);
    double uu = tu.u(t);
    atoms -= w * uu * uu;
    atoms_abs += std::fabs(w) * uu * uu;
  }

  std::vector<double> cells = merge_breakpoints(
      {&tildeV.antiderivative().breakpoints(),
       &V.antiderivative().breakpoints(), &tu.mesh()},
      a, b);
  cells.insert(cells.begin(), a);
  cells.push_back(b);

  double ac = 0.0, ac_err = 0.0;
  double cell_tol = std::max(tol, 1e-13) / (2.0 * (cells.size() - 1));
  for (std::size_t ci = 0; ci + 1 < cells.size(); ++ci) {
    double lo = cells[ci], hi = cells[ci + 1];
    if (hi <= lo) continue;
    // Left limit at the upper edge: atoms sit at cell joints and must not
    // leak into the within-cell differences.
    double hi_eval = std::nextafter(hi, lo);
    auto rs = [&](int n) {
      double sum = 0.0;
      double prev_mu = mu(lo);
      for (int i = 1; i <= n; ++i) {
        double xr = i == n ? hi_eval : lo + (hi - lo) * i / n;
        double xm = lo + (hi - lo) * (i - 0.5) / n;
        double um = tu.u(xm);
        double cur_mu = mu(xr);
        sum += um * um * (cur_mu - prev_mu);
        prev_mu = cur_mu;
      }
      return sum;
    };
    int n = 128;
    double prev = rs(n);
    double cur = rs(2 * n);
    while (std::fabs(cur - prev) / 3.0 > cell_tol && n < (1 << 16)) {
      n *= 2;
      prev = cur;
      cur = rs(2 * n);
    }
    ac -= cur + (cur - prev) / 3.0;
    ac_err += std::max(std::fabs(cur - prev) / 3.0, kEps * std::fabs(cur));
  }

  Certificate cert;
  cert.part[0] = 0.0;
  cert.part[1] = ac;
  cert.part[2] = atoms;
  cert.part_err[0] = 0.0;
  cert.part_err[1] = ac_err;
  cert.part_err[2] = 64.0 * kEps * atoms_abs;
  cert.value = ac + atoms;
  cert.err = cert.part_err[1] + cert.part_err[2];
  cert.verdict = classify(cert.value, cert.err);
  return cert;
}

void check_same_set(const CoefficientSet& got, const CoefficientSet& want) {
  std::vector<double> xs = merge_breakpoints(
      {&got.breakpoints(), &want.breakpoints()}, want.a(), want.b());
  xs.insert(xs.begin(), want.a());
  xs.push_back(want.b());
  auto close = [](double x, double y) {
    return std::fabs(x - y) <= 1e-9 * (1.0 + std::fabs(y));
  };
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (int k = 1; k < 16; ++k) {
      double x = xs[i] + (xs[i + 1] - xs[i]) * k / 16.0;
      if (!close(got.p()(x), want.p()(x)) ||
          !close(got.q()(x), want.q()(x)) ||
          !close(got.r()(x), want.r()(x)) || !close(got.s()(x), want.s()(x)))
        throw InputError(
            "reference solution was not produced from the reference "
            "potential's coefficient set (mismatch near x = " + num(x) + ")");
    }
  }
}

}  // namespace

Report distributional_compare(const PotentialAntiderivative& tildeV,
                              const PotentialAntiderivative& V,
                              const Solution& tilde_u, double tol,
                              int sweep_n) {
  if (tildeV.a() != V.a() || tildeV.b() != V.b())
    throw InputError("potentials live on different intervals");
  MeasureCheck mc = measure_nonneg(tildeV, V);
  if (!mc.nondecreasing)
    throw HypothesisError("tildeV - V is not a non-negative measure: " +
                          mc.detail);

  CoeffPtr tilde_built = build_coefficients(tildeV);
  check_same_set(*tilde_u.coefficients(), *tilde_built);
  CoeffPtr target = build_coefficients(V);

  ComparisonProblem prob(tilde_u.coefficients(), target, GaugeFunction(),
                         GaugeFunction());
  Report rep = compare(prob, tilde_u, sweep_n, tol);
  Certificate parts_route = rep.certificate;

  Certificate st = stieltjes_certificate(tildeV, V, tilde_u, tol);
  double gap = std::fabs(st.value - parts_route.value);
  double thr = std::max(tol, 1e-12) + st.err + parts_route.err;
  if (gap > thr) {
    rep.consistent = false;
    rep.notes.push_back(
        "Stieltjes certificate " + num(st.value) +
        " disagrees with the integration-by-parts route " +
        num(parts_route.value) + " (gap " + num(gap) + ")");
  } else {
    rep.notes.push_back("integration-by-parts route matches within " +
                        num(gap));
  }

  rep.certificate = st;
  if (st.verdict != parts_route.verdict) {
    rep.notes.push_back(
        std::string("verdict from the Stieltjes form (") +
        verdict_name(st.verdict) + ") differs from the quadrature route (" +
        verdict_name(parts_route.verdict) + ")");
    if (st.verdict == Verdict::StrictlyNegative && rep.sweep_ran &&
        rep.sweep.zero_free > 0)
      rep.consistent = false;
  }
  return rep;
}

}  // namespace oscert

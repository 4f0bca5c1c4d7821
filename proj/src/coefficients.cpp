#include "oscert/coefficients.hpp"

#include <cmath>
#include <string>

#include "oscert/errors.hpp"

namespace oscert {

namespace {

std::string describe_point(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

CoefficientSet::CoefficientSet(PiecewiseFunction p, PiecewiseFunction q,
                               PiecewiseFunction r, PiecewiseFunction s,
                               ValidationOptions opt)
    : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), s_(std::move(s)) {
  for (const PiecewiseFunction* f : {&q_, &r_, &s_})
    if (f->a() != p_.a() || f->b() != p_.b())
      throw InputError("coefficients live on different intervals");
  breakpoints_ = merge_breakpoints({&p_.breakpoints(), &q_.breakpoints(),
                                    &r_.breakpoints(), &s_.breakpoints()},
                                   a(), b());
  build_segments();
  validate(opt);

  QuadOptions anti;
  anti.abs_tol = 1e-12;
  anti.breakpoints = breakpoints_;
  anti.singular_a = s_.singular_a();
  anti.singular_b = s_.singular_b();
  S_ = Antiderivative([f = s_](double x) { return f(x); }, a(), b(), anti);
  anti.singular_a = r_.singular_a();
  anti.singular_b = r_.singular_b();
  R_ = Antiderivative([f = r_](double x) { return f(x); }, a(), b(), anti);
}

double CoefficientSet::antiderivative_error() const {
  return S_.error_bound() + R_.error_bound();
}

void CoefficientSet::build_segments() {
  segments_.clear();
  for (std::size_t i = 0; i <= breakpoints_.size(); ++i) {
    Segment seg;
    seg.lo = i == 0 ? a() : breakpoints_[i - 1];
    seg.hi = i == breakpoints_.size() ? b() : breakpoints_[i];
    double mid = 0.5 * (seg.lo + seg.hi);
    seg.p = p_.pieces()[p_.piece_index(mid)];
    seg.q = q_.pieces()[q_.piece_index(mid)];
    seg.r = r_.pieces()[r_.piece_index(mid)];
    seg.s = s_.pieces()[s_.piece_index(mid)];
    seg.constant = !seg.p.depends_on_x() && !seg.q.depends_on_x() &&
                   !seg.r.depends_on_x() && !seg.s.depends_on_x();
    seg.pv = seg.p(mid);
    seg.qv = seg.q(mid);
    seg.rv = seg.r(mid);
    seg.sv = seg.s(mid);
    segments_.push_back(std::move(seg));
  }
}

void CoefficientSet::validate(const ValidationOptions& opt) {
  // Positivity of p at samples.  Samples stay off singular endpoints.
  for (const Segment& seg : segments_) {
    int n = opt.samples_per_piece;
    for (int i = 0; i <= n; ++i) {
      double x = seg.lo + (seg.hi - seg.lo) * i / n;
      if ((x == a() && singular_a()) || (x == b() && singular_b())) continue;
      double v = seg.p(x);
      if (!(v > 0.0) || !std::isfinite(v))
        throw InputError("coefficient p is not positive at x = " +
                         describe_point(x) + " (p = " + std::to_string(v) +
                         ")");
    }
  }

  if (!opt.check_integrability) return;
  struct Check {
    const char* name;
    const PiecewiseFunction* pf;
    std::function<double(double)> f;
  };
  const Check checks[] = {
      {"1/p", &p_, [this](double x) { return 1.0 / p_(x); }},
      {"q", &q_, [this](double x) { return std::fabs(q_(x)); }},
      {"r", &r_, [this](double x) { return std::fabs(r_(x)); }},
      {"s", &s_, [this](double x) { return std::fabs(s_(x)); }},
  };
  for (const Check& c : checks) {
    QuadOptions probe;
    probe.abs_tol = opt.tol;
    probe.rel_tol = 1e-6;
    probe.breakpoints = breakpoints_;
    probe.singular_a = c.pf->singular_a();
    probe.singular_b = c.pf->singular_b();
    probe.max_panels = 20000;
    try {
      integrate(c.f, a(), b(), probe);
    } catch (const NonConvergentIntegral& e) {
      throw InputError(std::string("coefficient ") + c.name +
                       " fails the integrability probe: " + e.what());
    }
  }
}

std::shared_ptr<const CoefficientSet> CoefficientSet::restrict_upper(
    double new_b) const {
  ValidationOptions fast;
  fast.check_integrability = false;  // restriction of validated data
  return std::make_shared<CoefficientSet>(
      p_.restrict_upper(new_b), q_.restrict_upper(new_b),
      r_.restrict_upper(new_b), s_.restrict_upper(new_b), fast);
}

GaugeFunction::GaugeFunction(PiecewiseFunction derivative, double value_at_a,
                             double tol)
    : deriv_(std::move(derivative)), value_at_a_(value_at_a) {
  zero_ = value_at_a_ == 0.0;
  bool all_const = true;
  for (const Expr& e : deriv_.pieces()) {
    if (e.depends_on_x()) all_const = false;
    if (e.depends_on_x() || e(0.0) != 0.0) zero_ = false;
  }
  if (zero_) return;
  if (all_const) {
    piecewise_linear_ = true;
    nodes_.push_back(deriv_.a());
    node_values_.push_back(0.0);
    for (std::size_t i = 0; i < deriv_.pieces().size(); ++i) {
      double lo, hi;
      deriv_.piece_span(i, lo, hi);
      slopes_.push_back(deriv_.pieces()[i](lo));
      nodes_.push_back(hi);
      node_values_.push_back(node_values_.back() + slopes_.back() * (hi - lo));
    }
    return;
  }
  QuadOptions opt;
  opt.abs_tol = tol;
  opt.breakpoints = deriv_.breakpoints();
  anti_ = Antiderivative([d = deriv_](double x) { return d(x); }, deriv_.a(),
                         deriv_.b(), opt);
}

double GaugeFunction::operator()(double x) const {
  if (zero_) return value_at_a_;
  if (piecewise_linear_) {
    std::size_t i = deriv_.piece_index(std::min(x, deriv_.b()));
    if (i >= slopes_.size()) i = slopes_.size() - 1;
    return value_at_a_ + node_values_[i] + slopes_[i] * (x - nodes_[i]);
  }
  return value_at_a_ + anti_(x);
}

GaugeFunction GaugeFunction::zero_gauge(double a, double b) {
  return GaugeFunction(PiecewiseFunction::constant(a, b, 0.0), 0.0);
}

GaugeFunction GaugeFunction::linear(double a, double b, double slope) {
  GaugeFunction g(PiecewiseFunction::constant(a, b, slope), 0.0);
  return g;
}

}  // namespace oscert

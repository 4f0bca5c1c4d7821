#include "oscert/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace oscert {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half; the odd
// kXgk indices are the 7-point Gauss nodes, paired with kWg).
constexpr double kXgk[8] = {
    0.99145537112081263920685469752633, 0.94910791234275852452618968404785,
    0.86486442335976907278971278864093, 0.74153118559939443986386477328079,
    0.58608723546769113029414483825873, 0.40584515137739716690660641207696,
    0.20778495500789846760068940377324, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922496373200805897, 0.06309209262997855329070066318921,
    0.10479001032225018383987632254152, 0.14065325971552591874518959051024,
    0.16900472663926790282658342659855, 0.19035057806478540991325640242101,
    0.20443294007529889241416199923465, 0.20948214108472782801299917489171};
constexpr double kWg[4] = {
    0.12948496616886969327061143267908, 0.27970539148927666790146777142378,
    0.38183005050511894495036977548898, 0.41795918367346938775510204081633};

struct Panel {
  double lo, hi;
  double value, err;
  bool splittable;
  bool stub = false;
  double beta = 1.0;   // fitted decay exponent, stub panels only
  double floor = 0.0;  // roundoff part of err; invariant under splitting
};

Panel gk15(const std::function<double(double)>& f, double lo, double hi) {
  double c = 0.5 * (lo + hi);
  double h = 0.5 * (hi - lo);
  double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::fabs(fc) * kWgk[7];
  double fv[14];
  bool finite = std::isfinite(fc);
  for (int j = 0; j < 7; ++j) {
    double dx = kXgk[j] * h;
    double f1 = f(c - dx);
    double f2 = f(c + dx);
    finite = finite && std::isfinite(f1) && std::isfinite(f2);
    fv[2 * j] = f1;
    fv[2 * j + 1] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
  }
  double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::fabs(fv[2 * j] - reskh) +
                         std::fabs(fv[2 * j + 1] - reskh));
  resabs *= std::fabs(h);
  resasc *= std::fabs(h);
  double err = std::fabs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  double floor = 50.0 * kEps * resabs;
  err = std::max(err, floor);

  Panel p;
  p.lo = lo;
  p.hi = hi;
  p.value = resk * h;
  p.err = err;
  p.floor = floor;
  p.splittable =
      hi - lo > 100.0 * kEps * std::max({std::fabs(lo), std::fabs(hi), 1.0});
  if (!finite) {
    p.value = 0.0;
    p.err = std::numeric_limits<double>::infinity();
  }
  return p;
}

struct Budget {
  int used = 0;
  int max;
  explicit Budget(int m) : max(m) {}
  bool spend() { return ++used <= max; }
};

// Split the worst panel until err_offset + sum of panel errors meets
// max(tol_abs, tol_rel * |value_offset + sum of panel values|).  Returns
// false when the budget ran out or nothing splittable is left while still
// above tolerance.  `panels` is replaced by the refined decomposition.
bool refine_heap(const std::function<double(double)>& f,
                 std::vector<Panel>& panels, double tol_abs, double tol_rel,
                 double value_offset, double err_offset, Budget& budget) {
  auto cmp = [](const Panel& a, const Panel& b) { return a.err < b.err; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
  double total_v = value_offset, total_e = err_offset, total_f = 0.0;
  for (const Panel& p : panels) {
    heap.push(p);
    total_v += p.value;
    total_e += p.err;
    total_f += p.floor;
  }
  std::vector<Panel> done;
  bool ok = true;
  // Splitting a panel leaves the roundoff floors summing to the parent's,
  // so once the total error estimate sits at the floor no subdivision can
  // lower it further; that state counts as converged.
  while (total_e >
             std::max(tol_abs, tol_rel * std::fabs(total_v)) &&
         total_e > 2.0 * total_f) {
    if (heap.empty()) {
      ok = false;
      break;
    }
    Panel worst = heap.top();
    heap.pop();
    if (!worst.splittable) {
      done.push_back(worst);
      continue;
    }
    if (!budget.spend()) {
      done.push_back(worst);
      ok = false;
      break;
    }
    double mid = 0.5 * (worst.lo + worst.hi);
    Panel a = gk15(f, worst.lo, mid);
    Panel b = gk15(f, mid, worst.hi);
    total_v += a.value + b.value - worst.value;
    total_e += a.err + b.err - worst.err;
    total_f += a.floor + b.floor - worst.floor;
    heap.push(a);
    heap.push(b);
  }
  panels = std::move(done);
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  return ok;
}

double sum_err(const std::vector<Panel>& panels) {
  double e = 0.0;
  for (const Panel& p : panels) e += p.err;
  return e;
}

double sum_value(const std::vector<Panel>& panels) {
  double v = 0.0;
  for (const Panel& p : panels) v += p.value;
  return v;
}

// Geometrically shrinking shells closing in on a declared singular
// endpoint at `edge`.  The shells cover all of the edge region except an
// unresolved sliver next to the endpoint; the sliver becomes a stub panel
// whose value is the geometric extrapolation of the shell sums and whose
// error combines the extrapolated tail with the observed drift of the
// shell-to-shell decay ratio.  The whole edge region stays within `tol`.
bool singular_edge(const std::function<double(double)>& f, double edge,
                   double width, bool left, double tol, Budget& budget,
                   std::vector<Panel>& out) {
  double frac = 1.0;
  double v_prev = 0.0;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0;  // last three signed shell ratios
  double edge_err = 0.0;
  std::vector<Panel> shells;
  for (int k = 0; k < 900; ++k) {
    double frac_in = 0.5 * frac;
    double lo = left ? edge + frac_in * width : edge - frac * width;
    double hi = left ? edge + frac * width : edge - frac_in * width;
    if (!(lo < hi)) return false;  // coordinate resolution exhausted
    std::vector<Panel> shell{gk15(f, lo, hi)};
    double share = tol * 0.125 * std::max(std::sqrt(frac), 1e-4);
    refine_heap(f, shell, share, 0.0, 0.0, 0.0, budget);
    double shell_err = sum_err(shell);
    if (!std::isfinite(shell_err) || edge_err + shell_err > 0.6 * tol)
      return false;
    edge_err += shell_err;
    double v = sum_value(shell);
    for (Panel& p : shell) shells.push_back(p);
    double ratio = std::fabs(v_prev) > 1e-290 ? v / v_prev : 0.0;
    r1 = r2;
    r2 = r3;
    r3 = ratio;
    v_prev = v;
    if (k >= 4) {
      double rho = std::clamp(r3, -0.97, 0.97);
      double arho = std::fabs(rho);
      double tail = std::fabs(v) * arho / (1.0 - arho);
      double spread = std::fabs(r3 - r2) + std::fabs(r2 - r1);
      double denom = (1.0 - arho) * (1.0 - arho);
      double model_err =
          tail * std::min(1.0, 3.0 * spread / denom + 1e-6);
      if (tail < 0.25 * tol || model_err < 0.25 * tol) {
        Panel stub;
        stub.lo = left ? edge : hi;
        stub.hi = left ? lo : edge;
        stub.value = v * rho / (1.0 - rho);
        stub.err = std::max(model_err, 1e-300);
        stub.splittable = false;
        stub.stub = true;
        stub.beta = arho > 0.0 ? std::log2(1.0 / arho) : 30.0;
        shells.push_back(stub);
        for (const Panel& p : shells) out.push_back(p);
        return true;
      }
      if (std::fabs(ratio) > 0.97 && k > 8)
        return false;  // shells not decaying: diverges
    }
    frac = frac_in;
  }
  return false;
}

struct Decomposed {
  std::vector<Panel> panels;
  double value = 0.0;
  double err = 0.0;
};

Decomposed integrate_panels(const std::function<double(double)>& f, double a,
                            double b, const QuadOptions& opt) {
  if (!(a <= b)) throw InputError("integration interval has a > b");
  Decomposed out;
  if (a == b) return out;

  std::vector<double> cuts;
  for (double t : opt.breakpoints)
    if (a < t && t < b) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Budget budget(opt.max_panels);
  auto give_up = [&out](const char* why) -> NonConvergentIntegral {
    out.value = sum_value(out.panels);
    out.err = sum_err(out.panels);
    return NonConvergentIntegral(
        std::string("quadrature did not converge (") + why +
            "): value ~ " + std::to_string(out.value) + ", error estimate " +
            std::to_string(out.err),
        {out.value, out.err});
  };

  double lo = a, hi = b;
  double edge_share =
      opt.singular_a && opt.singular_b ? 0.25 : 0.5;
  if (opt.singular_a) {
    double w = 0.5 * ((cuts.empty() ? b : cuts.front()) - a);
    if (!singular_edge(f, a, w, true, edge_share * opt.abs_tol, budget,
                       out.panels))
      throw give_up("left endpoint singularity");
    lo = a + w;
  }
  if (opt.singular_b) {
    double w = 0.5 * (b - (cuts.empty() ? a : cuts.back()));
    if (!singular_edge(f, b, w, false, edge_share * opt.abs_tol, budget,
                       out.panels))
      throw give_up("right endpoint singularity");
    hi = b - w;
  }
  double edge_value = sum_value(out.panels);
  double edge_err = sum_err(out.panels);

  // One panel per regular segment between breakpoints, refined under a
  // single global heap.
  std::vector<Panel> reg;
  double s = lo;
  for (double t : cuts) {
    if (t <= lo || t >= hi) continue;
    reg.push_back(gk15(f, s, t));
    s = t;
  }
  reg.push_back(gk15(f, s, hi));

  double reg_tol = std::max(opt.abs_tol - edge_err, 0.25 * opt.abs_tol);
  refine_heap(f, reg, reg_tol, opt.rel_tol, edge_value, edge_err, budget);
  for (const Panel& p : reg) out.panels.push_back(p);

  out.value = sum_value(out.panels);
  out.err = sum_err(out.panels);
  double floor_sum = 0.0;
  for (const Panel& p : out.panels) floor_sum += p.floor;
  if (!std::isfinite(out.err) ||
      (out.err > std::max(opt.abs_tol, opt.rel_tol * std::fabs(out.value)) &&
       out.err > 2.0 * floor_sum))
    throw give_up("tolerance unreachable within panel budget");
  std::sort(out.panels.begin(), out.panels.end(),
            [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
  return out;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, const QuadOptions& opt) {
  Decomposed d = integrate_panels(f, a, b, opt);
  return {d.value, d.err};
}

Antiderivative::Antiderivative(std::function<double(double)> f, double a,
                               double b, QuadOptions opt)
    : f_(std::move(f)), a_(a), b_(b) {
  double target = std::max(opt.abs_tol, 1e-14);
  QuadOptions build = opt;
  build.abs_tol = 0.5 * target;
  build.rel_tol = 0.0;
  Decomposed d = integrate_panels(f_, a_, b_, build);
  query_tol_ = 0.5 * target;
  bound_ = d.err + query_tol_;
  panels_.reserve(d.panels.size());
  for (const auto& p : d.panels)
    panels_.push_back({p.lo, p.hi, p.value, p.stub, p.beta});
  prefix_.resize(panels_.size() + 1, 0.0);
  for (std::size_t i = 0; i < panels_.size(); ++i)
    prefix_[i + 1] = prefix_[i] + panels_[i].value;
}

double Antiderivative::total() const {
  return prefix_.empty() ? 0.0 : prefix_.back();
}

double Antiderivative::operator()(double x) const {
  if (panels_.empty()) return 0.0;
  if (x <= a_) return 0.0;
  if (x >= b_) return total();
  std::size_t lo = 0, hi = panels_.size();
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (panels_[mid].lo <= x)
      lo = mid;
    else
      hi = mid;
  }
  const Panel& p = panels_[lo];
  if (p.stub) {
    // Inside the unresolved sliver at a singular endpoint the cumulative
    // mass follows the fitted power-law profile of the shells.
    double w = p.hi - p.lo;
    if (p.lo == a_) {
      double t = std::clamp((x - p.lo) / w, 0.0, 1.0);
      return prefix_[lo] + p.value * std::pow(t, p.beta);
    }
    double t = std::clamp((p.hi - x) / w, 0.0, 1.0);
    return prefix_[lo] + p.value * (1.0 - std::pow(t, p.beta));
  }
  if (x == p.hi) return prefix_[lo + 1];
  QuadOptions part;
  part.abs_tol = std::max(query_tol_, 1e-15);
  part.rel_tol = 1e-12;
  part.max_panels = 4000;
  QuadResult q = integrate(f_, p.lo, x, part);
  return prefix_[lo] + q.value;
}

}  // namespace oscert

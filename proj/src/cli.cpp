#include "oscert/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oscert/comparison.hpp"
#include "oscert/distributional.hpp"
#include "oscert/errors.hpp"
#include "oscert/jacobi.hpp"
#include "oscert/problem_file.hpp"
#include "oscert/search.hpp"
#include "oscert/solver.hpp"

namespace oscert {

namespace {

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

double flag_value(const std::string& text, const char* flag) {
  try {
    return const_value(text);
  } catch (const InputError& e) {
    throw InputError(std::string(flag) + ": " + e.what());
  }
}

/// Per-subcommand option storage.
struct Flags {
  std::string file1, file2;
  std::string tol = "1e-8";
  int sweep = 64;
  int steps = 25;
  std::string csv;
  std::string theta = "pi/2";
  std::vector<std::string> at;
  std::string k, c = "0";
  std::string lo = "0", hi = "1.2";
  std::string width = "1e-4";
  bool threshold = false;

  double tol_value() const {
    double t = flag_value(tol, "--tol");
    if (!(t > 0.0)) throw InputError("--tol: must be positive");
    return t;
  }
  double theta_value() const { return flag_value(theta, "--theta"); }
};

void write_csv(const std::string& path, const std::string& content) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("--csv: cannot write " + path);
  f << content;
  f.flush();
  if (!f) throw InputError("--csv: write failed for " + path);
}

ProblemFile load_continuous(const std::string& path) {
  ProblemFile pf = load_problem(path);
  if (pf.kind == ProblemKind::Jacobi)
    throw InputError(path + ": a [jacobi] problem needs the jacobi "
                            "subcommand");
  return pf;
}

ProblemFile load_potential_file(const std::string& path) {
  ProblemFile pf = load_problem(path);
  if (pf.kind != ProblemKind::Potential)
    throw InputError(path + ": the distro subcommand needs a [potential] "
                            "problem");
  return pf;
}

ProblemFile load_jacobi_file(const std::string& path) {
  ProblemFile pf = load_problem(path);
  if (pf.kind != ProblemKind::Jacobi)
    throw InputError(path + ": the jacobi subcommand needs a [jacobi] "
                            "problem");
  return pf;
}

void check_same_interval(const ProblemFile& tilde, const ProblemFile& target) {
  if (tilde.a != target.a || tilde.b != target.b)
    throw InputError(tilde.path + " is on [" + short_num(tilde.a) + ", " +
                     short_num(tilde.b) + "] but " + target.path + " is on [" +
                     short_num(target.a) + ", " + short_num(target.b) +
                     "]; comparison needs one interval");
}

struct GaugePick {
  GaugeFunction F, G;
  const char* source;
};

/// Gauges come from the target file first, then the tilde file; without
/// any [gauge] section the default is F = 0 and G' = s - r of the target,
/// which makes the certificate integrand vanish identically when the two
/// problems coincide.
GaugePick pick_gauges(const ProblemFile& tilde, const ProblemFile& target,
                      const CoeffPtr& target_set) {
  if (target.has_gauge) return {target.F, target.G, "target file [gauge]"};
  if (tilde.has_gauge) return {tilde.F, tilde.G, "tilde file [gauge]"};
  double a = target_set->a(), b = target_set->b();
  const PiecewiseFunction& s = target_set->s();
  const PiecewiseFunction& r = target_set->r();
  bool same = s.breakpoints() == r.breakpoints() &&
              s.pieces().size() == r.pieces().size();
  for (std::size_t i = 0; same && i < s.pieces().size(); ++i)
    same = s.pieces()[i].same_tree(r.pieces()[i]);
  if (same)
    return {GaugeFunction::zero_gauge(a, b), GaugeFunction::zero_gauge(a, b),
            "default G' = s - r (identically zero)"};
  PiecewiseFunction gd =
      combine(s, r, [](const Expr& x, const Expr& y) { return x - y; });
  return {GaugeFunction::zero_gauge(a, b), GaugeFunction(gd, 0.0),
          "default G' = s - r"};
}

std::string report_csv(const Report& rep) {
  return render_csv_header() + "\n" + render_csv(rep) + "\n";
}

std::vector<double> at_values(const Flags& f, double a, double b) {
  std::vector<double> out;
  for (const std::string& tok : f.at) {
    double x = flag_value(tok, "--at");
    if (!(x >= a && x <= b))
      throw InputError("--at: x = " + short_num(x) + " lies outside [" +
                       short_num(a) + ", " + short_num(b) + "]");
    out.push_back(x);
  }
  return out;
}

void run_solve(const Flags& f, std::ostream& out) {
  ProblemFile pf = load_problem(f.file1);
  double theta = f.theta_value();
  double u0, v0;
  theta_state(theta, u0, v0);

  if (pf.kind == ProblemKind::Jacobi) {
    if (!f.at.empty())
      throw InputError("--at does not apply to a lattice problem");
    const JacobiProblem& jp = *pf.jacobi;
    JacobiSolution u = solve_recurrence(jp, u0, v0);
    out << "lattice      n = " << jp.N0 << ".." << jp.N1 << "\n";
    out << "initial      theta = " << g17(theta) << ": u_N0 = " << g17(u0)
        << ", u_N0+1 = " << g17(v0) << "\n";
    out << "residual     " << short_num(recurrence_residual(jp, u)) << "\n";
    out << "sign change  " << (changes_sign(u) ? "yes" : "no") << "\n";
    std::string csv = "n,u\n";
    for (int n = jp.N0; n <= jp.N1; ++n) {
      out << "u_" << n << "          " << g17(u.at(n)) << "\n";
      csv += std::to_string(n) + "," + g17(u.at(n)) + "\n";
    }
    write_csv(f.csv, csv);
    return;
  }

  CoeffPtr set = pf.realized();
  SolveOptions opt;
  opt.tol = f.tol_value();
  Solution sol = solve_ivp(set, set->a(), u0, v0, opt);
  out << "interval     [" << g17(set->a()) << ", " << g17(set->b()) << "]\n";
  out << "initial      theta = " << g17(theta) << ": u = " << g17(u0)
      << ", v = " << g17(v0) << "\n";
  out << "terminal     u = " << g17(sol.u(set->b()))
      << ", v = " << g17(sol.v(set->b())) << "\n";
  out << "residual     " << short_num(solution_residual(sol)) << "\n";
  if (pf.kind == ProblemKind::Potential)
    out << "jump defect  "
        << short_num(jump_condition_residual(*pf.potential, sol)) << "\n";

  std::vector<double> pts = at_values(f, set->a(), set->b());
  for (double x : pts)
    out << "at x = " << g17(x) << "  u = " << g17(sol.u(x))
        << "  v = " << g17(sol.v(x)) << "\n";

  std::string csv = "x,u,v\n";
  for (double x : pts.empty() ? sol.sample_points() : pts)
    csv += g17(x) + "," + g17(sol.u(x)) + "," + g17(sol.v(x)) + "\n";
  write_csv(f.csv, csv);
}

void run_zeros(const Flags& f, std::ostream& out) {
  ProblemFile pf = load_continuous(f.file1);
  CoeffPtr set = pf.realized();
  double tol = f.tol_value();
  double theta = f.theta_value();
  double u0, v0;
  theta_state(theta, u0, v0);
  SolveOptions opt;
  opt.tol = tol;
  Solution sol = solve_ivp(set, set->a(), u0, v0, opt);
  ZeroList zs = find_zeros(sol, set->a(), set->b(), tol);
  out << "zeros        " << zs.size() << " strictly inside ("
      << g17(set->a()) << ", " << g17(set->b()) << ")\n";
  std::string csv = "x,halfwidth,min_abs_v\n";
  for (const ZeroEnclosure& z : zs) {
    out << "zero         x = " << g17(z.x) << " +/- " << short_num(z.halfwidth)
        << "  min|v| = " << short_num(z.min_abs_v) << "\n";
    csv += g17(z.x) + "," + g17(z.halfwidth) + "," + g17(z.min_abs_v) + "\n";
  }
  write_csv(f.csv, csv);
}

void run_compare(const Flags& f, std::ostream& out) {
  ProblemFile tilde = load_continuous(f.file1);
  ProblemFile target = load_continuous(f.file2);
  check_same_interval(tilde, target);
  CoeffPtr tilde_set = tilde.realized();
  CoeffPtr target_set = target.realized();
  GaugePick gp = pick_gauges(tilde, target, target_set);
  double tol = f.tol_value();
  Solution tu = shoot_vanishing(tilde_set, std::max(tol, 1e-9));
  ComparisonProblem prob(tilde_set, target_set, gp.F, gp.G);
  Report rep = compare(prob, tu, f.sweep, tol);
  out << "gauge        " << gp.source << "\n" << render_table(rep);
  write_csv(f.csv, report_csv(rep));
}

void run_separation(const Flags& f, std::ostream& out) {
  ProblemFile pf = load_continuous(f.file1);
  CoeffPtr set = pf.realized();
  double tol = f.tol_value();
  SolveOptions opt;
  opt.tol = tol;

  // The driver needs a reference solution vanishing at both ends, so clip
  // the interval at the last interior zero of the shot from u(a) = 0
  // unless that shot already vanishes at b.
  Solution shot = solve_ivp(set, set->a(), 0.0, 1.0, opt);
  double scale = 0.0;
  for (double x : shot.sample_points())
    scale = std::max(scale, std::fabs(shot.u(x)));
  CoeffPtr work = set;
  bool clipped = false;
  if (std::fabs(shot.u(set->b())) > std::max(tol, 1e-9) * scale) {
    ZeroList zs = find_zeros(shot, set->a(), set->b(), tol);
    if (zs.empty())
      throw HypothesisError(f.file1 +
                            ": the solution shot from u(a) = 0 has no zero "
                            "in (a, b), so there is no separation window");
    work = set->restrict_upper(zs.back().x);
    clipped = true;
  }
  Solution tu = solve_ivp(work, work->a(), 0.0, 1.0, opt);
  double theta = f.theta_value();
  double u0, v0;
  theta_state(theta, u0, v0);
  Solution u = solve_ivp(work, work->a(), u0, v0, opt);
  Report rep = separation(work, tu, u, tol);
  out << "window       [" << g17(work->a()) << ", " << g17(work->b()) << "]"
      << (clipped ? " (clipped at the reference solution's last zero)" : "")
      << "\n"
      << render_table(rep);
  write_csv(f.csv, report_csv(rep));
}

void run_picone(const Flags& f, std::ostream& out) {
  ProblemFile tilde = load_continuous(f.file1);
  ProblemFile target = load_continuous(f.file2);
  check_same_interval(tilde, target);
  CoeffPtr tilde_set = tilde.realized();
  CoeffPtr target_set = target.realized();
  double tol = f.tol_value();
  Solution tu = shoot_vanishing(tilde_set, std::max(tol, 1e-9));
  Report rep = sturm_picone(tilde_set, target_set, tu, tol, f.sweep);
  out << render_table(rep);
  write_csv(f.csv, report_csv(rep));
}

void run_jacobi(const Flags& f, std::ostream& out) {
  ProblemFile tilde = load_jacobi_file(f.file1);
  ProblemFile target = f.file2.empty() ? tilde : load_jacobi_file(f.file2);
  if (tilde.jacobi->N0 != target.jacobi->N0 ||
      tilde.jacobi->N1 != target.jacobi->N1)
    throw InputError(tilde.path + " and " + target.path +
                     " use different lattice ranges; comparison needs one "
                     "range");
  JacobiSolution tu = solve_recurrence(*tilde.jacobi, 0.0, 1.0);
  Report rep = discrete_compare(*tilde.jacobi, *target.jacobi, tu, f.sweep);
  out << render_table(rep);
  write_csv(f.csv, report_csv(rep));
}

void run_distro(const Flags& f, std::ostream& out) {
  ProblemFile tilde = load_potential_file(f.file1);
  ProblemFile target = load_potential_file(f.file2);
  check_same_interval(tilde, target);
  double tol = f.tol_value();
  Solution tu =
      shoot_vanishing(build_coefficients(*tilde.potential), std::max(tol, 1e-9));
  Report rep = distributional_compare(*tilde.potential, *target.potential, tu,
                                      tol, f.sweep);
  out << render_table(rep);
  write_csv(f.csv, report_csv(rep));
}

void run_leighton(const Flags& f, std::ostream& out) {
  double tol = f.tol_value();
  if (f.threshold) {
    double lo = flag_value(f.lo, "--lo");
    double hi = flag_value(f.hi, "--hi");
    double width = flag_value(f.width, "--width");
    ThresholdBracket tb = leighton_threshold(lo, hi, width, tol);
    out << "threshold    k in [" << g17(tb.lo) << ", " << g17(tb.hi) << "]\n";
    out << "at k_lo      c = " << g17(tb.scan_lo.c) << ", certificate "
        << g17(tb.scan_lo.certificate.value) << " +/- "
        << g17(tb.scan_lo.certificate.err) << "\n";
    out << "at k_hi      c = " << g17(tb.scan_hi.c) << ", certificate "
        << g17(tb.scan_hi.certificate.value) << " +/- "
        << g17(tb.scan_hi.certificate.err) << "\n";
    std::string csv = "k,c,value,err\n";
    csv += g17(tb.lo) + "," + g17(tb.scan_lo.c) + "," +
           g17(tb.scan_lo.certificate.value) + "," +
           g17(tb.scan_lo.certificate.err) + "\n";
    csv += g17(tb.hi) + "," + g17(tb.scan_hi.c) + "," +
           g17(tb.scan_hi.certificate.value) + "," +
           g17(tb.scan_hi.certificate.err) + "\n";
    write_csv(f.csv, csv);
    return;
  }
  if (f.k.empty())
    throw InputError("--k is required (or use --threshold)");
  double k = flag_value(f.k, "--k");
  double c = flag_value(f.c, "--c");
  Report rep = leighton_driver(k, c, tol, f.sweep);
  out << "k            " << g17(k) << "\n";
  out << "c            " << g17(c) << "\n";
  out << render_table(rep);
  write_csv(f.csv, report_csv(rep));
}

void run_scan(const Flags& f, std::ostream& out) {
  double tol = f.tol_value();
  CoeffPtr tilde_set, target_set;
  if (!f.file1.empty() && !f.file2.empty()) {
    ProblemFile tilde = load_continuous(f.file1);
    ProblemFile target = load_continuous(f.file2);
    check_same_interval(tilde, target);
    tilde_set = tilde.realized();
    target_set = target.realized();
  } else if (f.file1.empty() && !f.k.empty()) {
    tilde_set = leighton_tilde();
    target_set = leighton_target(flag_value(f.k, "--k"));
  } else {
    throw InputError(
        "scan needs either two problem files or --k for the built-in "
        "template");
  }
  double lo = flag_value(f.lo, "--lo");
  double hi = flag_value(f.hi, "--hi");
  Solution tu = shoot_vanishing(tilde_set, std::max(tol, 1e-9));
  GaugeScan scan =
      linear_gauge_scan(tilde_set, target_set, tu, lo, hi, f.steps, tol);
  out << "scan         c in [" << g17(lo) << ", " << g17(hi) << "], "
      << f.steps << " grid steps\n";
  out << "best c       " << g17(scan.c) << "\n";
  out << "certificate  " << g17(scan.certificate.value) << " +/- "
      << g17(scan.certificate.err) << "\n";
  out << "verdict      " << verdict_name(scan.certificate.verdict) << "\n";
  out << "table        " << scan.table.size() << " evaluated points\n";
  std::string csv = "c,value,err\n";
  for (const ScanPoint& p : scan.table)
    csv += g17(p.c) + "," + g17(p.value) + "," + g17(p.err) + "\n";
  write_csv(f.csv, csv);
}

void add_tol(CLI::App* sub, Flags& f) {
  sub->add_option("--tol", f.tol,
                  "quadrature / solver tolerance (expression, default 1e-8)");
}

void add_sweep(CLI::App* sub, Flags& f, int dflt) {
  f.sweep = dflt;
  sub->add_option("--sweep", f.sweep,
                  "number of initial directions theta_j = j pi / n sampled "
                  "by the verdict sweep; 0 disables it (default " +
                      std::to_string(dflt) + ")");
}

void add_csv(CLI::App* sub, Flags& f) {
  sub->add_option("--csv", f.csv, "write a machine-readable CSV table here");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app(
      "Oscillation certificates for the generalized Sturm-Liouville "
      "equation -(p(u' + su))' + rp(u' + su) + qu = 0: a strictly negative "
      "comparison certificate forces every solution of the target equation "
      "to vanish inside the interval.");
  app.name("oscert");
  app.require_subcommand(1);

  Flags fs[9];

  CLI::App* solve = app.add_subcommand(
      "solve",
      "Integrate one solution from the initial direction theta, "
      "(u, v)(a) = (cos theta, sin theta) with v = p(u' + su); for a "
      "lattice problem the recurrence is run from (u_N0, u_N0+1) = "
      "(cos theta, sin theta).");
  solve->add_option("file", fs[0].file1, "problem file")->required();
  add_tol(solve, fs[0]);
  add_csv(solve, fs[0]);
  solve->add_option("--theta", fs[0].theta,
                    "initial direction (expression, default pi/2, the "
                    "solution vanishing at a)");
  solve->add_option("--at", fs[0].at,
                    "comma-separated points to evaluate u and v at")
      ->delimiter(',');
  solve->callback([&] { run_solve(fs[0], out); });

  CLI::App* zeros = app.add_subcommand(
      "zeros",
      "Enumerate the zeros of one solution strictly inside (a, b), each "
      "bracketed to an explicit halfwidth with the minimal |v| over the "
      "bracket as a simplicity witness.");
  zeros->add_option("file", fs[1].file1, "problem file")->required();
  add_tol(zeros, fs[1]);
  add_csv(zeros, fs[1]);
  zeros->add_option("--theta", fs[1].theta,
                    "initial direction (expression, default pi/2)");
  zeros->callback([&] { run_zeros(fs[1], out); });

  CLI::App* compare_cmd = app.add_subcommand(
      "compare",
      "Evaluate the comparison certificate int A(u~' + s~u~)^2 + "
      "B(u~' + s~u~)u~ + Cu~^2 dx for the reference (tilde) equation's "
      "endpoint-vanishing solution against the target equation; strictly "
      "negative forces every target solution to vanish in (a, b).  Gauges "
      "come from the target file's [gauge], then the tilde file's, then "
      "F = 0, G' = s - r.");
  compare_cmd->add_option("tilde", fs[2].file1, "reference problem file")
      ->required();
  compare_cmd->add_option("target", fs[2].file2, "target problem file")
      ->required();
  add_tol(compare_cmd, fs[2]);
  add_sweep(compare_cmd, fs[2], 64);
  add_csv(compare_cmd, fs[2]);
  compare_cmd->callback([&] { run_compare(fs[2], out); });

  CLI::App* separation_cmd = app.add_subcommand(
      "separation",
      "Zero interlacing for one equation: with gauges F = 0, G = S - R "
      "the certificate integrand vanishes identically, so between "
      "consecutive zeros of the shot solution every independent solution "
      "has exactly one zero (or is a constant multiple, detected via the "
      "conserved weighted Wronskian).");
  separation_cmd->add_option("file", fs[3].file1, "problem file")->required();
  add_tol(separation_cmd, fs[3]);
  add_csv(separation_cmd, fs[3]);
  fs[3].theta = "0";
  separation_cmd->add_option(
      "--theta", fs[3].theta,
      "direction of the second solution (expression, default 0)");
  separation_cmd->callback([&] { run_separation(fs[3], out); });

  CLI::App* picone = app.add_subcommand(
      "picone",
      "Monotone-weight comparison for r = s sets: checks 0 < p <= p~ and "
      "q <= q~ pointwise and that mu = p~(s - s~)e^{-2S} is nondecreasing, "
      "then evaluates the certificate with G = 2F = 2S~ - 2S and "
      "cross-checks its middle part against the Stieltjes form "
      "-int v~^2 dmu.");
  picone->add_option("tilde", fs[4].file1, "reference problem file")
      ->required();
  picone->add_option("target", fs[4].file2, "target problem file")
      ->required();
  add_tol(picone, fs[4]);
  add_sweep(picone, fs[4], 64);
  add_csv(picone, fs[4]);
  picone->callback([&] { run_picone(fs[4], out); });

  CLI::App* jacobi_cmd = app.add_subcommand(
      "jacobi",
      "Discrete comparison for the three-term recurrence "
      "alpha_{n-1}u_{n-1} + beta_n u_n + alpha_n u_{n+1} = 0: evaluates "
      "the discrete certificate for the reference solution with "
      "u~_N0 = 0, sweeps target initial directions for sign changes, and "
      "cross-checks against the continuous certificate on the "
      "piecewise-constant embedding.  With one file the problem is "
      "compared against itself.");
  jacobi_cmd->add_option("tilde", fs[5].file1, "reference lattice file")
      ->required();
  jacobi_cmd->add_option("target", fs[5].file2,
                         "target lattice file (default: tilde)");
  add_sweep(jacobi_cmd, fs[5], 256);
  add_csv(jacobi_cmd, fs[5]);
  jacobi_cmd->callback([&] { run_jacobi(fs[5], out); });

  CLI::App* distro = app.add_subcommand(
      "distro",
      "Comparison of distributional potentials given through L^2 "
      "antiderivatives V (point masses = declared jumps of V): requires "
      "mu = V~ - V nondecreasing and evaluates the certificate "
      "-int u~^2 dmu with exact point-mass sums, cross-checked against "
      "the integration-by-parts route int 2(V~ - V)u~'u~.");
  distro->add_option("tilde", fs[6].file1, "reference potential file")
      ->required();
  distro->add_option("target", fs[6].file2, "target potential file")
      ->required();
  add_tol(distro, fs[6]);
  add_sweep(distro, fs[6], 64);
  add_csv(distro, fs[6]);
  distro->callback([&] { run_distro(fs[6], out); });

  fs[7].lo = "1.6";
  fs[7].hi = "1.7";
  CLI::App* leighton = app.add_subcommand(
      "leighton",
      "The flagship family: q~ = -1 against q = k - 1 - x on (0, pi) with "
      "u~ = sin and the linear gauges F = cx/2, G = cx, so the certificate "
      "is int_0^pi (k - x + c^2/4) e^{cx} sin^2 x dx; c = 0 gives the "
      "closed form pi(2k - pi)/4.  --threshold brackets the largest k the "
      "gauge family can certify.");
  leighton->add_option("--k", fs[7].k,
                       "family parameter k (expression; required unless "
                       "--threshold)");
  leighton->add_option("--c", fs[7].c,
                       "gauge slope c (expression, default 0)");
  add_tol(leighton, fs[7]);
  add_sweep(leighton, fs[7], 64);
  add_csv(leighton, fs[7]);
  leighton->add_flag("--threshold", fs[7].threshold,
                     "bisect for the largest certifiable k instead of "
                     "evaluating one (k, c) point");
  leighton->add_option("--lo", fs[7].lo,
                       "lower end of the threshold bracket (default 1.6)");
  leighton->add_option("--hi", fs[7].hi,
                       "upper end of the threshold bracket (default 1.7)");
  leighton->add_option("--width", fs[7].width,
                       "final bracket width (default 1e-4)");
  leighton->callback([&] { run_leighton(fs[7], out); });

  CLI::App* scan = app.add_subcommand(
      "scan",
      "Minimize the certificate over the linear gauge family G = cx, "
      "2F = G (which cancels the A and B parts of the integrand) by a "
      "uniform grid over [lo, hi] plus golden-section refinement; the "
      "full (c, value, err) table goes to --csv.  Works on two problem "
      "files or, with --k, on the built-in family q~ = -1 vs "
      "q = k - 1 - x.");
  scan->add_option("tilde", fs[8].file1, "reference problem file");
  scan->add_option("target", fs[8].file2, "target problem file");
  scan->add_option("--k", fs[8].k,
                   "use the built-in family with this k instead of files");
  scan->add_option("--lo", fs[8].lo, "scan range start (default 0)");
  scan->add_option("--hi", fs[8].hi, "scan range end (default 1.2)");
  scan->add_option("--steps", fs[8].steps, "grid points (default 25)");
  add_tol(scan, fs[8]);
  add_csv(scan, fs[8]);
  scan->callback([&] { run_scan(fs[8], out); });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(std::move(rev));
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const HypothesisError& e) {
    err << "hypothesis violated: " << e.what() << "\n";
    return 1;
  } catch (const NumericsError& e) {
    err << "numerics failure: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace oscert

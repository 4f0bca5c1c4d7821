#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oscert/comparison.hpp"
#include "oscert/errors.hpp"
#include "oscert/search.hpp"
#include "oscert/solver.hpp"

using namespace oscert;

namespace {

CoeffPtr wavy_set() {
  double b = 9.0;
  PiecewiseFunction p(0.0, b, parse_expr("1 + x/9"));
  PiecewiseFunction q(0.0, b, parse_expr("-2 + sin(x)"));
  PiecewiseFunction r(0.0, b, parse_expr("cos(x)/4"));
  PiecewiseFunction s(0.0, b, parse_expr("x/36"));
  return std::make_shared<CoefficientSet>(p, q, r, s);
}

bool identical_solutions(const Solution& a, const Solution& b) {
  if (a.mesh() != b.mesh()) return false;
  for (double x : a.sample_points()) {
    if (a.u(x) != b.u(x)) return false;
    if (a.v(x) != b.v(x)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("parallel theta sweep is bitwise identical to the serial one") {
  CoeffPtr c = wavy_set();
  SolveOptions opt;
  opt.tol = 1e-10;
  std::vector<Solution> serial =
      theta_sweep(c, 0.0, 24, opt, RunPolicy::Serial);
  std::vector<Solution> parallel =
      theta_sweep(c, 0.0, 24, opt, RunPolicy::Parallel);
  REQUIRE(serial.size() == 24);
  REQUIRE(parallel.size() == 24);
  for (int j = 0; j < 24; ++j)
    CHECK(identical_solutions(serial[j], parallel[j]));
}

TEST_CASE("parallel compare sweep reproduces the serial report") {
  CoeffPtr tilde = leighton_tilde();
  CoeffPtr target = leighton_target(1.672);
  Solution u = shoot_vanishing(tilde, 1e-9);
  double b = std::numbers::pi;
  ComparisonProblem prob(tilde, target, GaugeFunction::linear(0.0, b, 0.3),
                         GaugeFunction::linear(0.0, b, 0.6));
  Report rs = compare(prob, u, 64, 1e-10, RunPolicy::Serial);
  Report rp = compare(prob, u, 64, 1e-10, RunPolicy::Parallel);
  CHECK(rs.certificate.value == rp.certificate.value);
  CHECK(rs.certificate.err == rp.certificate.err);
  CHECK(rs.sweep.zero_free == rp.sweep.zero_free);
  CHECK(rs.sweep.min_zeros == rp.sweep.min_zeros);
  CHECK(rs.sweep.max_zeros == rp.sweep.max_zeros);
  CHECK(rs.sweep.zero_free_thetas == rp.sweep.zero_free_thetas);
}

TEST_CASE("parallel gauge scan is bitwise identical to the serial one") {
  CoeffPtr tilde = leighton_tilde();
  Solution u = shoot_vanishing(tilde, 1e-9);
  GaugeScan ss = linear_gauge_scan(tilde, leighton_target(1.672), u, 0.0, 1.2,
                                   17, 1e-6, RunPolicy::Serial);
  GaugeScan sp = linear_gauge_scan(tilde, leighton_target(1.672), u, 0.0, 1.2,
                                   17, 1e-6, RunPolicy::Parallel);
  CHECK(ss.c == sp.c);
  CHECK(ss.certificate.value == sp.certificate.value);
  CHECK(ss.certificate.err == sp.certificate.err);
  REQUIRE(ss.table.size() == sp.table.size());
  for (std::size_t i = 0; i < ss.table.size(); ++i) {
    CHECK(ss.table[i].c == sp.table[i].c);
    CHECK(ss.table[i].value == sp.table[i].value);
    CHECK(ss.table[i].err == sp.table[i].err);
  }
}

TEST_CASE("errors inside the parallel region surface as exceptions") {
  CoeffPtr c = wavy_set();
  SolveOptions opt;
  opt.tol = 1e-10;
  opt.max_steps = 4;
  CHECK_THROWS_AS(theta_sweep(c, 0.0, 8, opt, RunPolicy::Serial),
                  NumericsError);
  CHECK_THROWS_AS(theta_sweep(c, 0.0, 8, opt, RunPolicy::Parallel),
                  NumericsError);
}

#include "oscert/search.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oscert/errors.hpp"
#include "oscert/jacobi.hpp"

using namespace oscert;

namespace {

CoeffPtr harmonic_on(double b) {
  PiecewiseFunction one(0.0, b, Expr::number(1.0));
  PiecewiseFunction minus_one(0.0, b, Expr::number(-1.0));
  PiecewiseFunction zero(0.0, b, Expr::number(0.0));
  return std::make_shared<CoefficientSet>(one, minus_one, zero, zero);
}

}  // namespace

TEST_CASE("shooting finds the sine and reports honest misses") {
  Solution u = shoot_vanishing(leighton_tilde(), 1e-9);
  CHECK(std::fabs(u.u(std::numbers::pi / 2) - 1.0) < 1e-9);
  CHECK(std::fabs(u.u(std::numbers::pi)) < 1e-9);

  CHECK_THROWS_WITH_AS(shoot_vanishing(harmonic_on(3.0), 1e-9),
                       doctest::Contains("0.14112"), HypothesisError);
}

TEST_CASE("shooting on an embedded lattice problem matches the recurrence") {
  JacobiProblem p(0, 3, {1.0, 1.0, 1.0}, {-2.0, -2.0});
  CoeffPtr c = embed_on(p, 2.0);
  Solution u = shoot_vanishing(c, 1e-9);
  CHECK(std::fabs(u.u(0.5) - 0.5) < 1e-10);
  CHECK(std::fabs(u.u(1.0) - 1.0) < 1e-10);
  CHECK(std::fabs(u.u(2.0)) < 1e-10);
}

TEST_CASE("gauge scan of the self-comparison bottoms out at c = 0") {
  CoeffPtr tilde = leighton_tilde();
  Solution u = shoot_vanishing(tilde, 1e-9);
  GaugeScan scan =
      linear_gauge_scan(tilde, tilde, u, -1.0, 1.0, 9, 1e-6);
  CHECK(std::fabs(scan.c) <= 1e-6);
  CHECK(scan.certificate.value >= -scan.certificate.err);
  CHECK(scan.certificate.value <= 1e-9);
  for (const ScanPoint& p : scan.table) {
    CHECK(scan.certificate.value <= p.value);
    CHECK(p.value >= -1e-12);
  }
  for (std::size_t i = 1; i < scan.table.size(); ++i)
    CHECK(scan.table[i - 1].c < scan.table[i].c);
  CHECK(scan.table.size() >= 9);
}

TEST_CASE("gauge scan finds a negative certificate for the flagship k") {
  CoeffPtr tilde = leighton_tilde();
  Solution u = shoot_vanishing(tilde, 1e-9);
  GaugeScan scan = linear_gauge_scan(tilde, leighton_target(1.672), u, 0.0,
                                     1.2, 13, 1e-5);
  CHECK(scan.certificate.value < 0.0);
  CHECK(scan.certificate.verdict == Verdict::StrictlyNegative);
  CHECK(scan.c > 0.0);
  CHECK(std::fabs(scan.certificate.value) > 1e-4);
}

TEST_CASE("driver reproduces the closed form for the zero gauge") {
  Report rep = leighton_driver(2.0, 0.0, 1e-10, 0);
  double pi = std::numbers::pi;
  CHECK(std::fabs(rep.certificate.value - pi * (4.0 - pi) / 4.0) <= 1e-10);
  CHECK(rep.certificate.verdict == Verdict::Positive);
  CHECK_FALSE(rep.sweep_ran);

  std::mt19937 rng(911u);
  std::uniform_real_distribution<double> kd(0.0, 3.0);
  for (int i = 0; i < 10; ++i) {
    double k = kd(rng);
    Report r = leighton_driver(k, 0.0, 1e-10, 0);
    CHECK(std::fabs(r.certificate.value - pi * (2.0 * k - pi) / 4.0) <=
          1e-8);
  }
}

TEST_CASE("driver value increases strictly with k") {
  double prev = -1e300;
  for (double k : {1.0, 1.4, 1.672, 1.676, 2.0, 2.5}) {
    Report r = leighton_driver(k, 0.6, 1e-10, 0);
    CHECK(r.certificate.value > prev);
    prev = r.certificate.value;
  }
}

TEST_CASE("flagship improvement certifies and the sweep agrees") {
  Report rep = leighton_driver(1.672, 0.6, 1e-10, 64);
  CHECK(rep.certificate.verdict == Verdict::StrictlyNegative);
  CHECK(std::fabs(rep.certificate.value + 4.0610248449198851e-4) <= 1e-9);
  CHECK(rep.sweep_ran);
  CHECK(rep.sweep.n == 64);
  CHECK(rep.sweep.zero_free == 0);
  CHECK(rep.sweep.min_zeros >= 1);
  CHECK(rep.consistent);
}

TEST_CASE("threshold bracket pins the largest certifiable k") {
  ThresholdBracket tb = leighton_threshold(1.65, 1.69, 5e-4, 1e-6);
  CHECK(tb.hi - tb.lo <= 5e-4);
  CHECK(tb.scan_lo.certificate.verdict == Verdict::StrictlyNegative);
  CHECK(tb.scan_hi.certificate.verdict != Verdict::StrictlyNegative);
  double oracle = 1.6722228630020789;
  CHECK(std::fabs(0.5 * (tb.lo + tb.hi) - oracle) <= 5e-4);
  CHECK(std::fabs(tb.scan_lo.c - 0.62184425039523475) <= 2e-2);

  CHECK_THROWS_WITH_AS(leighton_threshold(1.9, 2.0, 1e-3, 1e-6),
                       doctest::Contains("not strictly negative"),
                       HypothesisError);
}

TEST_CASE("above the sharp k the sweep exhibits a zero-free direction") {
  Report rep = leighton_driver(1.676, 0.6, 1e-10, 64);
  CHECK(rep.certificate.verdict != Verdict::StrictlyNegative);
  CHECK(std::fabs(rep.certificate.value - 1.6676655811210534e-2) <= 1e-9);
  CHECK(rep.sweep.zero_free >= 1);
  CHECK(rep.sweep.min_zeros == 0);
  CHECK(rep.consistent);
}

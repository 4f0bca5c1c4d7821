#include "oscert/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "oscert/errors.hpp"

using namespace oscert;

namespace {

constexpr double kPi = std::numbers::pi;

CoeffPtr make_set(const char* p, const char* q, const char* r, const char* s,
                  double a, double b) {
  return std::make_shared<CoefficientSet>(
      PiecewiseFunction(a, b, parse_expr(p)),
      PiecewiseFunction(a, b, parse_expr(q)),
      PiecewiseFunction(a, b, parse_expr(r)),
      PiecewiseFunction(a, b, parse_expr(s)));
}

}  // namespace

TEST_CASE("constant coefficients solve exactly via the matrix exponential") {
  // p = 1, q = -1, r = s = 0: u'' + u = 0, so (0, 1) launches sin.
  CoeffPtr c = make_set("1", "-1", "0", "0", 0.0, 10.0);
  Solution sol = solve_ivp(c, 0.0, 0.0, 1.0);
  for (double x : {0.1, 1.0, kPi, 5.5, 10.0}) {
    CHECK(sol.u(x) == doctest::Approx(std::sin(x)).epsilon(1e-14));
    CHECK(sol.v(x) == doctest::Approx(std::cos(x)).epsilon(1e-14));
  }
  CHECK(sol.u(kPi) == std::sin(kPi));  // bitwise: closed form
}

TEST_CASE("exponential dichotomy solves exactly too") {
  // u'' - u = 0 from (1, 0): cosh.
  CoeffPtr c = make_set("1", "1", "0", "0", 0.0, 5.0);
  Solution sol = solve_ivp(c, 0.0, 1.0, 0.0);
  CHECK(sol.u(3.0) == doctest::Approx(std::cosh(3.0)).epsilon(1e-14));
  CHECK(sol.v(3.0) == doctest::Approx(std::sinh(3.0)).epsilon(1e-14));
}

TEST_CASE("smooth variable coefficients meet the tolerance") {
  // Airy-type q = -x: u'' + x u = 0 has verifiable residual and drift.
  CoeffPtr c = make_set("1", "-x", "0", "0", 0.0, 12.0);
  SolveOptions opt;
  opt.tol = 1e-11;
  Solution s1 = solve_ivp(c, 0.0, 1.0, 0.0, opt);
  Solution s2 = solve_ivp(c, 0.0, 0.0, 1.0, opt);
  CHECK(solution_residual(s1) < 1e-8);
  CHECK(wronskian_drift(s1, s2) < 100 * opt.tol);
}

TEST_CASE("two-sided solve from an interior point is continuous") {
  CoeffPtr c = make_set("1", "-x", "0", "0", 0.0, 12.0);
  Solution sol = solve_ivp(c, 6.0, 0.3, -0.2);
  CHECK(sol.u(6.0) == 0.3);
  CHECK(sol.v(6.0) == -0.2);
  // Dense output joins cleanly at the initial point and across records.
  double left = sol.u(6.0 - 1e-12);
  double right = sol.u(6.0 + 1e-12);
  CHECK(left == doctest::Approx(right).epsilon(1e-9));
  CHECK(sol.mesh().front() == 0.0);
  CHECK(sol.mesh().back() == 12.0);
}

TEST_CASE("first-order terms: r and s shift the quasi-derivative") {
  // p = 1, s = 1, r = 0, q = -2: u' = -u + v, v' = -2u.
  // Eigenvalues of [[-1, 1], [-2, 0]] are (-1 +/- i sqrt(7)) / 2.
  CoeffPtr c = make_set("1", "-2", "0", "1", 0.0, 8.0);
  Solution sol = solve_ivp(c, 0.0, 1.0, 0.0);
  double om = std::sqrt(7.0) / 2.0;
  auto exact_u = [&](double x) {
    return std::exp(-0.5 * x) *
           (std::cos(om * x) - 0.5 / om * std::sin(om * x));
  };
  for (double x : {0.5, 2.0, 7.5})
    CHECK(sol.u(x) == doctest::Approx(exact_u(x)).epsilon(1e-12));
}

TEST_CASE("piecewise coefficients join continuously") {
  PiecewiseFunction q(0.0, 2.0, {1.0},
                      {parse_expr("-1"), parse_expr("-4")});
  CoeffPtr c = std::make_shared<CoefficientSet>(
      PiecewiseFunction::constant(0.0, 2.0, 1.0), q,
      PiecewiseFunction::constant(0.0, 2.0, 0.0),
      PiecewiseFunction::constant(0.0, 2.0, 0.0));
  Solution sol = solve_ivp(c, 0.0, 0.0, 1.0);
  // sin(x) up to 1, then matched sin/cos of doubled frequency.
  CHECK(sol.u(1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-14));
  double u1 = std::sin(1.0), v1 = std::cos(1.0);
  double t = 0.7;
  double expect = u1 * std::cos(2 * t) + v1 * std::sin(2 * t) / 2.0;
  CHECK(sol.u(1.0 + t) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("find_zeros brackets every zero of sin on (0, 10)") {
  CoeffPtr c = make_set("1", "-1", "0", "0", 0.0, 10.0);
  Solution sol = solve_ivp(c, 0.0, 0.0, 1.0);
  ZeroList zs = find_zeros(sol, 0.0, 10.0, 1e-10);
  REQUIRE(zs.size() == 3);
  CHECK(zs[0].x == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(zs[1].x == doctest::Approx(2 * kPi).epsilon(1e-10));
  CHECK(zs[2].x == doctest::Approx(3 * kPi).epsilon(1e-10));
  for (const auto& z : zs) {
    CHECK(z.halfwidth <= 1e-9);
    CHECK(z.min_abs_v > 0.9);  // |cos| near 1 at zeros of sin
  }
}

TEST_CASE("find_zeros excludes endpoint zeros") {
  CoeffPtr c = make_set("1", "-1", "0", "0", 0.0, kPi);
  Solution sol = solve_ivp(c, 0.0, 0.0, 1.0);
  CHECK(find_zeros(sol, 0.0, kPi, 1e-9).empty());
}

TEST_CASE("find_zeros separates tight zero pairs") {
  // u'' + 400 u = 0: zeros every pi/20.
  CoeffPtr c = make_set("1", "-400", "0", "0", 0.0, 1.0);
  Solution sol = solve_ivp(c, 0.0, 0.0, 1.0);
  ZeroList zs = find_zeros(sol, 0.0, 1.0, 1e-10);
  REQUIRE(zs.size() == 6);
  for (std::size_t i = 0; i < zs.size(); ++i)
    CHECK(zs[i].x == doctest::Approx((i + 1) * kPi / 20.0).epsilon(1e-9));
}

TEST_CASE("trivial data needs explicit permission") {
  CoeffPtr c = make_set("1", "-1", "0", "0", 0.0, 1.0);
  CHECK_THROWS_AS(solve_ivp(c, 0.0, 0.0, 0.0), InputError);
  SolveOptions opt;
  opt.allow_trivial = true;
  Solution sol = solve_ivp(c, 0.0, 0.0, 0.0, opt);
  CHECK(sol.trivial());
  CHECK(sol.u(0.5) == 0.0);
  CHECK_THROWS_AS(find_zeros(sol, 0.0, 1.0, 1e-9), InputError);
}

TEST_CASE("theta sweep covers axis directions exactly") {
  CoeffPtr c = make_set("1", "-1", "0", "0", 0.0, 1.0);
  auto sols = theta_sweep(c, 0.0, 2);
  REQUIRE(sols.size() == 2);
  CHECK(sols[0].initial_u() == 1.0);
  CHECK(sols[0].initial_v() == 0.0);
  CHECK(sols[1].initial_u() == 0.0);
  CHECK(sols[1].initial_v() == 1.0);
}

TEST_CASE("singular endpoints are rejected by the solver") {
  PiecewiseFunction p(0.0, 1.0, parse_expr("sqrt(x)"), true, false);
  CoeffPtr c = std::make_shared<CoefficientSet>(
      p, PiecewiseFunction::constant(0.0, 1.0, -1.0),
      PiecewiseFunction::constant(0.0, 1.0, 0.0),
      PiecewiseFunction::constant(0.0, 1.0, 0.0));
  // The sweep would have to cross x = 0 where 1/p blows up, so the set
  // is rejected no matter where the initial point sits.
  CHECK_THROWS_AS(solve_ivp(c, 0.0, 0.0, 1.0), InputError);
  CHECK_THROWS_AS(solve_ivp(c, 0.5, 0.0, 1.0), InputError);
}

TEST_CASE("weighted wronskian stays flat when r differs from s") {
  // r - s nonzero makes the plain Wronskian drift, the weighted one not.
  CoeffPtr c = make_set("1+x/9", "-2+sin(x)", "1/4", "0", 0.0, 9.0);
  SolveOptions opt;
  opt.tol = 1e-11;
  Solution s1 = solve_ivp(c, 0.0, 1.0, 0.0, opt);
  Solution s2 = solve_ivp(c, 0.0, 0.0, 1.0, opt);
  CHECK(wronskian_drift(s1, s2) < 100 * opt.tol);
  CHECK(solution_residual(s1) < 1e-8);
  CHECK(solution_residual(s2) < 1e-8);
}

TEST_CASE("evaluation tolerates rounding-level endpoint overshoot") {
  // Grids built as a + (b - a) * t overshoot b by an ulp when a != 0.
  CoeffPtr c = make_set("1", "-1", "0", "0", -2.0, 7.341544);
  SolveOptions opt;
  opt.tol = 1e-10;
  Solution s = solve_ivp(c, -2.0, 0.0, 1.0, opt);
  CHECK_NOTHROW(s.state(s.a() + (s.b() - s.a())));
  CHECK(s.u(std::nextafter(s.b(), 1e300)) == s.u(s.b()));
  CHECK(s.u(std::nextafter(s.a(), -1e300)) == s.u(s.a()));
  CHECK_THROWS_AS(s.state(s.b() + 1e-6), InputError);
  CHECK_THROWS_AS(s.state(s.a() - 1e-6), InputError);
}

#include "oscert/expr.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oscert/errors.hpp"

using oscert::Expr;
using oscert::ParseError;
using oscert::parse_expr;

TEST_CASE("arithmetic and precedence") {
  CHECK(parse_expr("1+2*3")(0.0) == 7.0);
  CHECK(parse_expr("(1+2)*3")(0.0) == 9.0);
  CHECK(parse_expr("2^3^2")(0.0) == 512.0);      // right-associative
  CHECK(parse_expr("-2^2")(0.0) == -4.0);        // ^ binds tighter than unary -
  CHECK(parse_expr("2*-3")(0.0) == -6.0);
  CHECK(parse_expr("10-4-3")(0.0) == 3.0);       // left-associative
  CHECK(parse_expr("12/4/3")(0.0) == 1.0);
  CHECK(parse_expr("x^2-x")(3.0) == 6.0);
}

TEST_CASE("functions, pi, and step") {
  CHECK(parse_expr("sin(pi/2)")(0.0) == doctest::Approx(1.0));
  CHECK(parse_expr("cos(0)")(1.0) == 1.0);
  CHECK(parse_expr("exp(log(5))")(0.0) == doctest::Approx(5.0));
  CHECK(parse_expr("sqrt(abs(-9))")(0.0) == 3.0);
  CHECK(parse_expr("step(x)")(-1e-300) == 0.0);
  CHECK(parse_expr("step(x)")(0.0) == 1.0);  // right-continuous
  CHECK(parse_expr("step(x)")(2.0) == 1.0);
  CHECK(parse_expr("step(x-1/2)")(0.25) == 0.0);
  CHECK(parse_expr("step(x-1/2)")(0.5) == 1.0);
  CHECK(parse_expr("pi")(0.0) == std::numbers::pi);
}

TEST_CASE("parameters bind at parse time") {
  std::map<std::string, double> params{{"k", 1.5}, {"omega", 2.0}};
  Expr e = parse_expr("k*sin(omega*x)", params);
  CHECK(e(0.7) == doctest::Approx(1.5 * std::sin(1.4)));
  CHECK_THROWS_AS(parse_expr("k*x"), ParseError);
}

TEST_CASE("parse errors carry byte offsets") {
  auto offset_of = [](const char* text) -> std::size_t {
    try {
      parse_expr(text);
    } catch (const ParseError& e) {
      return e.offset();
    }
    return (std::size_t)-1;
  };
  CHECK(offset_of("1+*2") == 2);
  CHECK(offset_of("sin 2") == 4);     // missing '('
  CHECK(offset_of("1 + bogus") == 4);
  CHECK(offset_of("(1+2") == 0);      // unmatched '(' reported at it
  CHECK(offset_of("1+2)") == 3);      // trailing input
}

TEST_CASE("depends_on_x distinguishes constants") {
  CHECK_FALSE(parse_expr("1+pi^2").depends_on_x());
  CHECK(parse_expr("sin(x)").depends_on_x());
  std::map<std::string, double> params{{"c", 3.0}};
  CHECK_FALSE(parse_expr("c*2", params).depends_on_x());
}

TEST_CASE("print-parse round trip preserves the tree") {
  const char* samples[] = {
      "x^2-3*x+2",       "2^3^x",          "-(x+1)*sin(x)",
      "1/(1+x^2)",       "a*exp(-b*x)+pi", "step(x-1/2)*x",
      "x-(1-x)",         "-x^2",           "--x",
      "sqrt(abs(x))/x",  "(x+1)/(x-1)/x",  "x*(2-x)*(3-x)",
  };
  std::map<std::string, double> params{{"a", 0.5}, {"b", 2.25}};
  for (const char* text : samples) {
    CAPTURE(text);
    Expr e = parse_expr(text, params);
    Expr back = parse_expr(e.to_string(), params);
    CHECK(e.same_tree(back));
  }
}

TEST_CASE("round trip evaluates identically at random points") {
  std::mt19937 rng(20260814);
  std::uniform_real_distribution<double> pick(-3.0, 3.0);
  std::map<std::string, double> params{{"a", 0.5}, {"b", 2.25}};
  const char* samples[] = {"a*sin(b*x)-x^3/7", "exp(x/3)*cos(x^2)",
                           "step(x)*x^2+step(-x)/(1+x^2)"};
  for (const char* text : samples) {
    Expr e = parse_expr(text, params);
    Expr back = parse_expr(e.to_string(), params);
    for (int i = 0; i < 100; ++i) {
      double x = pick(rng);
      CHECK(e(x) == back(x));
    }
  }
}

TEST_CASE("combinators build printable trees") {
  Expr x = Expr::variable();
  Expr e = Expr::number(2.0) * x + Expr::call(Expr::Func::Sin, x);
  CHECK(e(1.0) == doctest::Approx(2.0 + std::sin(1.0)));
  Expr back = parse_expr(e.to_string());
  for (double t : {-1.0, 0.0, 0.5, 2.0}) CHECK(e(t) == back(t));
}

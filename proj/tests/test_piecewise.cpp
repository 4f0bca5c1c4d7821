#include "oscert/piecewise.hpp"

#include <doctest.h>

#include "oscert/errors.hpp"

using oscert::combine;
using oscert::Expr;
using oscert::InputError;
using oscert::merge_breakpoints;
using oscert::parse_expr;
using oscert::PiecewiseFunction;

TEST_CASE("piece lookup is right-continuous at breakpoints") {
  PiecewiseFunction f(0.0, 2.0, {1.0},
                      {parse_expr("x"), parse_expr("10+x")});
  CHECK(f(0.5) == 0.5);
  CHECK(f(1.0) == 11.0);  // breakpoint belongs to the right piece
  CHECK(f(2.0) == 12.0);
  CHECK(f.piece_index(0.999999) == 0);
  CHECK(f.piece_index(1.0) == 1);
}

TEST_CASE("validation rejects bad partitions") {
  CHECK_THROWS_AS(PiecewiseFunction(1.0, 0.0, parse_expr("x")), InputError);
  CHECK_THROWS_AS(PiecewiseFunction(0.0, 1.0, {0.5, 0.5},
                                    {parse_expr("1"), parse_expr("2"),
                                     parse_expr("3")}),
                  InputError);
  CHECK_THROWS_AS(PiecewiseFunction(0.0, 1.0, {2.0},
                                    {parse_expr("1"), parse_expr("2")}),
                  InputError);
}

TEST_CASE("restrict_upper drops trailing pieces") {
  PiecewiseFunction f(0.0, 3.0, {1.0, 2.0},
                      {parse_expr("1"), parse_expr("2"), parse_expr("3")});
  PiecewiseFunction g = f.restrict_upper(1.5);
  CHECK(g.b() == 1.5);
  CHECK(g.breakpoints().size() == 1);
  CHECK(g(1.2) == 2.0);
  PiecewiseFunction h = f.restrict_upper(1.0);
  CHECK(h.breakpoints().empty());
  CHECK(h(0.7) == 1.0);
}

TEST_CASE("combine merges partitions") {
  PiecewiseFunction f(0.0, 3.0, {1.0}, {parse_expr("x"), parse_expr("2*x")});
  PiecewiseFunction g(0.0, 3.0, {2.0}, {parse_expr("1"), parse_expr("3")});
  PiecewiseFunction sum =
      combine(f, g, [](const Expr& a, const Expr& b) { return a + b; });
  CHECK(sum.breakpoints() == std::vector<double>{1.0, 2.0});
  CHECK(sum(0.5) == 1.5);
  CHECK(sum(1.5) == 4.0);
  CHECK(sum(2.5) == 8.0);
}

TEST_CASE("merge_breakpoints clips and dedupes") {
  std::vector<double> u{0.5, 1.0, 7.0};
  std::vector<double> v{1.0, 2.0};
  CHECK(merge_breakpoints({&u, &v}, 0.0, 3.0) ==
        std::vector<double>{0.5, 1.0, 2.0});
}

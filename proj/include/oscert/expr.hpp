#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace oscert {

/// An immutable scalar expression in one variable `x`.
///
/// Supports +, -, *, /, ^ (right-associative), unary minus, the functions
/// sin, cos, exp, log, sqrt, abs, step (step(t) = 1 for t >= 0, else 0),
/// the constant pi, and named parameters bound to values at parse time.
///
/// Construction goes through parse_expr() or the combinators below.  The
/// expression keeps its syntax tree (for printing and structural tests) and
/// a compiled postfix program used by operator(), so repeated evaluation is
/// cheap and thread safe.
class Expr {
 public:
  enum class Func { Sin, Cos, Exp, Log, Sqrt, Abs, Step };

  Expr() = default;  // empty; evaluates to 0

  /// Evaluate at x.
  double operator()(double x) const;

  /// True when the expression never reads x.
  bool depends_on_x() const;

  /// Render as text that parse_expr() maps back to the identical tree.
  std::string to_string() const;

  /// Structural equality of syntax trees.
  bool same_tree(const Expr& other) const;

  bool empty() const { return root_ == nullptr; }

  // Combinators for building expressions programmatically.
  static Expr number(double value);
  static Expr variable();
  static Expr parameter(std::string name, double value);
  static Expr call(Func f, Expr arg);
  friend Expr operator+(Expr a, Expr b);
  friend Expr operator-(Expr a, Expr b);
  friend Expr operator*(Expr a, Expr b);
  friend Expr operator/(Expr a, Expr b);
  friend Expr operator-(Expr a);
  static Expr pow(Expr base, Expr exponent);

  // Syntax tree node; defined in expr.cpp.
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

 private:
  struct Ins {
    int op;
    double imm;
  };

  explicit Expr(NodePtr root);
  static Expr make_bin(char op, Expr a, Expr b);
  void compile();

  NodePtr root_;
  std::vector<Ins> prog_;
  int stack_need_ = 0;
  bool uses_x_ = false;

  friend Expr parse_expr(std::string_view, const std::map<std::string, double>&);
};

/// Parse expression text.  Free names other than x, pi, and the built-in
/// functions must appear in `params` and are bound to their values.
/// Throws ParseError (with byte offset) on malformed text or unbound names.
Expr parse_expr(std::string_view text,
                const std::map<std::string, double>& params = {});

}  // namespace oscert

#pragma once

#include <vector>

#include "oscert/expr.hpp"

namespace oscert {

/// A function on a closed interval [a, b] assembled from expression pieces.
///
/// With interior breakpoints t_1 < ... < t_m the pieces cover
/// [a, t_1), [t_1, t_2), ..., [t_m, b]; evaluation at a breakpoint takes the
/// piece on the right (right-continuous convention).  Endpoints may be
/// declared singular, which quadrature treats as integrable-singularity
/// markers rather than evaluation points.
class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;

  /// Single piece on [a, b].
  PiecewiseFunction(double a, double b, Expr piece, bool singular_a = false,
                    bool singular_b = false);

  /// pieces.size() must be breakpoints.size() + 1; breakpoints must be
  /// strictly increasing and lie strictly inside (a, b).
  PiecewiseFunction(double a, double b, std::vector<double> breakpoints,
                    std::vector<Expr> pieces, bool singular_a = false,
                    bool singular_b = false);

  static PiecewiseFunction constant(double a, double b, double value);

  double operator()(double x) const;

  double a() const { return a_; }
  double b() const { return b_; }
  bool singular_a() const { return singular_a_; }
  bool singular_b() const { return singular_b_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<Expr>& pieces() const { return pieces_; }

  /// Index of the piece whose half-open interval contains x.
  std::size_t piece_index(double x) const;
  /// The sub-interval [lo, hi] covered by piece i.
  void piece_span(std::size_t i, double& lo, double& hi) const;

  /// Same breakpoints, each piece transformed by f.
  template <typename F>
  PiecewiseFunction map(F&& f) const {
    std::vector<Expr> out;
    out.reserve(pieces_.size());
    for (const Expr& e : pieces_) out.push_back(f(e));
    return PiecewiseFunction(a_, b_, breakpoints_, std::move(out), singular_a_,
                             singular_b_);
  }

  /// Restrict to [a, new_b] with a <= new_b <= b, dropping pieces beyond.
  PiecewiseFunction restrict_upper(double new_b) const;

 private:
  double a_ = 0.0, b_ = 1.0;
  std::vector<double> breakpoints_;
  std::vector<Expr> pieces_;
  bool singular_a_ = false, singular_b_ = false;
};

/// Sorted union of several breakpoint lists (exact double comparison),
/// clipped to the open interval (a, b).
std::vector<double> merge_breakpoints(
    std::initializer_list<const std::vector<double>*> lists, double a,
    double b);

/// Combine two piecewise functions on the same interval with a binary
/// expression combinator applied piece by piece on the merged partition.
template <typename F>
PiecewiseFunction combine(const PiecewiseFunction& f,
                          const PiecewiseFunction& g, F&& op) {
  std::vector<double> bks =
      merge_breakpoints({&f.breakpoints(), &g.breakpoints()}, f.a(), f.b());
  std::vector<Expr> pieces;
  pieces.reserve(bks.size() + 1);
  for (std::size_t i = 0; i <= bks.size(); ++i) {
    double lo = i == 0 ? f.a() : bks[i - 1];
    double hi = i == bks.size() ? f.b() : bks[i];
    double mid = 0.5 * (lo + hi);
    pieces.push_back(op(f.pieces()[f.piece_index(mid)],
                        g.pieces()[g.piece_index(mid)]));
  }
  return PiecewiseFunction(f.a(), f.b(), std::move(bks), std::move(pieces),
                           f.singular_a() || g.singular_a(),
                           f.singular_b() || g.singular_b());
}

}  // namespace oscert

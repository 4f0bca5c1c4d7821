#include "oscert/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "oscert/errors.hpp"

namespace oscert {

PiecewiseFunction::PiecewiseFunction(double a, double b, Expr piece,
                                     bool singular_a, bool singular_b)
    : PiecewiseFunction(a, b, {}, {std::move(piece)}, singular_a, singular_b) {}

PiecewiseFunction::PiecewiseFunction(double a, double b,
                                     std::vector<double> breakpoints,
                                     std::vector<Expr> pieces, bool singular_a,
                                     bool singular_b)
    : a_(a),
      b_(b),
      breakpoints_(std::move(breakpoints)),
      pieces_(std::move(pieces)),
      singular_a_(singular_a),
      singular_b_(singular_b) {
  if (!(a_ < b_))
    throw InputError("piecewise function needs a < b, got [" +
                     std::to_string(a_) + ", " + std::to_string(b_) + "]");
  if (pieces_.size() != breakpoints_.size() + 1)
    throw InputError("piecewise function needs one more piece than "
                     "breakpoints");
  double prev = a_;
  for (double t : breakpoints_) {
    if (!(prev < t && t < b_))
      throw InputError("breakpoint " + std::to_string(t) +
                       " not strictly increasing inside (" +
                       std::to_string(a_) + ", " + std::to_string(b_) + ")");
    prev = t;
  }
}

PiecewiseFunction PiecewiseFunction::constant(double a, double b,
                                              double value) {
  return PiecewiseFunction(a, b, Expr::number(value));
}

std::size_t PiecewiseFunction::piece_index(double x) const {
  // Breakpoints t_i belong to the piece on their right.
  return (std::size_t)(std::upper_bound(breakpoints_.begin(),
                                        breakpoints_.end(), x) -
                       breakpoints_.begin());
}

double PiecewiseFunction::operator()(double x) const {
  return pieces_[piece_index(x)](x);
}

void PiecewiseFunction::piece_span(std::size_t i, double& lo,
                                   double& hi) const {
  lo = i == 0 ? a_ : breakpoints_[i - 1];
  hi = i == breakpoints_.size() ? b_ : breakpoints_[i];
}

PiecewiseFunction PiecewiseFunction::restrict_upper(double new_b) const {
  if (!(a_ < new_b && new_b <= b_))
    throw InputError("restriction endpoint outside interval");
  std::vector<double> bks;
  std::vector<Expr> pieces;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    double lo, hi;
    piece_span(i, lo, hi);
    if (lo >= new_b) break;
    if (i > 0) bks.push_back(breakpoints_[i - 1]);
    pieces.push_back(pieces_[i]);
  }
  return PiecewiseFunction(a_, new_b, std::move(bks), std::move(pieces),
                           singular_a_, new_b == b_ && singular_b_);
}

std::vector<double> merge_breakpoints(
    std::initializer_list<const std::vector<double>*> lists, double a,
    double b) {
  std::vector<double> out;
  for (const auto* l : lists)
    for (double t : *l)
      if (a < t && t < b) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace oscert

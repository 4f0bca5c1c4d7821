#pragma once

#include <memory>
#include <vector>

#include "oscert/piecewise.hpp"
#include "oscert/quadrature.hpp"

namespace oscert {

struct ValidationOptions {
  double tol = 1e-8;       // accuracy demanded of the integrability probes
  int samples_per_piece = 48;
  bool check_integrability = true;
};

/// The coefficient quadruple (p, q, r, s) of
///   -(p (u' + s u))' + r p (u' + s u) + q u = 0
/// on a common interval [a, b], validated on construction:
///   * p > 0 at sample points (witness reported on failure),
///   * 1/p, q, r, s integrable (probed by adaptive quadrature, honoring
///     declared singular endpoints).
/// Also carries the antiderivatives S of s and R of r vanishing at a,
/// which the certificate weights e^{S-R} and friends are built from.
class CoefficientSet {
 public:
  CoefficientSet(PiecewiseFunction p, PiecewiseFunction q,
                 PiecewiseFunction r, PiecewiseFunction s,
                 ValidationOptions opt = {});

  double a() const { return p_.a(); }
  double b() const { return p_.b(); }
  const PiecewiseFunction& p() const { return p_; }
  const PiecewiseFunction& q() const { return q_; }
  const PiecewiseFunction& r() const { return r_; }
  const PiecewiseFunction& s() const { return s_; }

  /// Antiderivative of s vanishing at a.
  double S(double x) const { return S_(x); }
  /// Antiderivative of r vanishing at a.
  double R(double x) const { return R_(x); }
  double antiderivative_error() const;

  /// Union of the four coefficients' interior breakpoints.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// Per-segment view on the union partition.  `constant` is set when all
  /// four coefficients are constant expressions there; the Expr handles
  /// give one-sided-correct evaluation at the segment ends.
  struct Segment {
    double lo, hi;
    bool constant;
    double pv, qv, rv, sv;    // values when constant
    Expr p, q, r, s;
  };
  const std::vector<Segment>& segments() const { return segments_; }

  /// True when 1/p was declared singular at the endpoint.
  bool singular_a() const {
    return p_.singular_a() || q_.singular_a() || r_.singular_a() ||
           s_.singular_a();
  }
  bool singular_b() const {
    return p_.singular_b() || q_.singular_b() || r_.singular_b() ||
           s_.singular_b();
  }

  /// Same coefficients on [a, new_b].
  std::shared_ptr<const CoefficientSet> restrict_upper(double new_b) const;

 private:
  void validate(const ValidationOptions& opt);
  void build_segments();

  PiecewiseFunction p_, q_, r_, s_;
  std::vector<double> breakpoints_;
  std::vector<Segment> segments_;
  Antiderivative S_, R_;
};

using CoeffPtr = std::shared_ptr<const CoefficientSet>;

/// A gauge x -> value built from a prescribed derivative: F with F' given
/// piecewise and F(a) fixed.  Evaluation integrates the derivative once
/// (antiderivative table), so F is continuous and piecewise smooth.
class GaugeFunction {
 public:
  GaugeFunction() = default;
  GaugeFunction(PiecewiseFunction derivative, double value_at_a,
                double tol = 1e-12);

  double operator()(double x) const;
  double derivative(double x) const { return deriv_(x); }
  const PiecewiseFunction& derivative_function() const { return deriv_; }
  bool zero() const { return zero_; }

  static GaugeFunction zero_gauge(double a, double b);
  /// F(x) = slope * (x - a), i.e. constant derivative, vanishing at a.
  static GaugeFunction linear(double a, double b, double slope);

 private:
  PiecewiseFunction deriv_;
  Antiderivative anti_;
  double value_at_a_ = 0.0;
  bool zero_ = true;
  // Closed form when every derivative piece is constant: F is piecewise
  // linear with these slopes and cumulative node values.
  bool piecewise_linear_ = false;
  std::vector<double> nodes_, node_values_, slopes_;
};

}  // namespace oscert

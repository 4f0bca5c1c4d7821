#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "oscert/coefficients.hpp"
#include "oscert/distributional.hpp"
#include "oscert/jacobi.hpp"

namespace oscert {

enum class ProblemKind { Coefficients, Potential, Jacobi };

/// A validated problem description read from an INI-style text file.
///
/// One `key = value` pair per line, `#` starts a comment, sections:
///   [interval]      a, b: constant expressions (pi is allowed)
///   [params]        name = value pairs, usable in every later expression
///   [coefficients]  p, q, r, s: expressions in x; optional breakpoints list
///   [gauge]         F_deriv, G_deriv: expressions in x (optional section)
///   [potential]     V: expression in x, plus `jump at=<x> weight=<w>` lines
///   [jacobi]        N0, N1: integers; alpha: list; exactly one of v, beta
///
/// Exactly one of [coefficients], [potential], [jacobi] must be present;
/// [interval] is required with the first two and rejected with [jacobi].
/// Lists are comma separated (whitespace also works when no comma appears).
struct ProblemFile {
  std::string path;
  ProblemKind kind = ProblemKind::Coefficients;
  double a = 0.0, b = 0.0;
  std::map<std::string, double> params;

  CoeffPtr coefficients;                               // kind Coefficients
  std::shared_ptr<PotentialAntiderivative> potential;  // kind Potential
  std::shared_ptr<JacobiProblem> jacobi;               // kind Jacobi

  bool has_gauge = false;
  GaugeFunction F, G;  // zero gauges unless [gauge] was given

  /// The coefficient set the problem denotes: the parsed set, the
  /// potential's realization (1, -V^2, -V, -V), or the lattice embedding
  /// on [N0, N1].
  CoeffPtr realized() const;
};

ProblemFile load_problem(const std::string& path);
/// Parse from text already in memory; `name` labels error messages.
ProblemFile parse_problem(std::string_view text, const std::string& name);

/// Evaluate constant expression text (numbers, pi, bound params; x is
/// rejected).  Shared by interval bounds, list entries, and CLI flags.
double const_value(std::string_view text,
                   const std::map<std::string, double>& params = {});

}  // namespace oscert

#pragma once

#include <stdexcept>
#include <string>

namespace oscert {

/// Malformed or inconsistent user input: bad expression text, bad problem
/// file, invalid coefficient data.  Maps to CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Expression text that does not parse.  Carries the byte offset of the
/// first offending character.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : InputError(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// A mathematical hypothesis required by a comparison routine fails on the
/// given data (e.g. the comparison measure decreases somewhere).  Maps to
/// CLI exit code 1.
class HypothesisError : public std::runtime_error {
 public:
  explicit HypothesisError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Numerical machinery could not reach the requested accuracy: quadrature
/// did not converge, step size underflowed, shooting found no vanishing
/// solution.  Maps to CLI exit code 1.
class NumericsError : public std::runtime_error {
 public:
  explicit NumericsError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace oscert

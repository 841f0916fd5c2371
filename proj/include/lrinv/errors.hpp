#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrinv {

/// Syntax error produced by the expression parser. `offset()` is the byte
/// position in the source text where the offending token starts (equal to
/// the source length for unexpected end of input).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " (offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation failure: domain error or non-finite intermediate result.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure in an integrator or quadrature routine.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lrinv

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "lrinv/errors.hpp"

namespace lrinv::expr {

/// Built-in single-argument functions. Angles are radians, log is natural.
enum class Func { sin, cos, tan, exp, log, sqrt, abs };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { constant, time_var, negate, add, sub, mul, div, pow, call };
  Kind kind = Kind::constant;
  double value = 0.0;      // Kind::constant
  Func func = Func::sin;   // Kind::call
  NodePtr lhs, rhs;        // negate and call use lhs only
};

/// Parsed arithmetic expression over the single variable `t`.
///
/// Grammar, lowest to highest precedence:
///
///   expr   := term (("+" | "-") term)*
///   term   := factor (("*" | "/") factor)*
///   factor := "-" factor | power
///   power  := atom ("^" factor)?            -- right-associative
///   atom   := number | "t" | ident "(" expr ")" | "(" expr ")"
///
/// Unary minus binds looser than "^": "-2^2" is -(2^2) = -4, while
/// "2^-2" is legal and equals 0.25. "2^3^2" is 2^(3^2) = 512. Numbers
/// are decimal with an optional exponent part. Evaluation never yields a
/// silent NaN/Inf: non-finite results raise EvalError.
class ExprAst {
 public:
  /// Throws ParseError with a byte offset and the set of expected tokens.
  static ExprAst parse(std::string_view source);

  /// Throws EvalError on domain errors or non-finite results.
  double evaluate(double t) const;

  /// Prints a form that reparses to a structurally identical tree.
  std::string print() const;

  const NodePtr& root() const { return root_; }

 private:
  explicit ExprAst(NodePtr root) : root_(std::move(root)) {}
  NodePtr root_;
};

/// Real-valued function of time: either a parsed expression or a named
/// closed form with bound parameters (catalog models). Immutable, cheap to
/// copy, safe to evaluate concurrently. Non-finite values raise EvalError.
class TimeFunction {
 public:
  TimeFunction();  // constant zero

  static TimeFunction parse(std::string_view source);
  static TimeFunction constant(double value);
  static TimeFunction native(std::string label, std::function<double(double)> fn);

  double operator()(double t) const;

  /// Source text for parsed expressions, label for native entries.
  const std::string& describe() const { return label_; }

 private:
  std::shared_ptr<const ExprAst> ast_;
  std::shared_ptr<const std::function<double(double)>> fn_;
  std::string label_;
};

}  // namespace lrinv::expr

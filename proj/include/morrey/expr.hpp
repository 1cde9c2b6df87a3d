// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "morrey/grid.hpp"

namespace morrey {

/// Immutable expression tree over literals, x1..xn, the radial variable r = |x|,
/// + - * / ^ and abs, exp, log, sqrt, min, max.
///
///   expr    = term { ("+" | "-") term }
///   term    = unary { ("*" | "/") unary }
///   unary   = ("-" | "+") unary | power
///   power   = primary [ "^" unary ]            (right-associative)
///   primary = number | "x" digits | "r" | func "(" expr { "," expr } ")" | "(" expr ")"
class Expression {
 public:
  enum class Kind { Number, Variable, Radius, Negate, Add, Sub, Mul, Div, Pow, Abs, Exp, Log, Sqrt, Min, Max };

  struct Node {
    Kind kind;
    double value = 0.0;  // Number
    int index = 0;       // Variable, 1-based
    std::vector<std::shared_ptr<const Node>> args;
  };

  explicit Expression(std::shared_ptr<const Node> root);

  /// Largest variable index used; `r` counts as 1.
  int arity() const { return arity_; }
  bool uses_radius() const { return uses_radius_; }

  /// IEEE semantics; non-finite results are returned, not thrown.
  /// Errors: BadParams when the point has fewer coordinates than arity().
  double eval(const Coord& point) const;

  /// Fully parenthesized canonical form; parse(to_string()) == *this.
  std::string to_string() const;

  bool operator==(const Expression& other) const;

  const Node& root() const { return *root_; }

 private:
  std::shared_ptr<const Node> root_;
  int arity_ = 0;
  bool uses_radius_ = false;
};

/// Errors: ParseError (Syntax or UnknownIdentifier) carrying the byte offset.
Expression parse(std::string_view src);

double eval(const Expression& e, const Coord& point);

}  // namespace morrey

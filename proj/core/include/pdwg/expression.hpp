// Arithmetic expressions in the variables x and y, used by problem config
// files. Grammar: numbers, x, y, pi, + - * / ^ (right-associative power),
// unary minus, parentheses, and the functions sin, cos, exp, ln.

#pragma once

#include <memory>
#include <string>

namespace pdwg {

class Expression {
public:
  /// Parses source text; throws ExpressionError with position information.
  static Expression parse(const std::string& text);

  double operator()(double x, double y) const;

  const std::string& text() const { return text_; }

  struct Node;

private:
  Expression(std::shared_ptr<const Node> root, std::string text);

  std::shared_ptr<const Node> root_;
  std::string text_;
};

} // namespace pdwg

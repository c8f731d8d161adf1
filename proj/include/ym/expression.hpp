#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace ym {

/// Compiled arithmetic expression in one variable `x`.
///
/// Grammar (recursive descent, usual precedence, `^` right-associative):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := ('+' | '-') unary | power
///     power   := primary ('^' unary)?
///     primary := number | 'x' | 'pi' | 'e' | call | '(' expr ')'
///     call    := name '(' expr (',' expr)? ')'
///
/// Functions: sin, cos, exp, log, sqrt, abs (one argument) and pow (two).
/// Throws ParseError with a 1-based column on malformed input.
class Expression {
 public:
  static Expression parse(std::string_view text);

  double operator()(double x) const;
  const std::string& source() const noexcept { return source_; }

  struct Node;

 private:
  Expression(std::string source, std::shared_ptr<const Node> root)
      : source_(std::move(source)), root_(std::move(root)) {}

  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace ym

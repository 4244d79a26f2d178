#pragma once

#include "reasoner/expr.hpp"

#include <string>
#include <string_view>

namespace reasoner {

/// Parses the ASCII equation syntax:
///
///     eqset    := equation ("or" equation)*
///     equation := expr "=" expr
///     expr     := term (("+" | "-") term)*
///     term     := factor ("*" factor | factor-starting-with-x-sqrt-or-paren)*
///     factor   := ["-"] atom ["^" posint]
///     atom     := integer ["/" posint] | "x" | "(" expr ")" | "sqrt" "(" expr ")"
///
/// Whitespace is insignificant. `-x^2` is -(x^2); `3x` and `2(x+1)` are
/// products. Throws SyntaxError or VariableError.
EqSet parse_eqset(std::string_view text);
Equation parse_equation(std::string_view text);
Expr parse_expr(std::string_view text);

/// Minimal-parenthesis rendering that parses back to the same tree.
/// Top-level binary +/- are spaced, nested ones are not: `(-x+1)^2 - 9 = 0`.
std::string render(const Expr& e);
std::string render(const Equation& e);
std::string render(const EqSet& s);

} // namespace reasoner

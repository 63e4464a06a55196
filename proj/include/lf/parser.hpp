#ifndef LF_PARSER_HPP
#define LF_PARSER_HPP

#include <string>

#include "lf/expr.hpp"

namespace lf {

// Parses the infix grammar: numbers (integer, decimal, rational a/b),
// identifiers (t, q1..qn, v1..vn, a1..an reserved, anything else a parameter),
// + - * / ^ with standard precedence, unary minus, functions ln/exp/sin/cos/abs,
// parentheses. Whitespace insensitive. Exponents must normalize to rational
// constants. `declared_n` > 0 enables the coordinate index range check.
Expr parse(const std::string& text, int declared_n = 0);

}  // namespace lf

#endif

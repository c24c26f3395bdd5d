#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qtori/quaternion.hpp"

namespace qtori::qexpr {

// Grammar, lowest precedence first:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/' | <implicit>) factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := number | 'pi' | 'e' | 'i' | 'j' | 'k' | 'exp' '(' expr ')' | '(' expr ')'
// Implicit multiplication applies when the left operand ends in a number or ')'
// and the right operand starts with a unit i/j/k or '('. Products keep operand
// order and a / b means a b^{-1}.
struct Expr {
  enum class Kind { Number, Pi, Euler, UnitI, UnitJ, UnitK, Neg, Add, Sub, Mul, Div, Pow, Exp };

  Kind kind = Kind::Number;
  double value = 0.0;      // Number only
  std::string literal;     // Number only, as written
  std::vector<Expr> args;  // operands, left to right
  std::size_t offset = 0;  // byte offset of the node in the source text
};

// Throws SyntaxError (with byte offset) on malformed input.
Expr parse(std::string_view text);

// Throws DivisionByZero, ExponentBaseUnsupported.
Quaternion eval(const Expr& expr);

// Fully parenthesised rendering that parses back to an equivalent tree.
std::string to_string(const Expr& expr);

inline Quaternion evaluate(std::string_view text) { return eval(parse(text)); }

}  // namespace qtori::qexpr

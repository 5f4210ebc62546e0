#pragma once

#include <string_view>

#include "nevlab/expr.hpp"

namespace nevlab {

/// Parses the ASCII expression grammar:
///
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := "-" factor | base ("^" signed_int)?
///   base   := number | "z" | "i" | "(" expr ")" | ident "(" expr ")"
///   ident  := "exp" | "sin" | "cos" | "tan"
///
/// "^" binds tighter than unary minus, so "-z^2" is -(z^2). sin, cos and tan
/// are rewritten in terms of exp. A minus directly in front of a numeric
/// literal folds into the constant.
///
/// Throws ParseError (with a byte offset) on malformed input or an unknown
/// identifier.
MeroExpr parse_expr(std::string_view text);

}  // namespace nevlab

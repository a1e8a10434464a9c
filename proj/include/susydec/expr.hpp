#pragma once

#include <string>

#include "susydec/errors.hpp"
#include "susydec/polynomial.hpp"

namespace susydec {

struct ExpressionSource {
    std::string text;
    std::string origin;  // file name or "flag"; used in diagnostics
};

/// Recursive-descent parser for polynomial expressions in x.
///
///   expression := term (('+'|'-') term)*
///   term       := factor (('*'|'/') factor)*
///   factor     := number | 'x' ('^' unsigned-integer)? | '(' expression ')'
///               | '-' factor
///
/// Division is permitted only by numeric (x-free) subexpressions. Numbers
/// are decimal with optional exponent. Whitespace is insignificant.
/// Throws ParseError (syntax, with character offset) or NonPolynomialError
/// (division by an x-dependent factor, unsupported function names).
Polynomial parse_superpotential(const ExpressionSource& src);

/// Canonical rendering, highest degree first, 17 significant digits.
/// parse_superpotential(format_polynomial(p)) reproduces p exactly.
std::string format_polynomial(const Polynomial& p);

}  // namespace susydec

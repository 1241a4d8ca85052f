#pragma once

#include <string>

#include "ltforge/local_field.hpp"

namespace ltforge {

// Element expressions over a tower:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/')? unary)*        juxtaposition multiplies
//   unary  := '-' unary | power
//   power  := atom ('^' exponent | superscript digits)?
//   atom   := integer | 'p' | 'w' | 'ϖ' | 'z' | 'ζ' | '(' expr ')'
// w is the uniformiser, z the generator of the unramified ring. Exponents are
// integers, negative ones allowed on invertible bases.
FieldElement parse_element(const std::string& text, const LocalField& F, long prec);

// An expression that parses back to x at precision x.precision().
std::string to_expression(const FieldElement& x);

}  // namespace ltforge

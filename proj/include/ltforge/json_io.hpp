#pragma once

#include <json.hpp>

#include "ltforge/local_field.hpp"
#include "ltforge/series.hpp"

namespace ltforge {

using Json = nlohmann::json;

// p-adic scalar as [valuation, unit mantissa in hex]; zero is [null, "0"].
Json scalar_to_json(const PadicScalar& a);
PadicScalar scalar_from_json(unsigned long p, const Json& j, long prec);

Json integer_to_json(const Integer& n);
Integer integer_from_json(const Json& j);

// {"p","f","e","unram","eis","N"}; unram and eis are optional on input.
Json field_to_json(const LocalField& F);
LocalField field_from_json(const Json& j);

// {"field", "coeffs": coeffs[i][j] for zeta^i varpi^j, "prec", "valuation"}
Json element_to_json(const FieldElement& x);
FieldElement element_from_json(const Json& j);
// Reads coefficients against an already known field; a "field" entry must match it.
FieldElement element_from_json(const Json& j, const LocalField& F);

// {"vars": 1|2, "p", "D", "coeffs", "prec"}; bivariate coefficients are rows coeffs[i][j], i+j <= D.
// Per-coefficient absolute precisions sit in "prec" with the same shape, null for exact zeros.
Json series_to_json(const Series1& s);
Json series_to_json(const Series2& s);
Series1 series1_from_json(const Json& j);
Series2 series2_from_json(const Json& j);

}  // namespace ltforge

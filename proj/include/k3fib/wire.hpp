#ifndef K3FIB_WIRE_HPP
#define K3FIB_WIRE_HPP

#include "k3fib/poly.hpp"
#include "k3fib/weierstrass.hpp"

#include "json.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace k3 {

using json = nlohmann::json;

/// Parses infix text such as "-1/48*mu^4 - mu/2 + (t^2+mu1)^3".
/// Division is allowed by constants only.
QPoly parse_poly(std::string_view text);

/// Polynomial wire format:
///   { "vars": [...], "params": [...], "terms": [ {"coeff": "p/q", "exps": {"t": 4}} ] }
/// A bare JSON string is accepted as infix text.
QPoly poly_from_json(const json& j);
/// `base` lists the variables reported under "vars"; every other variable is a parameter.
json poly_to_json(const QPoly& p, const std::vector<std::string>& base);
/// Algebraic coefficients are written as {"coords": [...]} with a top-level "field".
json poly_to_json(const APoly& p, const std::vector<std::string>& base);

/// Model wire format: { "chi": 2, "A": <poly>, "B": <poly> } with optional "t". Without "t" the base
/// variable is the single entry of "vars" of A or B.
WeierstrassModel<Rational> model_from_json(const json& j);
json model_to_json(const WeierstrassModel<Rational>& m);

json upoly_to_json(const UPolyQ& p);
UPolyQ upoly_from_json(const json& j);

} // namespace k3

#endif

#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cpz/product.hpp"

namespace cpz {

// ProductSpec <-> JSON document:
//   { "d": 2,
//     "directions": [[1, 0], ["1", "3/2"]],
//     "tuple_size": 1,
//     "coefficients": [[{"kind": "constant", "value": 1}],
//                      [{"kind": "character", "modulus": 4, "values": [0, 1, 0, -1]}]],
//     "direction_mode_hint": {"mode": "LR", "psi": ["1", "1.4142135623730951"], "note": "..."} }
// Further scheme kinds: {"kind":"table","default":1,"overrides":{"2":-1}} and
// {"kind":"power","scale":1,"exponent":0.5} for alpha(p) = scale * p^-exponent.
nlohmann::json to_json(const ProductSpec& spec);
nlohmann::json to_json(const CoefficientScheme& scheme);

// Throws ParseError on schema errors; range checks are left to validate().
ProductSpec spec_from_json(const nlohmann::json& doc);
ProductSpec parse_spec(std::string_view text);

}  // namespace cpz

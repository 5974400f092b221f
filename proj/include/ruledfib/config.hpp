#pragma once

#include <map>
#include <string>
#include <string_view>

#include "json.hpp"
#include "ruledfib/elliptic_curve.hpp"

namespace ruledfib {

using Json = nlohmann::ordered_json;

/// A curve file: field, Weierstrass coefficients and named points.
///
///   {"field": {"p": 5, "k": 1},
///    "a1": [0], "a2": [0], "a3": [0], "a4": [4], "a6": [0],
///    "points": {"Q": [[2], [1]], "O": "inf"}}
///
/// Elements are coefficient arrays over F_p, low degree first; a bare
/// integer is read as an element of the prime field.
struct CurveSpec {
  Curve curve;
  std::map<std::string, CurvePoint> points;
};

/// key = value lines, [tables], arrays, inline tables, strings, integers,
/// booleans and # comments. Throws ParseError.
Json parse_toml_subset(std::string_view text);
/// JSON, or the TOML subset when the path ends in ".toml". Throws ParseError.
Json load_config_file(const std::string& path);

FieldElement element_from_json(const FieldPtr& f, const Json& j);
Json element_to_json(const FieldElement& x);
CurveSpec curve_from_json(const Json& j);
Json curve_to_json(const Curve& e);
Json point_to_json(const CurvePoint& pt);
CurvePoint point_from_json(const Curve& e, const Json& j);

}  // namespace ruledfib

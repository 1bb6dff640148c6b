#pragma once

#include <memory>

#include <nlohmann/json.hpp>

#include "warpfield/geometry.hpp"

namespace warpfield::geometry {

// Wedge descriptors. The "backend" field is mandatory.
//   minkowski4: {"lorentz": 4x4} or {"rapidity", "axis_angle", "rotation": 3x3} or
//               {"killing_pair": [xi1, xi2]}, plus "translation" (or "base") [4]
//   desitter5:  {"ambient": 5x5}
//   frw:        {"chart": {...}, "killing_pair": [[3], [3]], "base": [t, x, y, z]}
// Charts: {"kind": "power", "amplitude", "exponent", "t_ref"} or
//         {"kind": "exponential", "rate", "t_ref"}.
nlohmann::json to_json(const Wedge& w);
Wedge wedge_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FRWChart& c);
std::shared_ptr<const FRWChart> chart_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SpacetimePoint& p);
SpacetimePoint point_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CanonicalForm& c);

}  // namespace warpfield::geometry

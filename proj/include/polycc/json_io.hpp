#pragma once

#include <json.hpp>

#include "polycc/geometry.hpp"

namespace polycc {

using json = nlohmann::json;

json to_json(const Point& p);
Point point_from_json(const json& j);

/// {"d": int, "vertices": [["p/q", ...], ...]} with vertices in canonical
/// (lexicographic) order.
json to_json(const ConvexPolytope& h);
/// Accepts any vertex list (not necessarily minimal) and canonicalises it.
ConvexPolytope polytope_from_json(const json& j);

/// Rationals may be given as "p/q" / decimal strings or as JSON integers.
Rat rat_from_json(const json& j);

}  // namespace polycc

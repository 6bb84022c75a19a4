#include "polycc/json_io.hpp"

namespace polycc {

Rat rat_from_json(const json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  throw ParseError("expected a rational string or integer, got " + j.dump());
}

json to_json(const Point& p) {
  json out = json::array();
  for (const auto& c : p.coords()) out.push_back(format_rat(c));
  return out;
}

Point point_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("point must be an array, got " + j.dump());
  std::vector<Rat> coords;
  coords.reserve(j.size());
  for (const auto& c : j) coords.push_back(rat_from_json(c));
  return Point(std::move(coords));
}

json to_json(const ConvexPolytope& h) {
  json verts = json::array();
  for (const auto& v : h.vertices()) verts.push_back(to_json(v));
  return json{{"d", h.dim()}, {"vertices", std::move(verts)}};
}

ConvexPolytope polytope_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("vertices"))
    throw ParseError("polytope must be an object with \"d\" and \"vertices\"");
  const auto dim = j.at("d").get<std::size_t>();
  PointMultiset pts;
  for (const auto& v : j.at("vertices")) pts.push_back(point_from_json(v));
  return convex_hull(pts, dim);
}

}  // namespace polycc

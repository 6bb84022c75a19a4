#include <algorithm>
#include <string>

#include "geometry_internal.hpp"

namespace polycc {

namespace {

struct Edge {
  Rat dx, dy;
  std::size_t operand;
};

// Angular order of edge directions, starting just after straight down and
// turning counter-clockwise. This is the order in which edges leave the
// lexicographically smallest vertex of any convex polygon.
int half(const Edge& e) { return (sgn(e.dx) > 0 || (sgn(e.dx) == 0 && sgn(e.dy) > 0)) ? 0 : 1; }

bool same_direction(const Edge& a, const Edge& b) {
  return half(a) == half(b) && sgn(a.dx * b.dy - a.dy * b.dx) == 0;
}

ConvexPolytope planar_sum(std::span<const ConvexPolytope> hs, std::span<const Rat> ws) {
  Point start = Point::origin(2);
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    if (sgn(ws[k]) == 0) continue;
    start += ws[k] * hs[k].lex_min();
    const auto& b = hs[k].boundary();
    if (b.size() < 2) continue;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const Point& p = b[i];
      const Point& q = b[(i + 1) % b.size()];
      edges.push_back({q[0] - p[0], q[1] - p[1], k});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return sgn(a.dx * b.dy - a.dy * b.dx) > 0;
  });

  std::vector<Point> boundary{start};
  Point cursor = start;
  for (std::size_t i = 0; i < edges.size();) {
    Rat sx, sy;
    std::size_t j = i;
    for (; j < edges.size() && same_direction(edges[i], edges[j]); ++j) {
      sx += ws[edges[j].operand] * edges[j].dx;
      sy += ws[edges[j].operand] * edges[j].dy;
    }
    cursor[0] += sx;
    cursor[1] += sy;
    boundary.push_back(cursor);
    i = j;
  }
  // The walk closes back on `start`.
  if (boundary.size() > 1) boundary.pop_back();
  return from_boundary(2, std::move(boundary));
}

}  // namespace

ConvexPolytope linear_combination(std::span<const ConvexPolytope> hs, std::span<const Rat> ws) {
  if (hs.empty()) throw std::invalid_argument("linear_combination: no operands");
  if (hs.size() != ws.size())
    throw std::invalid_argument("linear_combination: " + std::to_string(hs.size()) + " polytopes but " +
                                std::to_string(ws.size()) + " weights");
  const std::size_t dim = hs.front().dim();
  require_supported_dim(dim);
  Rat total;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    if (hs[k].dim() != dim) throw DimensionMismatch("linear_combination: operands differ in dimension");
    if (hs[k].is_empty()) throw std::invalid_argument("linear_combination: empty operand");
    if (sgn(ws[k]) < 0) throw std::invalid_argument("linear_combination: negative weight");
    total += ws[k];
  }
  if (total != 1) throw std::invalid_argument("linear_combination: weights sum to " + format_rat(total));

  if (dim == 1) {
    Rat lo, hi;
    for (std::size_t k = 0; k < hs.size(); ++k) {
      if (sgn(ws[k]) == 0) continue;
      lo += ws[k] * hs[k].vertices().front()[0];
      hi += ws[k] * hs[k].vertices().back()[0];
    }
    if (lo == hi) return from_boundary(1, {Point{lo}});
    return from_boundary(1, {Point{lo}, Point{hi}});
  }
  return planar_sum(hs, ws);
}

}  // namespace polycc

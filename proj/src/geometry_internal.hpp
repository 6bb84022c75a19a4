#pragma once

#include "polycc/geometry.hpp"

namespace polycc {

/// Builds a polytope from an already minimal boundary (CCW from the
/// lexicographic minimum for d == 2, [lo, hi] for d == 1). No validation.
ConvexPolytope from_boundary(std::size_t dim, std::vector<Point> boundary);

/// Orientation of (a, b, c): positive for a left turn.
Rat orient(const Point& a, const Point& b, const Point& c);

void require_supported_dim(std::size_t dim);

}  // namespace polycc

#include <algorithm>
#include <string>

#include "geometry_internal.hpp"

namespace polycc {

std::strong_ordering operator<=>(const Point& a, const Point& b) {
  const std::size_t n = std::min(a.dim(), b.dim());
  for (std::size_t k = 0; k < n; ++k) {
    int c = cmp(a[k], b[k]);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
  }
  return a.dim() <=> b.dim();
}

Point& Point::operator+=(const Point& other) {
  if (dim() != other.dim()) throw DimensionMismatch("point dimensions differ");
  for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] += other.coords_[k];
  return *this;
}

Point& Point::operator-=(const Point& other) {
  if (dim() != other.dim()) throw DimensionMismatch("point dimensions differ");
  for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] -= other.coords_[k];
  return *this;
}

Point& Point::operator*=(const Rat& scale) {
  for (auto& c : coords_) c *= scale;
  return *this;
}

Rat dot(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("point dimensions differ");
  Rat s;
  for (std::size_t k = 0; k < a.dim(); ++k) s += a[k] * b[k];
  return s;
}

Rat squared_norm(const Point& a) { return dot(a, a); }

Rat cross(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

Rat orient(const Point& a, const Point& b, const Point& c) {
  Rat bx = b[0] - a[0], by = b[1] - a[1];
  Rat cx = c[0] - a[0], cy = c[1] - a[1];
  return bx * cy - by * cx;
}

void require_supported_dim(std::size_t dim) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("unsupported dimension " + std::to_string(dim) + " (supported: 1, 2)");
}

ConvexPolytope ConvexPolytope::point(Point p) {
  const std::size_t d = p.dim();
  return from_boundary(d, {std::move(p)});
}

ConvexPolytope from_boundary(std::size_t dim, std::vector<Point> boundary) {
  ConvexPolytope h(dim);
  h.vertices_ = boundary;
  std::sort(h.vertices_.begin(), h.vertices_.end());
  h.boundary_ = std::move(boundary);
  return h;
}

ConvexPolytope convex_hull(const PointMultiset& points, std::size_t dim) {
  require_supported_dim(dim);
  for (const auto& p : points)
    if (p.dim() != dim) throw DimensionMismatch("convex_hull: point of dimension " + std::to_string(p.dim()) +
                                                " in a " + std::to_string(dim) + "-dimensional multiset");
  if (points.empty()) return ConvexPolytope::empty(dim);

  if (dim == 1) {
    auto [lo, hi] = std::minmax_element(points.begin(), points.end());
    if (*lo == *hi) return from_boundary(1, {*lo});
    return from_boundary(1, {*lo, *hi});
  }

  std::vector<Point> pts(points);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() == 1) return from_boundary(2, std::move(pts));

  // Andrew's monotone chain; collinear points are dropped (<= 0).
  std::vector<Point> hull;
  hull.reserve(2 * pts.size());
  for (const auto& p : pts) {
    while (hull.size() >= 2 && orient(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
    hull.push_back(p);
  }
  const std::size_t lower_size = hull.size() + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (hull.size() >= lower_size && orient(hull[hull.size() - 2], hull.back(), *it) <= 0) hull.pop_back();
    hull.push_back(*it);
  }
  hull.pop_back();
  return from_boundary(2, std::move(hull));
}

ConvexPolytope convex_hull(const PointMultiset& points) {
  if (points.empty()) throw std::invalid_argument("convex_hull: dimension of an empty multiset is unknown");
  return convex_hull(points, points.front().dim());
}

namespace {

/// c0 + c1*x + c2*y >= 0
struct HalfPlane {
  Rat c0, c1, c2;

  Rat eval(const Point& p) const { return c0 + c1 * p[0] + c2 * p[1]; }
};

/// Left side of the directed line a -> b.
HalfPlane left_of(const Point& a, const Point& b) {
  Rat dx = b[0] - a[0], dy = b[1] - a[1];
  return HalfPlane{dy * a[0] - dx * a[1], -dy, dx};
}

std::vector<HalfPlane> half_planes(const ConvexPolytope& h) {
  const auto& b = h.boundary();
  std::vector<HalfPlane> out;
  if (b.size() == 1) {
    const Point& p = b[0];
    out.push_back({-p[0], 1, 0});
    out.push_back({p[0], -1, 0});
    out.push_back({-p[1], 0, 1});
    out.push_back({p[1], 0, -1});
  } else if (b.size() == 2) {
    const Point& p = b[0];
    const Point& q = b[1];
    out.push_back(left_of(p, q));
    out.push_back(left_of(q, p));
    Rat dx = q[0] - p[0], dy = q[1] - p[1];
    // (x - p).(q - p) >= 0 and (x - q).(p - q) >= 0
    out.push_back({-(dx * p[0] + dy * p[1]), dx, dy});
    out.push_back({dx * q[0] + dy * q[1], -dx, -dy});
  } else {
    for (std::size_t i = 0; i < b.size(); ++i) out.push_back(left_of(b[i], b[(i + 1) % b.size()]));
  }
  return out;
}

std::vector<Point> clip(const std::vector<Point>& poly, const HalfPlane& hp) {
  std::vector<Point> out;
  const std::size_t m = poly.size();
  std::vector<Rat> vals(m);
  bool all_inside = true;
  for (std::size_t i = 0; i < m; ++i) {
    vals[i] = hp.eval(poly[i]);
    if (vals[i] < 0) all_inside = false;
  }
  if (all_inside) return poly;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = (i + 1) % m;
    const Rat& vc = vals[i];
    const Rat& vn = vals[j];
    if (sgn(vc) >= 0) out.push_back(poly[i]);
    if ((sgn(vc) > 0 && sgn(vn) < 0) || (sgn(vc) < 0 && sgn(vn) > 0)) {
      Rat s = vc / (vc - vn);
      Point p = poly[i];
      for (std::size_t k = 0; k < 2; ++k) p[k] += s * (poly[j][k] - poly[i][k]);
      out.push_back(std::move(p));
    }
  }
  return out;
}

void require_same_dim(const ConvexPolytope& a, const ConvexPolytope& b, const char* op) {
  if (a.dim() != b.dim())
    throw DimensionMismatch(std::string(op) + ": dimensions " + std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()) + " differ");
}

}  // namespace

ConvexPolytope intersect(const ConvexPolytope& a, const ConvexPolytope& b) {
  require_same_dim(a, b, "intersect");
  if (a.is_empty() || b.is_empty()) return ConvexPolytope::empty(a.dim());
  if (a == b) return a;
  if (a.dim() == 1) {
    const Rat& lo = std::max(a.vertices().front()[0], b.vertices().front()[0]);
    const Rat& hi = std::min(a.vertices().back()[0], b.vertices().back()[0]);
    if (lo > hi) return ConvexPolytope::empty(1);
    if (lo == hi) return from_boundary(1, {Point{lo}});
    return from_boundary(1, {Point{lo}, Point{hi}});
  }
  // Clip the operand with fewer vertices by the half-planes of the other.
  const ConvexPolytope& subject = a.boundary().size() <= b.boundary().size() ? a : b;
  const ConvexPolytope& window = &subject == &a ? b : a;
  std::vector<Point> poly = subject.boundary();
  for (const auto& hp : half_planes(window)) {
    poly = clip(poly, hp);
    if (poly.empty()) return ConvexPolytope::empty(2);
  }
  return convex_hull(poly, 2);
}

ConvexPolytope intersect(std::span<const ConvexPolytope> polytopes) {
  if (polytopes.empty()) throw std::invalid_argument("intersect: no operands");
  ConvexPolytope acc = polytopes.front();
  for (std::size_t k = 1; k < polytopes.size(); ++k) {
    require_same_dim(acc, polytopes[k], "intersect");
    acc = intersect(acc, polytopes[k]);
  }
  return acc;
}

ConvexPolytope safe_area(const PointMultiset& points, std::size_t f) {
  if (points.size() <= f)
    throw std::invalid_argument("safe_area: need more than f=" + std::to_string(f) + " points, got " +
                                std::to_string(points.size()));
  const std::size_t dim = points.front().dim();
  if (f == 0) return convex_hull(points, dim);

  // Enumerate the f indices left out of each sub-multiset.
  const std::size_t m = points.size();
  std::vector<std::size_t> drop(f);
  for (std::size_t k = 0; k < f; ++k) drop[k] = k;
  std::optional<ConvexPolytope> acc;
  PointMultiset subset;
  subset.reserve(m - f);
  while (true) {
    subset.clear();
    std::size_t next = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (next < f && drop[next] == i) {
        ++next;
        continue;
      }
      subset.push_back(points[i]);
    }
    ConvexPolytope h = convex_hull(subset, dim);
    acc = acc ? intersect(*acc, h) : std::move(h);
    if (acc->is_empty()) return *acc;

    std::size_t k = f;
    while (k > 0 && drop[k - 1] == m - f + (k - 1)) --k;
    if (k == 0) break;
    ++drop[k - 1];
    for (std::size_t j = k; j < f; ++j) drop[j] = drop[j - 1] + 1;
  }
  return *acc;
}

bool contains_point(const ConvexPolytope& h, const Point& p) {
  if (h.dim() != p.dim()) throw DimensionMismatch("contains_point: dimension mismatch");
  if (h.is_empty()) return false;
  const auto& b = h.boundary();
  if (h.dim() == 1) return h.vertices().front()[0] <= p[0] && p[0] <= h.vertices().back()[0];
  if (b.size() == 1) return b[0] == p;
  if (b.size() == 2) {
    if (sgn(orient(b[0], b[1], p)) != 0) return false;
    return std::min(b[0], b[1]) <= p && p <= std::max(b[0], b[1]);
  }
  for (std::size_t i = 0; i < b.size(); ++i)
    if (sgn(orient(b[i], b[(i + 1) % b.size()], p)) < 0) return false;
  return true;
}

bool contains_polytope(const ConvexPolytope& outer, const ConvexPolytope& inner) {
  require_same_dim(outer, inner, "contains_polytope");
  for (const auto& v : inner.vertices())
    if (!contains_point(outer, v)) return false;
  return true;
}

namespace {

Rat squared_segment_distance(const Point& p, const Point& a, const Point& b) {
  Rat vx = b[0] - a[0], vy = b[1] - a[1];
  Rat wx = p[0] - a[0], wy = p[1] - a[1];
  Rat len2 = vx * vx + vy * vy;
  Rat t = (wx * vx + wy * vy);
  if (sgn(t) <= 0) return wx * wx + wy * wy;
  if (t >= len2) {
    Rat ux = p[0] - b[0], uy = p[1] - b[1];
    return ux * ux + uy * uy;
  }
  t /= len2;
  Rat dx = wx - t * vx, dy = wy - t * vy;
  return dx * dx + dy * dy;
}

}  // namespace

Rat squared_distance(const Point& p, const ConvexPolytope& h) {
  if (h.dim() != p.dim()) throw DimensionMismatch("squared_distance: dimension mismatch");
  if (h.is_empty()) throw std::invalid_argument("squared_distance: empty polytope");
  if (h.dim() == 1) {
    const Rat& lo = h.vertices().front()[0];
    const Rat& hi = h.vertices().back()[0];
    if (p[0] < lo) return (lo - p[0]) * (lo - p[0]);
    if (p[0] > hi) return (p[0] - hi) * (p[0] - hi);
    return Rat(0);
  }
  const auto& b = h.boundary();
  if (b.size() == 1) return squared_norm(p - b[0]);
  if (b.size() == 2) return squared_segment_distance(p, b[0], b[1]);
  if (contains_point(h, p)) return Rat(0);
  Rat best = squared_segment_distance(p, b[0], b[1]);
  for (std::size_t i = 1; i < b.size(); ++i) {
    Rat d = squared_segment_distance(p, b[i], b[(i + 1) % b.size()]);
    if (d < best) best = d;
  }
  return best;
}

HausdorffDistance hausdorff_distance(const ConvexPolytope& a, const ConvexPolytope& b) {
  require_same_dim(a, b, "hausdorff_distance");
  if (a.is_empty() || b.is_empty()) throw std::invalid_argument("hausdorff_distance: empty operand");
  HausdorffDistance out;
  if (a == b) return out;
  for (const auto& v : a.vertices()) {
    Rat d = squared_distance(v, b);
    if (d > out.squared) out.squared = d;
  }
  for (const auto& v : b.vertices()) {
    Rat d = squared_distance(v, a);
    if (d > out.squared) out.squared = d;
  }
  out.value = sqrt_to_double(out.squared);
  return out;
}

Rat volume(const ConvexPolytope& h) {
  if (h.is_empty()) return Rat(0);
  if (h.dim() == 1) return h.vertices().back()[0] - h.vertices().front()[0];
  const auto& b = h.boundary();
  if (b.size() < 3) return Rat(0);
  Rat twice;
  for (std::size_t i = 0; i < b.size(); ++i) twice += cross(b[i], b[(i + 1) % b.size()]);
  return twice / 2;
}

std::optional<TverbergPartition> tverberg_witness(const PointMultiset& points, std::size_t f) {
  const std::size_t m = points.size();
  const std::size_t parts = f + 1;
  if (m < parts || m == 0) return std::nullopt;
  const std::size_t dim = points.front().dim();

  // Restricted growth strings with exactly `parts` blocks, in lexicographic order.
  std::vector<std::size_t> label(m, 0);
  std::optional<TverbergPartition> found;
  auto evaluate = [&]() {
    TverbergPartition cand;
    cand.parts.resize(parts);
    cand.indices.resize(parts);
    for (std::size_t i = 0; i < m; ++i) {
      cand.parts[label[i]].push_back(points[i]);
      cand.indices[label[i]].push_back(i);
    }
    std::optional<ConvexPolytope> common;
    for (const auto& part : cand.parts) {
      ConvexPolytope h = convex_hull(part, dim);
      common = common ? intersect(*common, h) : std::move(h);
      if (common->is_empty()) return false;
    }
    cand.witness = common->lex_min();
    found = std::move(cand);
    return true;
  };
  auto recurse = [&](auto&& self, std::size_t i, std::size_t used) -> bool {
    if (m - i < parts - used) return false;
    if (i == m) return used == parts && evaluate();
    const std::size_t limit = std::min(used + 1, parts);
    for (std::size_t b = 0; b < limit; ++b) {
      label[i] = b;
      if (self(self, i + 1, std::max(used, b + 1))) return true;
    }
    return false;
  };
  recurse(recurse, 1, 1);
  return found;
}

}  // namespace polycc

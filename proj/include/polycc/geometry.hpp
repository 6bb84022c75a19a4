#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "polycc/rational.hpp"

namespace polycc {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Point {
 public:
  Point() = default;
  explicit Point(std::vector<Rat> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<Rat> coords) : coords_(coords) {}

  std::size_t dim() const { return coords_.size(); }
  const Rat& operator[](std::size_t k) const { return coords_[k]; }
  Rat& operator[](std::size_t k) { return coords_[k]; }
  std::span<const Rat> coords() const { return coords_; }

  static Point origin(std::size_t dim) { return Point(std::vector<Rat>(dim)); }

  friend bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }
  /// Lexicographic by coordinates.
  friend std::strong_ordering operator<=>(const Point& a, const Point& b);

  Point& operator+=(const Point& other);
  Point& operator-=(const Point& other);
  Point& operator*=(const Rat& scale);
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(const Rat& s, Point a) { return a *= s; }

 private:
  std::vector<Rat> coords_;
};

Rat dot(const Point& a, const Point& b);
Rat squared_norm(const Point& a);
/// z-component of (a x b) for planar points.
Rat cross(const Point& a, const Point& b);

/// Order-insensitive multiset of points; duplicates are kept.
using PointMultiset = std::vector<Point>;

/// Vertex-represented convex polytope in d dimensions (d in {1, 2}).
///
/// The vertex set is always minimal and sorted lexicographically, so two
/// polytopes describe the same point set exactly when their vertex vectors
/// compare equal. For d == 2 the boundary is also kept in counter-clockwise
/// order starting at the lexicographically smallest vertex.
class ConvexPolytope {
 public:
  explicit ConvexPolytope(std::size_t dim = 1) : dim_(dim) {}

  static ConvexPolytope empty(std::size_t dim) { return ConvexPolytope(dim); }
  static ConvexPolytope point(Point p);

  std::size_t dim() const { return dim_; }
  bool is_empty() const { return vertices_.empty(); }
  const std::vector<Point>& vertices() const { return vertices_; }
  /// Cyclic boundary order (d == 2); identical to vertices() for d == 1.
  const std::vector<Point>& boundary() const { return boundary_; }
  const Point& lex_min() const { return vertices_.front(); }

  friend bool operator==(const ConvexPolytope& a, const ConvexPolytope& b) {
    return a.dim_ == b.dim_ && a.vertices_ == b.vertices_;
  }

 private:
  friend ConvexPolytope convex_hull(const PointMultiset& points, std::size_t dim);
  friend ConvexPolytope from_boundary(std::size_t dim, std::vector<Point> boundary);

  std::size_t dim_;
  std::vector<Point> vertices_;
  std::vector<Point> boundary_;
};

/// H(X): minimal canonical hull. The empty multiset yields the empty polytope
/// of dimension `dim`; otherwise `dim` must match every point.
ConvexPolytope convex_hull(const PointMultiset& points, std::size_t dim);
ConvexPolytope convex_hull(const PointMultiset& points);

/// Exact intersection of all operands (at least one).
ConvexPolytope intersect(std::span<const ConvexPolytope> polytopes);
ConvexPolytope intersect(const ConvexPolytope& a, const ConvexPolytope& b);

/// Intersection of the hulls of every sub-multiset of size |X| - f.
/// Throws std::invalid_argument when |X| <= f.
ConvexPolytope safe_area(const PointMultiset& points, std::size_t f);

/// {sum_k w_k p_k : p_k in h_k}. Weights must be non-negative and sum to 1;
/// every operand must be non-empty. Zero-weight operands contribute nothing.
ConvexPolytope linear_combination(std::span<const ConvexPolytope> polytopes, std::span<const Rat> weights);

bool contains_point(const ConvexPolytope& h, const Point& p);
bool contains_polytope(const ConvexPolytope& outer, const ConvexPolytope& inner);

/// Exact squared Euclidean distance from p to h (h non-empty).
Rat squared_distance(const Point& p, const ConvexPolytope& h);

struct HausdorffDistance {
  Rat squared;
  double value = 0.0;
  /// Absolute error bound on `value`; only the final square root is inexact.
  static constexpr double kErrorBound = 1e-12;
};

HausdorffDistance hausdorff_distance(const ConvexPolytope& a, const ConvexPolytope& b);

/// Lebesgue measure in the ambient dimension (length for d=1, area for d=2).
Rat volume(const ConvexPolytope& h);

struct TverbergPartition {
  std::vector<PointMultiset> parts;
  /// Index sets into the input multiset, parallel to `parts`.
  std::vector<std::vector<std::size_t>> indices;
  Point witness;
};

/// Exhaustive search for a partition of T into f+1 non-empty parts whose
/// hulls share a point. Returns std::nullopt when none exists.
std::optional<TverbergPartition> tverberg_witness(const PointMultiset& points, std::size_t f);

}  // namespace polycc

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "polycc/geometry.hpp"
#include "polycc/json_io.hpp"

namespace polycc {
namespace {

Point P(long x) { return Point{Rat(x)}; }
Point P(long x, long y) { return Point{Rat(x), Rat(y)}; }
Point Pq(long xn, long xd, long yn, long yd) { return Point{make_rat(xn, xd), make_rat(yn, yd)}; }
Rat q(long n, long d) { return make_rat(n, d); }

ConvexPolytope segment(long lo, long hi) { return convex_hull({P(lo), P(hi)}); }

TEST(ConvexHull, CollapsesDuplicatesAndInterior) {
  auto h = convex_hull({P(0), P(1), P(1)});
  EXPECT_EQ(h.vertices(), (std::vector<Point>{P(0), P(1)}));
}

TEST(ConvexHull, UnitSquareDropsCentre) {
  PointMultiset x{P(0, 0), P(1, 0), P(0, 1), P(1, 1), Pq(1, 2, 1, 2)};
  auto h = convex_hull(x);
  ASSERT_EQ(h.vertices().size(), 4u);
  EXPECT_EQ(h.vertices(), oracle::hull_vertices_2d(x));
  EXPECT_EQ(h.boundary().front(), P(0, 0));
}

TEST(ConvexHull, SingletonAndEmpty) {
  EXPECT_EQ(convex_hull({P(2)}).vertices(), std::vector<Point>{P(2)});
  EXPECT_TRUE(convex_hull({}, 2).is_empty());
}

TEST(ConvexHull, CollinearPlanarPointsGiveSegment) {
  auto h = convex_hull({P(0, 0), P(1, 1), P(2, 2), P(3, 3)});
  EXPECT_EQ(h.vertices(), (std::vector<Point>{P(0, 0), P(3, 3)}));
}

TEST(ConvexHull, RejectsMixedDimensions) {
  EXPECT_THROW(convex_hull({P(0), P(1, 1)}, 1), DimensionMismatch);
  EXPECT_THROW(convex_hull({Point{Rat(0), Rat(0), Rat(0)}}), std::invalid_argument);
}

TEST(ConvexHull, IdempotentOnRandomSets) {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 200; ++it) {
    const std::size_t dim = 1 + it % 2;
    auto pts = oracle::random_points(rng, 1 + rng() % 8, dim);
    auto h = convex_hull(pts);
    EXPECT_EQ(convex_hull(h.vertices(), dim), h);
    EXPECT_EQ(h.vertices(), oracle::hull_vertices(pts, dim));
  }
}

TEST(Intersect, Intervals) {
  EXPECT_EQ(intersect(segment(0, 2), segment(1, 3)), segment(1, 2));
  EXPECT_EQ(intersect(segment(0, 1), segment(0, 1)), segment(0, 1));
  EXPECT_TRUE(intersect(segment(0, 1), segment(2, 3)).is_empty());
  EXPECT_EQ(intersect(segment(0, 1), segment(1, 3)), convex_hull({P(1)}));
}

TEST(Intersect, PlanarDegenerateOperands) {
  auto square = convex_hull({P(0, 0), P(2, 0), P(0, 2), P(2, 2)});
  auto diag = convex_hull({P(-1, -1), P(3, 3)});
  EXPECT_EQ(intersect(square, diag), convex_hull({P(0, 0), P(2, 2)}));
  EXPECT_EQ(intersect(diag, square), convex_hull({P(0, 0), P(2, 2)}));
  auto pt = ConvexPolytope::point(P(1, 1));
  EXPECT_EQ(intersect(square, pt), pt);
  EXPECT_TRUE(intersect(pt, ConvexPolytope::point(P(1, 2))).is_empty());
  auto crossing = convex_hull({P(0, 2), P(2, 0)});
  EXPECT_EQ(intersect(diag, crossing), pt);
}

TEST(Intersect, DimensionMismatch) {
  EXPECT_THROW(intersect(segment(0, 1), ConvexPolytope::point(P(0, 0))), DimensionMismatch);
}

TEST(SafeArea, Examples) {
  EXPECT_EQ(safe_area({P(0), P(1), P(2), P(3)}, 1), segment(1, 2));
  EXPECT_EQ(safe_area({P(0), P(0), P(1), P(1)}, 1), segment(0, 1));
  PointMultiset x{P(0, 0), P(4, 0), P(0, 4), P(1, 1)};
  EXPECT_EQ(safe_area(x, 0), convex_hull(x));
  EXPECT_THROW(safe_area({P(0)}, 1), std::invalid_argument);
}

TEST(SafeArea, AgreesWithBruteForce) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 120; ++it) {
    const std::size_t dim = 1 + it % 2;
    const std::size_t f = 1 + it % 2;
    const std::size_t m = (dim + 1) * f + 1 + rng() % 2;
    auto pts = oracle::random_points(rng, m, dim);
    auto area = safe_area(pts, f);
    ASSERT_FALSE(area.is_empty());
    EXPECT_EQ(area.vertices(), oracle::safe_area_vertices(pts, f)) << "iteration " << it;
  }
}

TEST(SafeArea, MonotoneInTheMultiset) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 60; ++it) {
    const std::size_t dim = 1 + it % 2;
    const std::size_t f = 1;
    auto b = oracle::random_points(rng, (dim + 2) * f + 2, dim);
    PointMultiset a(b.begin(), b.end() - 1);
    EXPECT_TRUE(contains_polytope(safe_area(b, f), safe_area(a, f)));
  }
}

TEST(LinearCombination, Examples) {
  std::vector<ConvexPolytope> hs{segment(0, 1), segment(2, 4)};
  std::vector<Rat> w{q(1, 2), q(1, 2)};
  EXPECT_EQ(linear_combination(hs, w), convex_hull({Point{Rat(1)}, Point{q(5, 2)}}));

  std::vector<ConvexPolytope> one{segment(3, 7)};
  std::vector<Rat> w1{Rat(1)};
  EXPECT_EQ(linear_combination(one, w1), segment(3, 7));

  std::vector<ConvexPolytope> tri{convex_hull({P(0, 0), P(1, 0), P(0, 1)}), ConvexPolytope::point(P(1, 1))};
  EXPECT_EQ(linear_combination(tri, w), convex_hull({Pq(1, 2, 1, 2), Pq(1, 1, 1, 2), Pq(1, 2, 1, 1)}));
}

TEST(LinearCombination, Errors) {
  std::vector<ConvexPolytope> hs{segment(0, 1), ConvexPolytope::empty(1)};
  std::vector<Rat> w{q(1, 2), q(1, 2)};
  EXPECT_THROW(linear_combination(hs, w), std::invalid_argument);
  std::vector<ConvexPolytope> ok{segment(0, 1), segment(0, 2)};
  std::vector<Rat> bad{q(1, 2), q(1, 3)};
  EXPECT_THROW(linear_combination(ok, bad), std::invalid_argument);
}

TEST(LinearCombination, ContainedInCommonHull) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 100; ++it) {
    const std::size_t dim = 1 + it % 2;
    auto base = oracle::random_points(rng, 6, dim);
    auto q_hull = convex_hull(base);
    std::vector<ConvexPolytope> hs;
    std::vector<Rat> ws;
    const std::size_t k = 1 + rng() % 4;
    for (std::size_t i = 0; i < k; ++i) {
      PointMultiset sub;
      for (const auto& p : base)
        if (rng() % 2) sub.push_back(p);
      if (sub.empty()) sub.push_back(base.front());
      hs.push_back(convex_hull(sub, dim));
      ws.push_back(Rat(1, static_cast<unsigned>(k)));
    }
    auto l = linear_combination(hs, ws);
    EXPECT_FALSE(l.is_empty());
    EXPECT_TRUE(contains_polytope(q_hull, l));
  }
}

TEST(LinearCombination, AgreesWithVertexProduct) {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 120; ++it) {
    const std::size_t dim = 1 + it % 2;
    const std::size_t k = 1 + rng() % 4;
    std::vector<ConvexPolytope> hs;
    std::vector<std::vector<Point>> verts;
    std::vector<Rat> ws;
    Rat left = 1;
    for (std::size_t i = 0; i < k; ++i) {
      hs.push_back(convex_hull(oracle::random_points(rng, 1 + rng() % 5, dim), dim));
      verts.push_back(hs.back().vertices());
      Rat w = i + 1 == k ? left : Rat(left * make_rat(static_cast<long>(rng() % 4), 3));
      left -= w;
      ws.push_back(w);
    }
    EXPECT_EQ(linear_combination(hs, ws).vertices(), oracle::linear_combination_vertices(verts, ws, dim));
  }
}

TEST(Hausdorff, AgreesWithFloatingOracle) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 120; ++it) {
    const std::size_t dim = 1 + it % 2;
    auto a = convex_hull(oracle::random_points(rng, 1 + rng() % 5, dim), dim);
    auto b = convex_hull(oracle::random_points(rng, 1 + rng() % 5, dim), dim);
    EXPECT_NEAR(hausdorff_distance(a, b).value, oracle::hausdorff(a.vertices(), b.vertices()), 1e-12);
  }
}

TEST(Hausdorff, Examples) {
  auto sq = convex_hull({P(0, 0), P(1, 0), P(0, 1), P(1, 1)});
  EXPECT_EQ(hausdorff_distance(sq, sq).squared, 0);
  auto d = hausdorff_distance(segment(0, 2), segment(1, 3));
  EXPECT_EQ(d.squared, 1);
  EXPECT_DOUBLE_EQ(d.value, 1.0);
  auto d2 = hausdorff_distance(sq, ConvexPolytope::point(P(0, 0)));
  EXPECT_EQ(d2.squared, 2);
  EXPECT_NEAR(d2.value, std::sqrt(2.0), HausdorffDistance::kErrorBound);
  EXPECT_THROW(hausdorff_distance(sq, ConvexPolytope::empty(2)), std::invalid_argument);
}

TEST(Hausdorff, MetricAxiomsOnRandomPolytopes) {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 150; ++it) {
    const std::size_t dim = 1 + it % 2;
    auto a = convex_hull(oracle::random_points(rng, 1 + rng() % 5, dim));
    auto b = convex_hull(oracle::random_points(rng, 1 + rng() % 5, dim));
    auto c = convex_hull(oracle::random_points(rng, 1 + rng() % 5, dim));
    auto ab = hausdorff_distance(a, b);
    EXPECT_EQ(ab.squared, hausdorff_distance(b, a).squared);
    EXPECT_EQ(sgn(ab.squared) == 0, a == b);
    auto ac = hausdorff_distance(a, c).value;
    auto cb = hausdorff_distance(c, b).value;
    EXPECT_LE(ab.value, ac + cb + 3 * HausdorffDistance::kErrorBound);
  }
}

TEST(Contains, Examples) {
  EXPECT_TRUE(contains_point(segment(0, 1), Point{q(1, 2)}));
  auto tri = convex_hull({P(1, 0), P(0, 1), P(1, 1)});
  EXPECT_FALSE(contains_point(tri, P(0, 0)));
  EXPECT_TRUE(contains_point(tri, Pq(1, 2, 1, 2)));
  EXPECT_TRUE(contains_polytope(segment(0, 3), segment(1, 2)));
  EXPECT_FALSE(contains_polytope(segment(1, 2), segment(0, 3)));
  EXPECT_THROW(contains_point(tri, P(0)), DimensionMismatch);
}

TEST(Tverberg, Examples) {
  auto w = tverberg_witness({P(0), P(1), P(2)}, 1);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->parts, (std::vector<PointMultiset>{{P(0), P(2)}, {P(1)}}));
  EXPECT_EQ(w->witness, P(1));

  PointMultiset t{P(0, 0), P(3, 1), P(1, 2)};
  auto single = tverberg_witness(t, 0);
  ASSERT_TRUE(single.has_value());
  EXPECT_EQ(single->parts.size(), 1u);
  EXPECT_TRUE(contains_point(convex_hull(t), single->witness));

  auto planar = tverberg_witness({P(0, 0), P(1, 0), P(0, 1), P(2, 2)}, 1);
  ASSERT_TRUE(planar.has_value());
  for (const auto& part : planar->parts) EXPECT_TRUE(contains_point(convex_hull(part), planar->witness));
}

TEST(Tverberg, BelowThresholdMayFail) {
  EXPECT_FALSE(tverberg_witness({P(0), P(1)}, 1).has_value());
  EXPECT_FALSE(tverberg_witness({}, 0).has_value());
}

TEST(Tverberg, WitnessLiesInSafeArea) {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 40; ++it) {
    const std::size_t dim = 1 + it % 2;
    const std::size_t f = 1 + (it / 2) % 2;
    auto pts = oracle::random_points(rng, (dim + 1) * f + 1, dim);
    auto w = tverberg_witness(pts, f);
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(contains_point(safe_area(pts, f), w->witness));
  }
}

TEST(PolytopeJson, RoundTripIsBitExact) {
  std::mt19937_64 rng(29);
  for (int it = 0; it < 50; ++it) {
    const std::size_t dim = 1 + it % 2;
    auto h = convex_hull(oracle::random_points(rng, 1 + rng() % 6, dim, -3, 3, 7));
    const std::string text = to_json(h).dump();
    EXPECT_EQ(polytope_from_json(json::parse(text)), h);
    EXPECT_EQ(to_json(polytope_from_json(json::parse(text))).dump(), text);
  }
  auto j = json::parse(R"({"d":1,"vertices":[["3/1"],["1/2"]]})");
  EXPECT_EQ(to_json(polytope_from_json(j)).dump(), R"({"d":1,"vertices":[["1/2"],["3/1"]]})");
}

TEST(Rational, ParseAndFormat) {
  EXPECT_EQ(parse_rat("0.01"), q(1, 100));
  EXPECT_EQ(parse_rat("-2/4"), q(-1, 2));
  EXPECT_EQ(parse_rat("1e-3"), q(1, 1000));
  EXPECT_EQ(format_rat(Rat(3)), "3/1");
  EXPECT_THROW(parse_rat("1/0"), ParseError);
  EXPECT_THROW(parse_rat("abc"), ParseError);
  EXPECT_EQ(sqrt_upper_bound(Rat(4)), Rat(2));
  EXPECT_GE(sqrt_upper_bound(Rat(2)) * sqrt_upper_bound(Rat(2)), Rat(2));
}

}  // namespace
}  // namespace polycc

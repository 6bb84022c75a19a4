#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "polycc/experiment.hpp"
#include "polycc/matrix_oracle.hpp"

namespace polycc {
namespace {

Rat q(long n, long d) { return make_rat(n, d); }

StochMatrix from_rows(const std::vector<std::vector<Rat>>& rows) {
  StochMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

StochMatrix random_stochastic(std::mt19937_64& rng, std::size_t n) {
  StochMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<long> w(n);
    long total = 0;
    for (auto& x : w) total += x = static_cast<long>(rng() % 4);
    if (total == 0) w[i] = total = 1;
    for (std::size_t j = 0; j < n; ++j) m(i, j) = make_rat(w[j], total);
  }
  return m;
}

ConvexPolytope random_polygon(std::mt19937_64& rng) {
  PointMultiset pts;
  for (int k = 0; k < 5; ++k) pts.push_back(Point{make_rat(static_cast<long>(rng() % 20), 4), make_rat(static_cast<long>(rng() % 20), 4)});
  return convex_hull(pts, 2);
}

TEST(Ergodicity, Examples) {
  const auto same = ergodicity(from_rows({{q(1, 3), q(2, 3)}, {q(1, 3), q(2, 3)}}));
  EXPECT_EQ(same.delta, 0);
  EXPECT_EQ(same.lambda, 0);
  const auto mixed = ergodicity(from_rows({{q(1, 2), q(1, 2)}, {Rat(1), Rat(0)}}));
  EXPECT_EQ(mixed.lambda, q(1, 2));
  EXPECT_EQ(mixed.delta, q(1, 2));
  const auto id = ergodicity(StochMatrix::identity(3));
  EXPECT_EQ(id.delta, 1);
  EXPECT_EQ(id.lambda, 1);
}

TEST(Ergodicity, DeltaNeverExceedsLambda) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 200; ++k) {
    const auto e = ergodicity(random_stochastic(rng, 2 + k % 4));
    EXPECT_LE(e.delta, e.lambda);
    EXPECT_GE(e.delta, 0);
    EXPECT_LE(e.lambda, 1);
  }
}

TEST(MatVec, Examples) {
  const PolytopeVector v{convex_hull({Point{Rat(0)}, Point{Rat(2)}}, 1), ConvexPolytope::point(Point{Rat(4)})};
  const StochMatrix a = from_rows({{q(1, 2), q(1, 2)}, {Rat(0), Rat(1)}});
  const PolytopeVector out = mat_vec(a, v);
  EXPECT_EQ(out[0], convex_hull({Point{Rat(2)}, Point{Rat(3)}}, 1));
  EXPECT_EQ(out[1], v[1]);
  const PolytopeVector same = mat_vec(StochMatrix::identity(2), v);
  EXPECT_EQ(same, v);
}

TEST(MatVec, ZeroWeightOperandIsIgnored) {
  const PolytopeVector v{ConvexPolytope::point(Point{Rat(1)}), ConvexPolytope::empty(1)};
  const StochMatrix a = from_rows({{Rat(1), Rat(0)}, {Rat(1), Rat(0)}});
  EXPECT_EQ(mat_vec_row(a, 0, v), v[0]);
}

TEST(MatVec, ProductIsAssociative) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 40; ++k) {
    const StochMatrix a = random_stochastic(rng, 3), b = random_stochastic(rng, 3);
    ASSERT_TRUE(a.is_row_stochastic());
    const PolytopeVector v{random_polygon(rng), random_polygon(rng), random_polygon(rng)};
    EXPECT_EQ(mat_vec(mat_mul(a, b), v), mat_vec(a, mat_vec(b, v)));
  }
}

TEST(MatMul, AgreesWithNaiveProduct) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 2 + k % 4;
    const StochMatrix a = random_stochastic(rng, n), b = random_stochastic(rng, n);
    const StochMatrix c = mat_mul(a, b);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rat s = 0;
        for (std::size_t l = 0; l < n; ++l) s += a(i, l) * b(l, j);
        EXPECT_EQ(c(i, j), s);
      }
    EXPECT_TRUE(c.is_row_stochastic());
  }
}

ExperimentSpec spec(std::size_t n, std::size_t f, std::size_t d, FaultKind faults) {
  ExperimentSpec s;
  s.cfg.n = n;
  s.cfg.f = f;
  s.cfg.d = d;
  s.cfg.epsilon = q(1, 10);
  s.cfg.mu = 0;
  s.cfg.upper = 1;
  s.faults.kind = faults;
  s.scheduler.mixed = true;
  return s;
}

TEST(BuildM, RowsFollowUsedSenders) {
  const auto s = spec(5, 1, 1, FaultKind::Random);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = instantiate(s, seed);
    const SimTrace t = run(inst.cfg, inst.inputs, inst.plan, inst.policy);
    TraceView v(t);
    const auto ms = build_all_M(v);
    ASSERT_EQ(ms.size(), v.t_end() + 1);
    EXPECT_EQ(ms[0], StochMatrix::identity(5));
    for (unsigned r = 1; r <= v.t_end(); ++r) {
      EXPECT_TRUE(ms[r].is_row_stochastic());
      const auto crashed = v.crashed_before_round(r + 1);
      for (ProcessId i = 0; i < 5; ++i) {
        if (crashed.count(i)) {
          for (ProcessId j = 0; j < 5; ++j) EXPECT_EQ(ms[r](i, j), q(1, 5));
          continue;
        }
        const auto* used = v.used_senders(i, r);
        ASSERT_NE(used, nullptr);
        for (ProcessId j = 0; j < 5; ++j) {
          const bool in = std::find(used->begin(), used->end(), j) != used->end();
          EXPECT_EQ(ms[r](i, j), in ? make_rat(1, static_cast<long>(used->size())) : Rat(0));
        }
      }
    }
  }
}

TEST(MatrixState, HoldsWithoutFaults) {
  for (std::size_t d : {1, 2}) {
    const auto s = spec(d == 1 ? 4 : 5, 0, d, FaultKind::None);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto inst = instantiate(s, seed);
      const SimTrace t = run(inst.cfg, inst.inputs, inst.plan, inst.policy);
      TraceView v(t);
      const auto rep = check_matrix_state(v);
      EXPECT_TRUE(rep.ok()) << "seed " << seed;
      EXPECT_EQ(rep.checked, v.n() * (v.t_end() + 1));
    }
  }
}

TEST(MatrixState, HoldsUnderCrashHeavyPlans) {
  for (std::size_t d : {1, 2}) {
    const auto s = spec(d == 1 ? 7 : 5, d == 1 ? 2 : 1, d, FaultKind::CrashHeavy);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const auto inst = instantiate(s, seed);
      const SimTrace t = run(inst.cfg, inst.inputs, inst.plan, inst.policy);
      TraceView v(t);
      EXPECT_TRUE(check_matrix_state(v).ok()) << "seed " << seed;
      EXPECT_TRUE(check_decay(v).ok()) << "seed " << seed;
    }
  }
}

TEST(MatrixState, DetectsCorruptedState) {
  const auto inst = instantiate(spec(5, 1, 2, FaultKind::None), 8);
  SimTrace t = run(inst.cfg, inst.inputs, inst.plan, inst.policy);
  ASSERT_TRUE(check_matrix_state(TraceView(t)).ok());
  for (auto& e : t.events)
    if (auto* th = std::get_if<event::Threshold>(&e); th && th->proc == 2 && th->round == 2) {
      PointMultiset pts(th->polytope->vertices().begin(), th->polytope->vertices().end());
      pts[0][0] += q(1, 1000);
      th->polytope = std::make_shared<const ConvexPolytope>(convex_hull(pts, 2));
    }
  const auto rep = check_matrix_state(TraceView(t));
  ASSERT_FALSE(rep.ok());
  EXPECT_EQ(rep.mismatches.front().proc, 2u);
  EXPECT_EQ(rep.mismatches.front().round, 2u);
}

TEST(Decay, BoundsHoldAndReport) {
  const auto s = spec(6, 1, 1, FaultKind::Random);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = instantiate(s, seed);
    const SimTrace t = run(inst.cfg, inst.inputs, inst.plan, inst.policy);
    const auto rep = check_decay(TraceView(t));
    EXPECT_TRUE(rep.ok()) << "seed " << seed << ": " << (rep.violations.empty() ? "" : rep.violations.front());
    EXPECT_LE(rep.max_lambda, 1.0 - 1.0 / 6 + 1e-12);
    EXPECT_LE(rep.final_delta, std::pow(1.0 - 1.0 / 6, static_cast<double>(rep.rounds)) + 1e-12);
  }
}

TEST(Decay, FlagsAMatrixWithoutContraction) {
  const auto inst = instantiate(spec(4, 1, 1, FaultKind::None), 1);
  const SimTrace t = run(inst.cfg, inst.inputs, inst.plan, inst.policy);
  TraceView v(t);
  auto ms = build_all_M(v);
  ms[1] = StochMatrix::identity(4);
  EXPECT_FALSE(check_decay(v, ms).ok());
}

}  // namespace
}  // namespace polycc

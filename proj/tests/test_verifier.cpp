#include <gtest/gtest.h>

#include <optional>

#include "polycc/experiment.hpp"
#include "polycc/verifier.hpp"

namespace polycc {
namespace {

Rat q(long n, long d) { return make_rat(n, d); }
Point P(const Rat& x) { return Point{x}; }

Config cfg(std::size_t n, std::size_t f, std::size_t d = 1) {
  Config c;
  c.n = n;
  c.f = f;
  c.d = d;
  c.epsilon = q(1, 10);
  c.mu = 0;
  c.upper = 1;
  return c;
}

SchedulerPolicy random_policy(std::uint64_t seed) {
  SchedulerPolicy p;
  p.seed = seed;
  return p;
}

TEST(Verifier, PassesOnOrdinaryRuns) {
  ExperimentSpec s;
  s.cfg = cfg(6, 1, 2);
  s.faults.kind = FaultKind::Random;
  s.scheduler.mixed = true;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto out = execute(instantiate(s, seed));
    EXPECT_TRUE(out.verdict.ok()) << verdict_json(out).dump();
    for (const char* name : {"structure", "termination", "stable_vector", "validity", "agreement", "lower_bound", "matrix_state", "decay"})
      EXPECT_NE(out.verdict.find(name), nullptr) << name;
  }
}

TEST(Verifier, FarFaultyInputStaysOutsideDecisions) {
  const std::vector<Point> xs{P(0), P(q(1, 10)), P(q(2, 10)), P(q(3, 10))};
  FaultPlan plan;
  plan.faulty = {3};
  plan.incorrect_inputs[3] = P(1);
  const ConvexPolytope correct = convex_hull({xs[0], xs[1], xs[2]}, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SimTrace t = run(cfg(4, 1), xs, plan, random_policy(seed));
    TraceView v(t);
    EXPECT_TRUE(check_validity(v).ok);
    for (ProcessId p : v.fault_free()) EXPECT_TRUE(contains_polytope(correct, *v.decision(p)));
    EXPECT_TRUE(verify_trace(t).ok());
  }
}

TEST(Verifier, ShortPrefixAtLiveFaultyProcessShrinksZ) {
  // Process 3 is faulty but never crashes and is delivered three tuples
  // while every fault-free process gets all four.
  const std::vector<Point> xs{P(0), P(q(1, 10)), P(q(2, 10)), P(q(3, 10))};
  FaultPlan plan;
  plan.faulty = {3};
  plan.incorrect_inputs[3] = P(1);
  std::optional<SimTrace> found;
  for (std::uint64_t seed = 0; seed < 400 && !found; ++seed) {
    SimTrace t = run(cfg(4, 1), xs, plan, random_policy(seed));
    TraceView v(t);
    bool shape = v.delivered(3)->tuples.size() == 3;
    for (ProcessId p : v.fault_free()) shape = shape && v.delivered(p)->tuples.size() == 4;
    if (shape && !v.delivered(3)->contains_sender(0)) found = std::move(t);
  }
  ASSERT_TRUE(found);
  const SimTrace& t = *found;
  TraceView v(t);
  EXPECT_EQ(compute_IZ(v, ZScope::FaultFree), convex_hull({P(q(1, 10)), P(q(2, 10))}, 1));
  EXPECT_EQ(compute_IZ(v), ConvexPolytope::point(P(q(1, 5))));
  const Check c = check_lower_bound(v);
  EXPECT_TRUE(c.ok);
  EXPECT_FALSE(c.detail["fault_free_z_holds"].get<bool>());
  EXPECT_EQ(c.detail["fault_free_z_witness"]["round"].get<unsigned>(), 0u);
  EXPECT_TRUE(verify_trace(t).ok());
}

TEST(Verifier, IdenticalInputsAgreeExactly) {
  const std::vector<Point> xs(5, Point{q(1, 3), q(2, 3)});
  const SimTrace t = run(cfg(5, 1, 2), xs, {}, random_policy(4));
  TraceView v(t);
  const Check c = check_agreement(v);
  EXPECT_TRUE(c.ok);
  EXPECT_EQ(c.detail["max_distance"].get<double>(), 0.0);
  for (ProcessId p = 0; p < 5; ++p) EXPECT_EQ(*v.decision(p), ConvexPolytope::point(xs[0]));
}

TEST(Verifier, FaultFreeWithoutFaultsIsTrivial) {
  const std::vector<Point> xs{P(0), P(q(1, 2)), P(1)};
  const SimTrace t = run(cfg(3, 0), xs, {}, random_policy(0));
  const auto rep = verify_trace(t);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(compute_IZ(TraceView(t)), convex_hull(xs, 1));
}

TEST(Verifier, IZFromTheSmallestDeliveredSet) {
  const std::vector<Point> xs{P(0), P(q(1, 3)), P(q(2, 3)), P(1), P(q(1, 2))};
  SchedulerPolicy p;
  p.kind = SchedulerKind::SlowSet;
  p.slow = {4};
  const SimTrace t = run(cfg(5, 1), xs, {}, p);
  TraceView v(t);
  EXPECT_EQ(compute_IZ(v), convex_hull({xs[1], xs[2]}, 1));
  const Check c = check_lower_bound(v);
  EXPECT_TRUE(c.ok);
  EXPECT_EQ(c.detail["iz_vertices"].get<std::size_t>(), 2u);
}

TEST(Verifier, CorrectInputsModeUsesTheHull) {
  Config c = cfg(3, 1);
  c.mode = InputMode::CorrectInputs;
  const std::vector<Point> xs{P(0), P(q(1, 2)), P(1)};
  SchedulerPolicy p;
  p.kind = SchedulerKind::SlowSet;
  p.slow = {2};
  const SimTrace t = run(c, xs, {}, p);
  EXPECT_EQ(compute_IZ(TraceView(t)), convex_hull({xs[0], xs[1]}, 1));
  EXPECT_TRUE(verify_trace(t).ok());
}

TEST(Verifier, TamperedDecisionFailsAgreement) {
  SimTrace t = run(cfg(4, 1), {P(0), P(q(1, 4)), P(q(1, 2)), P(q(3, 4))}, {}, random_policy(1));
  for (auto& e : t.events)
    if (auto* d = std::get_if<event::Decide>(&e); d && d->proc == 0)
      d->polytope = std::make_shared<const ConvexPolytope>(ConvexPolytope::point(P(1)));
  const auto rep = verify_trace(t);
  EXPECT_FALSE(rep.ok());
  EXPECT_FALSE(rep.find("agreement")->ok);
  EXPECT_FALSE(rep.find("termination")->ok);
  EXPECT_TRUE(rep.find("agreement")->detail.contains("witnesses"));
}

TEST(Verifier, TamperedStateFailsValidityAndMatrixState) {
  SimTrace t = run(cfg(4, 1), {P(0), P(q(1, 4)), P(q(1, 2)), P(q(3, 4))}, {}, random_policy(2));
  for (auto& e : t.events)
    if (auto* th = std::get_if<event::Threshold>(&e); th && th->proc == 1 && th->round == 1)
      th->polytope = std::make_shared<const ConvexPolytope>(ConvexPolytope::point(P(1)));
  const auto rep = verify_trace(t);
  EXPECT_FALSE(rep.find("validity")->ok);
  EXPECT_FALSE(rep.find("matrix_state")->ok);
  EXPECT_NO_THROW(to_json(rep).dump());
}

TEST(OptimalityScenario, DegenerateInputsForceAPoint) {
  for (std::size_t d : {1, 2}) {
    const Config c = cfg(d == 1 ? 4 : 5, 1, d);
    const auto xs = preset_inputs("degenerate", c, 0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const ScenarioResult r = check_optimality_scenario(c, xs, seed);
      EXPECT_TRUE(r.verdict.ok) << r.verdict.detail.dump();
      EXPECT_TRUE(r.verdict.detail["iz_is_point"].get<bool>());
      EXPECT_TRUE(r.verdict.detail["decisions_equal_iz"].get<bool>());
      EXPECT_EQ(r.iz, ConvexPolytope::point(Point::origin(d)));
    }
  }
}

TEST(OptimalityScenario, GeneralInputs) {
  const Config c = cfg(7, 2, 1);
  const auto xs = random_inputs(c, 5, 100);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ScenarioResult r = check_optimality_scenario(c, xs, seed, {{6, P(1)}});
    EXPECT_TRUE(r.verdict.ok) << r.verdict.detail.dump();
  }
  Config correct = c;
  correct.mode = InputMode::CorrectInputs;
  EXPECT_THROW(check_optimality_scenario(correct, xs, 0), ConfigError);
}

}  // namespace
}  // namespace polycc

#include <gtest/gtest.h>

#include "polycc/protocol.hpp"

namespace polycc {
namespace {

Point P(long x) { return Point{Rat(x)}; }
Rat q(long n, long d) { return make_rat(n, d); }

Config cfg1(std::size_t n, std::size_t f, Rat eps = q(1, 100), InputMode mode = InputMode::IncorrectInputs) {
  Config c;
  c.n = n;
  c.f = f;
  c.d = 1;
  c.epsilon = eps;
  c.mu = 0;
  c.upper = 1;
  c.mode = mode;
  return c;
}

ConvexPolytope segment(const Rat& lo, const Rat& hi) { return convex_hull({Point{lo}, Point{hi}}); }

DeliveredSet delivered(ProcessId owner, std::vector<long> values) {
  DeliveredSet r{owner, {}};
  for (std::size_t k = 0; k < values.size(); ++k) r.tuples.push_back(InputTuple{P(values[k]), k});
  return r;
}

PolytopePtr ptr(ConvexPolytope h) { return std::make_shared<const ConvexPolytope>(std::move(h)); }

TEST(TEnd, Examples) {
  EXPECT_EQ(compute_t_end(cfg1(4, 1, q(1, 100))), 21u);
  Config zero = cfg1(4, 1, q(1, 100));
  zero.upper = 0;
  EXPECT_EQ(compute_t_end(zero), 1u);
  Config c = cfg1(5, 1, q(1, 10));
  c.d = 2;
  EXPECT_EQ(compute_t_end(c), 20u);
}

TEST(TEnd, NegativeBoundUsesLargerMagnitude) {
  Config c = cfg1(4, 1, q(1, 100));
  c.mu = -1;
  c.upper = q(1, 2);
  EXPECT_EQ(compute_t_end(c), 21u);
}

TEST(ConfigCheck, ResilienceBounds) {
  EXPECT_THROW(cfg1(3, 1).validate(), ConfigError);
  EXPECT_NO_THROW(cfg1(4, 1).validate());
  EXPECT_NO_THROW(cfg1(3, 1, q(1, 10), InputMode::CorrectInputs).validate());
  Config c = cfg1(4, 1);
  c.d = 2;
  EXPECT_THROW(c.validate(), ConfigError);
  c.n = 5;
  EXPECT_NO_THROW(c.validate());
  c.d = 3;
  EXPECT_THROW(c.validate(), ConfigError);
  Config e = cfg1(4, 1, Rat(0));
  EXPECT_THROW(e.validate(), ConfigError);
  EXPECT_THROW(cfg1(4, 1).validate_input(P(2)), ConfigError);
  EXPECT_EQ(parse_input_mode("correct-inputs"), InputMode::CorrectInputs);
  EXPECT_THROW(parse_input_mode("byzantine"), ConfigError);
}

TEST(Round0, SafeAreaOrHull) {
  auto r = delivered(0, {0, 1, 2, 3});
  Config c = cfg1(4, 1);
  c.upper = 3;
  EXPECT_EQ(round0_decide_h0(r, c), segment(1, 2));
  c.mode = InputMode::CorrectInputs;
  EXPECT_EQ(round0_decide_h0(r, c), segment(0, 3));
  EXPECT_THROW(round0_decide_h0(delivered(0, {0, 1}), c), InvariantViolation);
}

TEST(Round0, MinimumSizeSetIsNonEmpty) {
  Config c = cfg1(7, 2);
  c.upper = 9;
  auto r = delivered(0, {9, 0, 4, 1, 8});
  EXPECT_FALSE(round0_decide_h0(r, c).is_empty());
}

TEST(ProcessMachine, AveragesOverThreshold) {
  Config c = cfg1(3, 1, q(1, 10), InputMode::CorrectInputs);
  c.upper = 4;
  Process p(0, P(0), c, 5);
  Broadcast b = p.on_delivered(delivered(0, {0, 1}));
  EXPECT_EQ(b.round, 1u);
  EXPECT_EQ(*b.payload, segment(0, 1));
  EXPECT_EQ(p.round(), 1u);
  EXPECT_FALSE(p.try_threshold());
  EXPECT_EQ(p.on_round_message({ptr(segment(2, 4)), 1, 1}), Receipt::Accepted);
  auto out = p.try_threshold();
  ASSERT_TRUE(out);
  EXPECT_EQ(*out->h, segment(1, q(5, 2)));
  EXPECT_EQ(out->senders, (std::vector<ProcessId>{0, 1}));
  ASSERT_TRUE(out->next);
  EXPECT_EQ(out->next->round, 2u);
  EXPECT_EQ(p.on_round_message({ptr(segment(0, 4)), 2, 1}), Receipt::Late);
}

TEST(ProcessMachine, IdenticalOperandsAreFixed) {
  Config c = cfg1(4, 1);
  Process p(0, P(0), c, 3);
  p.on_delivered(delivered(0, {0, 1, 0, 1}));
  const ConvexPolytope h = *p.history().front();
  for (ProcessId s : {1, 2}) p.on_round_message({ptr(h), s, 1});
  auto out = p.try_threshold();
  ASSERT_TRUE(out);
  EXPECT_EQ(*out->h, h);
}

TEST(ProcessMachine, FutureRoundsAreBuffered) {
  Config c = cfg1(4, 1);
  Process p(0, P(0), c, 3);
  auto h = ptr(segment(0, 1));
  EXPECT_EQ(p.on_round_message({h, 1, 1}), Receipt::Buffered);
  EXPECT_EQ(p.on_round_message({h, 1, 2}), Receipt::Buffered);
  EXPECT_EQ(p.on_round_message({h, 2, 1}), Receipt::Buffered);
  p.on_delivered(delivered(0, {0, 1, 0, 1}));
  auto out = p.try_threshold();
  ASSERT_TRUE(out);
  EXPECT_EQ(out->round, 1u);
  EXPECT_EQ(out->senders.size(), 3u);
  EXPECT_FALSE(p.try_threshold());
  EXPECT_EQ(p.on_round_message({h, 3, 2}), Receipt::Accepted);
  out = p.try_threshold();
  ASSERT_TRUE(out);
  EXPECT_EQ(out->round, 2u);
  EXPECT_EQ(out->senders, (std::vector<ProcessId>{0, 1, 3}));
}

TEST(ProcessMachine, AllMessagesBeforeCheckUseWeightOneOverN) {
  Config c = cfg1(4, 1);
  c.upper = 4;
  Process p(0, P(0), c, 1);
  for (ProcessId s = 1; s < 4; ++s) p.on_round_message({ptr(ConvexPolytope::point(P(static_cast<long>(s)))), s, 1});
  DeliveredSet r{0, {{P(0), 0}, {P(0), 1}, {P(0), 2}}};
  p.on_delivered(r);
  auto out = p.try_threshold();
  ASSERT_TRUE(out);
  EXPECT_EQ(out->senders.size(), 4u);
  EXPECT_EQ(*out->h, ConvexPolytope::point(Point{q(6, 4)}));
  EXPECT_FALSE(out->next);
  EXPECT_TRUE(p.decided());
  EXPECT_EQ(*p.decision(), *out->h);
}

TEST(ProcessMachine, DuplicatesAndSelfMessagesAreBugs) {
  Config c = cfg1(4, 1);
  Process p(0, P(0), c, 3);
  auto h = ptr(segment(0, 1));
  p.on_round_message({h, 1, 1});
  EXPECT_THROW(p.on_round_message({h, 1, 1}), InvariantViolation);
  EXPECT_THROW(p.on_round_message({h, 0, 1}), InvariantViolation);
  EXPECT_THROW(p.on_round_message({h, 2, 0}), InvariantViolation);
  p.on_delivered(delivered(0, {0, 1, 1}));
  EXPECT_THROW(p.on_delivered(delivered(0, {0, 1, 1})), InvariantViolation);
}

}  // namespace
}  // namespace polycc

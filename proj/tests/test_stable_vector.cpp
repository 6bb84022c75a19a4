#include <gtest/gtest.h>

#include "polycc/stable_vector.hpp"

namespace polycc {
namespace {

Point P(long x) { return Point{Rat(x)}; }

TEST(StableVector, DuplicateSubmitThrows) {
  StableVector sv(4, 1);
  sv.submit(0, P(0));
  EXPECT_THROW(sv.submit(0, P(1)), StableVectorError);
}

TEST(StableVector, DeliverNeedsNMinusFCommits) {
  StableVector sv(4, 1);
  for (ProcessId p = 0; p < 4; ++p) sv.submit(p, P(static_cast<long>(p)));
  sv.commit(2);
  sv.commit(0);
  EXPECT_FALSE(sv.can_deliver());
  EXPECT_THROW(sv.deliver(1, 2), StableVectorError);
  sv.commit(3);
  ASSERT_TRUE(sv.can_deliver());
  EXPECT_THROW(sv.deliver(1, 4), StableVectorError);
  const auto& r = sv.deliver(1, 3);
  ASSERT_EQ(r.tuples.size(), 3u);
  EXPECT_EQ(r.tuples[0].sender, 2u);
  EXPECT_EQ(r.tuples[1].sender, 0u);
  EXPECT_EQ(r.tuples[2].sender, 3u);
  EXPECT_THROW(sv.deliver(1, 3), StableVectorError);
}

TEST(StableVector, PrefixesFormAChain) {
  StableVector sv(5, 2);
  for (ProcessId p = 0; p < 5; ++p) sv.submit(p, P(static_cast<long>(p)));
  for (ProcessId p : {4, 1, 3}) sv.commit(p);
  sv.deliver(0, 3);
  sv.commit(0);
  sv.deliver(1, 4);
  sv.commit(2);
  sv.deliver(2, 5);
  sv.deliver(3, 3);
  for (ProcessId a = 0; a < 4; ++a)
    for (ProcessId b = 0; b < 4; ++b) {
      const auto& ra = *sv.delivered(a);
      const auto& rb = *sv.delivered(b);
      EXPECT_TRUE(ra.subset_of(rb) || rb.subset_of(ra));
    }
  EXPECT_TRUE(sv.delivered(3)->subset_of(*sv.delivered(2)));
  EXPECT_FALSE(sv.delivered(2)->subset_of(*sv.delivered(3)));
}

TEST(StableVector, DroppedTupleNeverDelivered) {
  StableVector sv(4, 1);
  for (ProcessId p = 0; p < 4; ++p) sv.submit(p, P(static_cast<long>(p)));
  sv.drop(3);
  EXPECT_FALSE(sv.is_pending(3));
  EXPECT_THROW(sv.commit(3), StableVectorError);
  for (ProcessId p : {0, 1, 2}) sv.commit(p);
  EXPECT_FALSE(sv.deliver(0, 3).contains_sender(3));
}

TEST(StableVector, RejectsBadIds) {
  StableVector sv(4, 1);
  EXPECT_THROW(sv.submit(4, P(0)), StableVectorError);
}

}  // namespace
}  // namespace polycc

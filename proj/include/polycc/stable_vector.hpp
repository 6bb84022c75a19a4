#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "polycc/geometry.hpp"

namespace polycc {

using ProcessId = std::size_t;

/// (x_i, i, 0): the round-0 message of process i.
struct InputTuple {
  Point value;
  ProcessId sender = 0;

  friend bool operator==(const InputTuple&, const InputTuple&) = default;
};

/// R_i as returned to `owner`. Tuples are in commit order.
struct DeliveredSet {
  ProcessId owner = 0;
  std::vector<InputTuple> tuples;

  bool contains_sender(ProcessId p) const;
  /// Every tuple of `this` is also in `other`.
  bool subset_of(const DeliveredSet& other) const;
};

class StableVectorError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Round-0 primitive backed by one global append-only commit sequence.
///
/// Every delivered set is a prefix of that sequence of length at least n - f,
/// so any two delivered sets are ordered by inclusion. The caller (the
/// simulator's scheduler) decides when pending tuples commit and how long a
/// prefix each process receives.
class StableVector {
 public:
  StableVector(std::size_t n, std::size_t f);

  std::size_t n() const { return n_; }
  std::size_t f() const { return f_; }

  /// Throws StableVectorError on a second submission by the same process.
  void submit(ProcessId p, Point x);
  bool is_pending(ProcessId p) const;
  std::vector<ProcessId> pending() const;
  /// Appends p's pending tuple to the commit sequence.
  void commit(ProcessId p);
  /// Discards p's pending tuple; only legal once p has crashed (checked by the caller).
  void drop(ProcessId p);

  std::size_t committed_count() const { return sequence_.size(); }
  const std::vector<InputTuple>& sequence() const { return sequence_; }

  bool can_deliver() const { return sequence_.size() >= n_ - f_; }
  bool has_delivered(ProcessId p) const { return delivered_[p].has_value(); }
  /// Freezes and returns the first `prefix` committed tuples as R_p.
  /// Requires n - f <= prefix <= committed_count() and no earlier delivery to p.
  const DeliveredSet& deliver(ProcessId p, std::size_t prefix);
  const std::optional<DeliveredSet>& delivered(ProcessId p) const { return delivered_[p]; }

 private:
  void check_id(ProcessId p) const;

  std::size_t n_;
  std::size_t f_;
  std::vector<std::optional<Point>> pending_;
  std::vector<bool> submitted_;
  std::vector<InputTuple> sequence_;
  std::vector<std::optional<DeliveredSet>> delivered_;
};

}  // namespace polycc

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "polycc/protocol.hpp"

namespace polycc {

/// The adversary's fault choices for one execution.
///
/// A crash point k means the process performs exactly k actions and crashes
/// when it attempts action k + 1. Actions are the round-0 submission and each
/// individual channel send, so k = 0 crashes before submitting and a crash
/// point can fall between the sends of one broadcast.
struct FaultPlan {
  std::set<ProcessId> faulty;
  std::map<ProcessId, Point> incorrect_inputs;
  std::map<ProcessId, std::size_t> crash_points;

  /// Throws ConfigError when the plan does not fit `cfg`.
  void validate(const Config& cfg) const;
};

enum class SchedulerKind { SeededRandom, RoundRobin, SlowSet, PrefixSkew };

std::string to_string(SchedulerKind kind);
SchedulerKind parse_scheduler_kind(const std::string& text);

/// Seeded-random picks uniformly among enabled steps and round-0 prefix
/// lengths. Prefix-skew does the same but hands out only the shortest or the
/// longest available prefix. Slow-set withholds every step involving `slow`
/// until all other live processes have decided, and gives out n - f
/// prefixes. Round-robin cycles over step slots deterministically.
struct SchedulerPolicy {
  SchedulerKind kind = SchedulerKind::SeededRandom;
  std::uint64_t seed = 0;
  std::set<ProcessId> slow;

  void validate(const Config& cfg) const;
};

}  // namespace polycc

#pragma once

#include <string>
#include <vector>

#include "polycc/fault_plan.hpp"
#include "polycc/trace.hpp"

namespace polycc {

/// Runs one complete execution and records it.
///
/// `inputs[i]` is process i's true input; a faulty process listed in
/// plan.incorrect_inputs starts from that point instead. The run ends when no
/// step is enabled, which happens once every live process has decided and
/// every channel to a live process is drained. Throws ConfigError before
/// simulating anything if the configuration, inputs, plan or policy are
/// invalid.
SimTrace run(const Config& cfg, const std::vector<Point>& inputs, const FaultPlan& plan, const SchedulerPolicy& policy);

struct StructureReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

/// Structural checks on a recorded trace: per-channel FIFO and exactly-once
/// delivery, no activity after a crash, delivered sets are prefixes of the
/// commit sequence, and F[0] ⊆ F[1] ⊆ ... ⊆ F.
StructureReport check_structure(const SimTrace& trace);

}  // namespace polycc

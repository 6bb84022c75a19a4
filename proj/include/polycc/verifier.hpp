#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "polycc/matrix_oracle.hpp"
#include "polycc/trace.hpp"

namespace polycc {

/// One property verdict. `detail` carries margins and, on failure, a witness
/// (process, round, polytopes) that can be checked against the trace alone.
struct Check {
  std::string name;
  bool ok = true;
  json detail = json::object();
};

struct VerdictReport {
  std::vector<Check> checks;

  bool ok() const;
  const Check* find(const std::string& name) const;
};

json to_json(const Check& c);
json to_json(const VerdictReport& r);

/// Every fault-free process has h[0..t_end] and decided h[t_end].
Check check_termination(const TraceView& view);
/// Liveness (|R_i| >= n - f for every live process), containment (chain
/// order) and no fabrication.
Check check_stable_vector(const TraceView& view);
/// h_i[t] inside the hull of the correct inputs, fault-free i, every t.
Check check_validity(const TraceView& view);
/// Max pairwise Hausdorff distance of fault-free decisions is below epsilon,
/// decided exactly on squared distances.
Check check_agreement(const TraceView& view);

/// Which processes Z intersects over.
///   FaultFree     V - F, the textbook definition
///   RoundOneAlive V - F[1], every process whose h[0] enters round 1
/// The containment claim below only holds in general for RoundOneAlive: a
/// faulty process that never crashes may be delivered a shorter prefix than
/// every fault-free process, and its smaller h[0] then feeds everyone.
enum class ZScope { FaultFree, RoundOneAlive };

/// Z is the smallest delivered set in scope (checked to be the intersection
/// of all of them). I_Z is its safe area, or its hull in correct-inputs mode.
ConvexPolytope compute_IZ(const TraceView& view, ZScope scope = ZScope::RoundOneAlive);
/// I_Z inside h_i[t] for every process i outside F[t+1] and every t, with Z
/// over V - F[1]. The detail also reports whether the same holds with Z over
/// V - F (`fault_free_z_holds`); that variant is not asserted.
Check check_lower_bound(const TraceView& view);

Check check_structure_verdict(const SimTrace& trace);
Check check_matrix_state_verdict(const TraceView& view, const std::vector<StochMatrix>& ms);
Check check_decay_verdict(const TraceView& view, const std::vector<StochMatrix>& ms);

struct VerifyOptions {
  bool matrix = true;
};

/// All of the above on one trace. Malformed traces produce failed checks,
/// not exceptions.
VerdictReport verify_trace(const SimTrace& trace, const VerifyOptions& opts = {});

struct ScenarioResult {
  SimTrace trace;
  ConvexPolytope iz;
  Check verdict;
};

/// Witness execution for the optimality bound: S is the last f process ids,
/// marked faulty (optionally with incorrect inputs) and scheduled by the
/// slow-set adversary. Asserts that processes in V - S decide without any
/// message from S, that their decisions contain I_Z, and that each decision
/// is within epsilon of I_Z. Requires incorrect-inputs mode.
ScenarioResult check_optimality_scenario(const Config& cfg, const std::vector<Point>& inputs, std::uint64_t seed,
                                         const std::map<ProcessId, Point>& incorrect = {});

}  // namespace polycc

#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "polycc/fault_plan.hpp"
#include "polycc/json_io.hpp"
#include "polycc/protocol.hpp"

namespace polycc {

namespace event {

struct SvSubmit {
  ProcessId proc;
  Point value;
};
struct SvCommit {
  ProcessId proc;
};
struct SvDrop {
  ProcessId proc;
};
struct SvDeliver {
  ProcessId proc;
  std::vector<InputTuple> tuples;
};
struct H0 {
  ProcessId proc;
  PolytopePtr polytope;
};
struct Send {
  ProcessId from, to;
  unsigned round;
};
struct Recv {
  ProcessId from, to;
  unsigned round;
  Receipt status;
};
struct Threshold {
  ProcessId proc;
  unsigned round;
  std::vector<ProcessId> senders;
  PolytopePtr polytope;
};
struct Crash {
  ProcessId proc;
  std::size_t actions;
};
struct Decide {
  ProcessId proc;
  unsigned t_end;
  PolytopePtr polytope;
};

}  // namespace event

using TraceEvent = std::variant<event::SvSubmit, event::SvCommit, event::SvDrop, event::SvDeliver, event::H0,
                                event::Send, event::Recv, event::Threshold, event::Crash, event::Decide>;

struct TraceHeader {
  Config cfg;
  unsigned t_end = 0;
  /// Inputs actually used by each process (incorrect inputs already applied).
  std::vector<Point> inputs;
  FaultPlan plan;
  SchedulerPolicy policy;
};

/// A complete recorded execution.
struct SimTrace {
  TraceHeader header;
  std::vector<TraceEvent> events;
};

class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json to_json(const Config& cfg);
Config config_from_json(const json& j);
json to_json(const FaultPlan& plan);
FaultPlan fault_plan_from_json(const json& j);
json to_json(const SchedulerPolicy& policy);
SchedulerPolicy policy_from_json(const json& j);

json to_json(const TraceEvent& e);
TraceEvent event_from_json(const json& j);
json to_json(const TraceHeader& h);
TraceHeader header_from_json(const json& j);

/// One JSON object per line: the header first, then every event in order.
void write_jsonl(const SimTrace& trace, std::ostream& out);
std::string to_jsonl(const SimTrace& trace);
SimTrace read_jsonl(std::istream& in);
SimTrace read_jsonl_file(const std::string& path);
void write_jsonl_file(const SimTrace& trace, const std::string& path);

/// Indexed per-process views derived from a trace's event log. Holds
/// references into the trace, which must outlive it.
class TraceView {
 public:
  explicit TraceView(const SimTrace& trace);

  const SimTrace& trace() const { return *trace_; }
  const Config& cfg() const { return trace_->header.cfg; }
  std::size_t n() const { return cfg().n; }
  unsigned t_end() const { return trace_->header.t_end; }

  bool is_faulty(ProcessId p) const { return trace_->header.plan.faulty.count(p) > 0; }
  std::vector<ProcessId> fault_free() const;
  /// Inputs that count for validity: V - F in incorrect-inputs mode, all otherwise.
  PointMultiset correct_inputs() const;

  /// h_p[t] if p computed it, else nullptr.
  const ConvexPolytope* h(ProcessId p, unsigned t) const;
  /// Senders of MSG_p[t] as used at the threshold; nullptr if it never fired.
  const std::vector<ProcessId>* used_senders(ProcessId p, unsigned t) const;
  const std::optional<DeliveredSet>& delivered(ProcessId p) const { return delivered_[p]; }
  const ConvexPolytope* decision(ProcessId p) const { return decision_[p]; }
  bool crashed(ProcessId p) const { return crashed_[p]; }
  bool submitted(ProcessId p) const { return submitted_[p].has_value(); }
  const std::optional<Point>& submitted_value(ProcessId p) const { return submitted_[p]; }
  /// p sent at least one round-r message (round 0: submitted its input).
  bool sent_in_round(ProcessId p, unsigned r) const;

  /// F[t]: crashed processes that sent no round-t message.
  std::set<ProcessId> crashed_before_round(unsigned t) const;

 private:
  const SimTrace* trace_;
  std::vector<std::vector<const ConvexPolytope*>> h_;
  std::vector<std::vector<std::optional<std::vector<ProcessId>>>> used_;
  std::vector<std::optional<DeliveredSet>> delivered_;
  std::vector<const ConvexPolytope*> decision_;
  std::vector<bool> crashed_;
  std::vector<std::optional<Point>> submitted_;
  std::vector<std::set<unsigned>> sent_rounds_;
};

/// F[t] for a complete trace.
std::set<ProcessId> derive_F_of_t(const SimTrace& trace, unsigned t);

}  // namespace polycc

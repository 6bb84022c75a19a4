#include "polycc/trace.hpp"

#include <fstream>
#include <sstream>

namespace polycc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Receipt parse_receipt(const std::string& s) {
  if (s == "accepted") return Receipt::Accepted;
  if (s == "buffered") return Receipt::Buffered;
  if (s == "late") return Receipt::Late;
  throw TraceFormatError("unknown receipt status '" + s + "'");
}

PolytopePtr polytope_ptr(const json& j) { return std::make_shared<const ConvexPolytope>(polytope_from_json(j)); }

}  // namespace

json to_json(const Config& cfg) {
  return json{{"n", cfg.n},
              {"f", cfg.f},
              {"d", cfg.d},
              {"epsilon", format_rat(cfg.epsilon)},
              {"mu", format_rat(cfg.mu)},
              {"U", format_rat(cfg.upper)},
              {"mode", to_string(cfg.mode)}};
}

Config config_from_json(const json& j) {
  Config cfg;
  cfg.n = j.at("n").get<std::size_t>();
  cfg.f = j.at("f").get<std::size_t>();
  cfg.d = j.at("d").get<std::size_t>();
  cfg.epsilon = rat_from_json(j.at("epsilon"));
  if (j.contains("mu")) cfg.mu = rat_from_json(j.at("mu"));
  if (j.contains("U")) cfg.upper = rat_from_json(j.at("U"));
  if (j.contains("mode")) cfg.mode = parse_input_mode(j.at("mode").get<std::string>());
  return cfg;
}

json to_json(const FaultPlan& plan) {
  json incorrect = json::object();
  for (const auto& [p, x] : plan.incorrect_inputs) incorrect[std::to_string(p)] = to_json(x);
  json crashes = json::object();
  for (const auto& [p, k] : plan.crash_points) crashes[std::to_string(p)] = k;
  return json{{"faulty", plan.faulty}, {"incorrect_inputs", incorrect}, {"crash_points", crashes}};
}

FaultPlan fault_plan_from_json(const json& j) {
  FaultPlan plan;
  if (j.contains("faulty")) plan.faulty = j.at("faulty").get<std::set<ProcessId>>();
  if (j.contains("incorrect_inputs"))
    for (const auto& [k, v] : j.at("incorrect_inputs").items()) plan.incorrect_inputs[std::stoul(k)] = point_from_json(v);
  if (j.contains("crash_points"))
    for (const auto& [k, v] : j.at("crash_points").items()) plan.crash_points[std::stoul(k)] = v.get<std::size_t>();
  return plan;
}

json to_json(const SchedulerPolicy& policy) {
  return json{{"kind", to_string(policy.kind)}, {"seed", policy.seed}, {"slow", policy.slow}};
}

SchedulerPolicy policy_from_json(const json& j) {
  SchedulerPolicy policy;
  if (j.is_string()) {
    policy.kind = parse_scheduler_kind(j.get<std::string>());
    return policy;
  }
  if (j.contains("kind")) policy.kind = parse_scheduler_kind(j.at("kind").get<std::string>());
  if (j.contains("seed")) policy.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("slow")) policy.slow = j.at("slow").get<std::set<ProcessId>>();
  return policy;
}

json to_json(const TraceEvent& e) {
  return std::visit(
      overloaded{
          [](const event::SvSubmit& s) { return json{{"type", "sv_submit"}, {"proc", s.proc}, {"value", to_json(s.value)}}; },
          [](const event::SvCommit& s) { return json{{"type", "sv_commit"}, {"proc", s.proc}}; },
          [](const event::SvDrop& s) { return json{{"type", "sv_drop"}, {"proc", s.proc}}; },
          [](const event::SvDeliver& s) {
            json tuples = json::array();
            for (const auto& t : s.tuples)
              tuples.push_back(json{{"sender", t.sender}, {"value", to_json(t.value)}, {"round", 0}});
            return json{{"type", "sv_deliver"}, {"proc", s.proc}, {"tuples", std::move(tuples)}};
          },
          [](const event::H0& s) { return json{{"type", "h0"}, {"proc", s.proc}, {"polytope", to_json(*s.polytope)}}; },
          [](const event::Send& s) {
            return json{{"type", "send"}, {"from", s.from}, {"to", s.to}, {"round", s.round}};
          },
          [](const event::Recv& s) {
            return json{{"type", "recv"}, {"from", s.from}, {"to", s.to}, {"round", s.round}, {"status", to_string(s.status)}};
          },
          [](const event::Threshold& s) {
            return json{{"type", "threshold"},
                        {"proc", s.proc},
                        {"round", s.round},
                        {"senders", s.senders},
                        {"polytope", to_json(*s.polytope)}};
          },
          [](const event::Crash& s) { return json{{"type", "crash"}, {"proc", s.proc}, {"actions", s.actions}}; },
          [](const event::Decide& s) {
            return json{{"type", "decide"}, {"proc", s.proc}, {"t_end", s.t_end}, {"polytope", to_json(*s.polytope)}};
          },
      },
      e);
}

TraceEvent event_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "sv_submit") return event::SvSubmit{j.at("proc"), point_from_json(j.at("value"))};
  if (type == "sv_commit") return event::SvCommit{j.at("proc")};
  if (type == "sv_drop") return event::SvDrop{j.at("proc")};
  if (type == "sv_deliver") {
    event::SvDeliver e{j.at("proc"), {}};
    for (const auto& t : j.at("tuples")) e.tuples.push_back(InputTuple{point_from_json(t.at("value")), t.at("sender")});
    return e;
  }
  if (type == "h0") return event::H0{j.at("proc"), polytope_ptr(j.at("polytope"))};
  if (type == "send") return event::Send{j.at("from"), j.at("to"), j.at("round")};
  if (type == "recv") return event::Recv{j.at("from"), j.at("to"), j.at("round"), parse_receipt(j.at("status"))};
  if (type == "threshold")
    return event::Threshold{j.at("proc"), j.at("round"), j.at("senders").get<std::vector<ProcessId>>(),
                            polytope_ptr(j.at("polytope"))};
  if (type == "crash") return event::Crash{j.at("proc"), j.at("actions")};
  if (type == "decide") return event::Decide{j.at("proc"), j.at("t_end"), polytope_ptr(j.at("polytope"))};
  throw TraceFormatError("unknown event type '" + type + "'");
}

json to_json(const TraceHeader& h) {
  json inputs = json::array();
  for (const auto& x : h.inputs) inputs.push_back(to_json(x));
  return json{{"type", "header"},          {"format", "polycc-trace/1"}, {"config", to_json(h.cfg)},
              {"t_end", h.t_end},          {"inputs", std::move(inputs)}, {"fault_plan", to_json(h.plan)},
              {"scheduler", to_json(h.policy)}};
}

TraceHeader header_from_json(const json& j) {
  if (j.value("type", "") != "header") throw TraceFormatError("first trace line must be the header");
  TraceHeader h;
  h.cfg = config_from_json(j.at("config"));
  h.t_end = j.at("t_end").get<unsigned>();
  for (const auto& x : j.at("inputs")) h.inputs.push_back(point_from_json(x));
  h.plan = fault_plan_from_json(j.at("fault_plan"));
  h.policy = policy_from_json(j.at("scheduler"));
  if (h.inputs.size() != h.cfg.n) throw TraceFormatError("header lists " + std::to_string(h.inputs.size()) + " inputs for n=" + std::to_string(h.cfg.n));
  return h;
}

void write_jsonl(const SimTrace& trace, std::ostream& out) {
  out << to_json(trace.header).dump() << '\n';
  for (const auto& e : trace.events) out << to_json(e).dump() << '\n';
}

std::string to_jsonl(const SimTrace& trace) {
  std::ostringstream os;
  write_jsonl(trace, os);
  return os.str();
}

SimTrace read_jsonl(std::istream& in) {
  SimTrace trace;
  std::string line;
  bool have_header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      if (!have_header) {
        trace.header = header_from_json(j);
        have_header = true;
      } else {
        trace.events.push_back(event_from_json(j));
      }
    } catch (const json::exception& e) {
      throw TraceFormatError("trace line " + std::to_string(lineno) + ": " + e.what());
    } catch (const ParseError& e) {
      throw TraceFormatError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header) throw TraceFormatError("empty trace");
  return trace;
}

SimTrace read_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceFormatError("cannot open trace file '" + path + "'");
  return read_jsonl(in);
}

void write_jsonl_file(const SimTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace file '" + path + "'");
  write_jsonl(trace, out);
}

TraceView::TraceView(const SimTrace& trace)
    : trace_(&trace),
      h_(trace.header.cfg.n, std::vector<const ConvexPolytope*>(trace.header.t_end + 1, nullptr)),
      used_(trace.header.cfg.n, std::vector<std::optional<std::vector<ProcessId>>>(trace.header.t_end + 1)),
      delivered_(trace.header.cfg.n),
      decision_(trace.header.cfg.n, nullptr),
      crashed_(trace.header.cfg.n, false),
      submitted_(trace.header.cfg.n),
      sent_rounds_(trace.header.cfg.n) {
  const std::size_t n = trace.header.cfg.n;
  auto check = [n](ProcessId p) {
    if (p >= n) throw TraceFormatError("process id " + std::to_string(p) + " out of range");
  };
  auto check_round = [this](unsigned t) {
    if (t > t_end()) throw TraceFormatError("round " + std::to_string(t) + " beyond t_end");
  };
  for (const auto& e : trace.events) {
    std::visit(overloaded{
                   [&](const event::SvSubmit& s) {
                     check(s.proc);
                     submitted_[s.proc] = s.value;
                   },
                   [&](const event::SvCommit& s) { check(s.proc); },
                   [&](const event::SvDrop& s) { check(s.proc); },
                   [&](const event::SvDeliver& s) {
                     check(s.proc);
                     delivered_[s.proc] = DeliveredSet{s.proc, s.tuples};
                   },
                   [&](const event::H0& s) {
                     check(s.proc);
                     h_[s.proc][0] = s.polytope.get();
                   },
                   [&](const event::Send& s) {
                     check(s.from);
                     check(s.to);
                     sent_rounds_[s.from].insert(s.round);
                   },
                   [&](const event::Recv& s) {
                     check(s.from);
                     check(s.to);
                   },
                   [&](const event::Threshold& s) {
                     check(s.proc);
                     check_round(s.round);
                     h_[s.proc][s.round] = s.polytope.get();
                     used_[s.proc][s.round] = s.senders;
                   },
                   [&](const event::Crash& s) {
                     check(s.proc);
                     crashed_[s.proc] = true;
                   },
                   [&](const event::Decide& s) {
                     check(s.proc);
                     decision_[s.proc] = s.polytope.get();
                   },
               },
               e);
  }
}

std::vector<ProcessId> TraceView::fault_free() const {
  std::vector<ProcessId> out;
  for (ProcessId p = 0; p < n(); ++p)
    if (!is_faulty(p)) out.push_back(p);
  return out;
}

PointMultiset TraceView::correct_inputs() const {
  PointMultiset out;
  for (ProcessId p = 0; p < n(); ++p)
    if (cfg().mode == InputMode::CorrectInputs || !is_faulty(p)) out.push_back(trace_->header.inputs[p]);
  return out;
}

const ConvexPolytope* TraceView::h(ProcessId p, unsigned t) const {
  if (p >= n() || t > t_end()) return nullptr;
  return h_[p][t];
}

const std::vector<ProcessId>* TraceView::used_senders(ProcessId p, unsigned t) const {
  if (p >= n() || t > t_end() || !used_[p][t]) return nullptr;
  return &*used_[p][t];
}

bool TraceView::sent_in_round(ProcessId p, unsigned r) const {
  if (r == 0) return submitted(p);
  return sent_rounds_[p].count(r) > 0;
}

std::set<ProcessId> TraceView::crashed_before_round(unsigned t) const {
  std::set<ProcessId> out;
  for (ProcessId p = 0; p < n(); ++p)
    if (crashed_[p] && !sent_in_round(p, t)) out.insert(p);
  return out;
}

std::set<ProcessId> derive_F_of_t(const SimTrace& trace, unsigned t) { return TraceView(trace).crashed_before_round(t); }

}  // namespace polycc

#include "polycc/net_sim.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>

#include "polycc/rng.hpp"

namespace polycc {

std::string to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::SeededRandom: return "seeded-random";
    case SchedulerKind::RoundRobin: return "round-robin";
    case SchedulerKind::SlowSet: return "slow-set";
    case SchedulerKind::PrefixSkew: return "prefix-skew";
  }
  return "?";
}

SchedulerKind parse_scheduler_kind(const std::string& text) {
  if (text == "seeded-random") return SchedulerKind::SeededRandom;
  if (text == "round-robin") return SchedulerKind::RoundRobin;
  if (text == "slow-set") return SchedulerKind::SlowSet;
  if (text == "prefix-skew") return SchedulerKind::PrefixSkew;
  throw ConfigError("unknown scheduler '" + text + "' (expected seeded-random, round-robin, slow-set or prefix-skew)");
}

void FaultPlan::validate(const Config& cfg) const {
  if (faulty.size() > cfg.f)
    throw ConfigError("fault plan names " + std::to_string(faulty.size()) + " faulty processes but f=" + std::to_string(cfg.f));
  for (ProcessId p : faulty)
    if (p >= cfg.n) throw ConfigError("faulty process id " + std::to_string(p) + " out of range");
  for (const auto& [p, x] : incorrect_inputs) {
    if (!faulty.count(p)) throw ConfigError("incorrect input given for non-faulty process " + std::to_string(p));
    cfg.validate_input(x);
  }
  if (cfg.mode == InputMode::CorrectInputs && !incorrect_inputs.empty())
    throw ConfigError("correct-inputs mode does not allow incorrect inputs");
  for (const auto& [p, k] : crash_points) {
    (void)k;
    if (!faulty.count(p)) throw ConfigError("crash point given for non-faulty process " + std::to_string(p));
  }
}

void SchedulerPolicy::validate(const Config& cfg) const {
  if (slow.size() > cfg.f)
    throw ConfigError("slow set of size " + std::to_string(slow.size()) + " exceeds f=" + std::to_string(cfg.f));
  for (ProcessId p : slow)
    if (p >= cfg.n) throw ConfigError("slow process id " + std::to_string(p) + " out of range");
}

namespace {

enum class StepKind { Start, Commit, Drop, SvDeliver, Deliver };

struct Step {
  StepKind kind;
  ProcessId a = 0;
  ProcessId b = 0;
};

class Simulator {
 public:
  Simulator(const Config& cfg, const std::vector<Point>& inputs, const FaultPlan& plan, const SchedulerPolicy& policy)
      : cfg_(cfg),
        plan_(plan),
        policy_(policy),
        rng_(policy.seed),
        sv_(cfg.n, cfg.f),
        started_(cfg.n, false),
        crashed_(cfg.n, false),
        actions_(cfg.n, 0),
        channels_(cfg.n * cfg.n) {
    trace_.header.cfg = cfg;
    trace_.header.t_end = compute_t_end(cfg);
    trace_.header.plan = plan;
    trace_.header.policy = policy;
    for (ProcessId p = 0; p < cfg.n; ++p) {
      auto it = plan.incorrect_inputs.find(p);
      trace_.header.inputs.push_back(it != plan.incorrect_inputs.end() ? it->second : inputs[p]);
    }
    procs_.reserve(cfg.n);
    for (ProcessId p = 0; p < cfg.n; ++p) procs_.emplace_back(p, trace_.header.inputs[p], trace_.header.cfg, trace_.header.t_end);
  }

  SimTrace run() {
    for (ProcessId p = 0; p < cfg_.n; ++p) maybe_crash(p);
    std::vector<Step> steps;
    for (;;) {
      enabled(steps);
      if (steps.empty()) break;
      perform(choose(steps));
    }
    return std::move(trace_);
  }

 private:
  bool is_slow(ProcessId p) const { return policy_.kind == SchedulerKind::SlowSet && policy_.slow.count(p) > 0; }

  std::deque<RoundMessage>& channel(ProcessId from, ProcessId to) { return channels_[from * cfg_.n + to]; }

  void enabled(std::vector<Step>& out) {
    out.clear();
    const std::size_t n = cfg_.n;
    for (ProcessId p = 0; p < n; ++p)
      if (!started_[p] && !crashed_[p]) out.push_back({StepKind::Start, p});
    for (ProcessId p : sv_.pending()) {
      out.push_back({StepKind::Commit, p});
      if (crashed_[p]) out.push_back({StepKind::Drop, p});
    }
    if (sv_.can_deliver())
      for (ProcessId p = 0; p < n; ++p)
        if (started_[p] && !crashed_[p] && !sv_.has_delivered(p)) out.push_back({StepKind::SvDeliver, p});
    for (ProcessId i = 0; i < n; ++i)
      for (ProcessId j = 0; j < n; ++j)
        if (!crashed_[j] && !channel(i, j).empty()) out.push_back({StepKind::Deliver, i, j});
  }

  bool involves_slow(const Step& s) const {
    return is_slow(s.a) || (s.kind == StepKind::Deliver && is_slow(s.b));
  }

  /// Uniform over the step kinds present, then uniform within the kind, so
  /// round-0 steps are not drowned out by channel deliveries.
  Step pick(const std::vector<Step>& pool) {
    std::array<std::size_t, 5> count{};
    for (const auto& s : pool) ++count[static_cast<std::size_t>(s.kind)];
    std::vector<StepKind> kinds;
    for (std::size_t k = 0; k < count.size(); ++k)
      if (count[k]) kinds.push_back(static_cast<StepKind>(k));
    const StepKind kind = kinds[rng_.below(kinds.size())];
    std::size_t idx = rng_.below(count[static_cast<std::size_t>(kind)]);
    for (const auto& s : pool)
      if (s.kind == kind && idx-- == 0) return s;
    return pool.front();
  }

  Step choose(const std::vector<Step>& steps) {
    switch (policy_.kind) {
      case SchedulerKind::RoundRobin: return steps[(cursor_++) % steps.size()];
      case SchedulerKind::SlowSet: {
        std::vector<Step> fast;
        for (const auto& s : steps)
          if (!involves_slow(s)) fast.push_back(s);
        return pick(fast.empty() ? steps : fast);
      }
      case SchedulerKind::SeededRandom:
      case SchedulerKind::PrefixSkew: break;
    }
    return pick(steps);
  }

  std::size_t choose_prefix() {
    const std::size_t lo = cfg_.n - cfg_.f;
    const std::size_t hi = sv_.committed_count();
    switch (policy_.kind) {
      case SchedulerKind::SeededRandom: return rng_.between(lo, hi);
      case SchedulerKind::PrefixSkew: return rng_.coin() ? lo : hi;
      case SchedulerKind::SlowSet: return lo;
      case SchedulerKind::RoundRobin: return (deliveries_++ % 2 == 0) ? lo : hi;
    }
    return lo;
  }

  /// Crashes p if it has used up its action budget.
  bool maybe_crash(ProcessId p) {
    if (crashed_[p]) return true;
    auto it = plan_.crash_points.find(p);
    if (it == plan_.crash_points.end() || actions_[p] < it->second) return false;
    crashed_[p] = true;
    trace_.events.push_back(event::Crash{p, actions_[p]});
    return true;
  }

  void broadcast(ProcessId p, const Broadcast& b) {
    std::vector<ProcessId> order;
    for (ProcessId q = 0; q < cfg_.n; ++q)
      if (q != p) order.push_back(q);
    rng_.shuffle(order);
    for (ProcessId q : order) {
      if (maybe_crash(p)) return;
      channel(p, q).push_back(RoundMessage{b.payload, p, b.round});
      trace_.events.push_back(event::Send{p, q, b.round});
      ++actions_[p];
    }
    maybe_crash(p);
  }

  void advance(ProcessId p) {
    while (!crashed_[p]) {
      auto out = procs_[p].try_threshold();
      if (!out) return;
      trace_.events.push_back(event::Threshold{p, out->round, out->senders, out->h});
      if (out->next) {
        broadcast(p, *out->next);
      } else {
        trace_.events.push_back(event::Decide{p, out->round, out->h});
        return;
      }
    }
  }

  void perform(const Step& s) {
    switch (s.kind) {
      case StepKind::Start: {
        started_[s.a] = true;
        sv_.submit(s.a, trace_.header.inputs[s.a]);
        trace_.events.push_back(event::SvSubmit{s.a, trace_.header.inputs[s.a]});
        ++actions_[s.a];
        maybe_crash(s.a);
        break;
      }
      case StepKind::Commit:
        sv_.commit(s.a);
        trace_.events.push_back(event::SvCommit{s.a});
        break;
      case StepKind::Drop:
        sv_.drop(s.a);
        trace_.events.push_back(event::SvDrop{s.a});
        break;
      case StepKind::SvDeliver: {
        const DeliveredSet& r = sv_.deliver(s.a, choose_prefix());
        trace_.events.push_back(event::SvDeliver{s.a, r.tuples});
        Broadcast b = procs_[s.a].on_delivered(r);
        trace_.events.push_back(event::H0{s.a, procs_[s.a].history().front()});
        broadcast(s.a, b);
        advance(s.a);
        break;
      }
      case StepKind::Deliver: {
        auto& ch = channel(s.a, s.b);
        RoundMessage msg = std::move(ch.front());
        ch.pop_front();
        Receipt r = procs_[s.b].on_round_message(msg);
        trace_.events.push_back(event::Recv{s.a, s.b, msg.round, r});
        advance(s.b);
        break;
      }
    }
  }

  const Config& cfg_;
  const FaultPlan& plan_;
  const SchedulerPolicy& policy_;
  Rng rng_;
  SimTrace trace_;
  StableVector sv_;
  std::vector<Process> procs_;
  std::vector<bool> started_;
  std::vector<bool> crashed_;
  std::vector<std::size_t> actions_;
  std::vector<std::deque<RoundMessage>> channels_;
  std::size_t cursor_ = 0;
  std::size_t deliveries_ = 0;
};

}  // namespace

SimTrace run(const Config& cfg, const std::vector<Point>& inputs, const FaultPlan& plan, const SchedulerPolicy& policy) {
  cfg.validate();
  if (inputs.size() != cfg.n)
    throw ConfigError("expected " + std::to_string(cfg.n) + " inputs, got " + std::to_string(inputs.size()));
  for (const auto& x : inputs) cfg.validate_input(x);
  plan.validate(cfg);
  policy.validate(cfg);
  return Simulator(cfg, inputs, plan, policy).run();
}

StructureReport check_structure(const SimTrace& trace) {
  StructureReport rep;
  const auto& h = trace.header;
  const std::size_t n = h.cfg.n;
  auto bad = [&rep](std::string msg) {
    if (rep.problems.size() < 50) rep.problems.push_back(std::move(msg));
  };
  auto in_range = [n](ProcessId p) { return p < n; };

  std::vector<std::deque<unsigned>> in_flight(n * n);
  std::vector<bool> crashed(n, false);
  std::vector<InputTuple> sequence;
  std::vector<std::optional<Point>> pending(n);
  std::size_t index = 0;
  for (const auto& e : trace.events) {
    const std::string where = "event " + std::to_string(index++) + ": ";
    if (const auto* s = std::get_if<event::Send>(&e)) {
      if (!in_range(s->from) || !in_range(s->to) || s->from == s->to) {
        bad(where + "send on invalid channel");
        continue;
      }
      if (crashed[s->from]) bad(where + "send by crashed process " + std::to_string(s->from));
      in_flight[s->from * n + s->to].push_back(s->round);
    } else if (const auto* r = std::get_if<event::Recv>(&e)) {
      if (!in_range(r->from) || !in_range(r->to)) {
        bad(where + "receive on invalid channel");
        continue;
      }
      auto& q = in_flight[r->from * n + r->to];
      if (q.empty()) {
        bad(where + "receive with nothing in flight on " + std::to_string(r->from) + "->" + std::to_string(r->to));
      } else {
        if (q.front() != r->round)
          bad(where + "FIFO violated on " + std::to_string(r->from) + "->" + std::to_string(r->to) + ": expected round " +
              std::to_string(q.front()) + ", got " + std::to_string(r->round));
        q.pop_front();
      }
      if (crashed[r->to]) bad(where + "receive by crashed process " + std::to_string(r->to));
    } else if (const auto* c = std::get_if<event::Crash>(&e)) {
      if (!in_range(c->proc)) continue;
      if (crashed[c->proc]) bad(where + "process crashed twice");
      if (!h.plan.faulty.count(c->proc)) bad(where + "fault-free process " + std::to_string(c->proc) + " crashed");
      crashed[c->proc] = true;
    } else if (const auto* sub = std::get_if<event::SvSubmit>(&e)) {
      if (!in_range(sub->proc)) continue;
      if (crashed[sub->proc]) bad(where + "submit by crashed process");
      if (!(sub->value == h.inputs[sub->proc])) bad(where + "submitted value differs from the process input");
      pending[sub->proc] = sub->value;
    } else if (const auto* cm = std::get_if<event::SvCommit>(&e)) {
      if (!in_range(cm->proc) || !pending[cm->proc]) {
        bad(where + "commit without pending tuple");
        continue;
      }
      sequence.push_back(InputTuple{*pending[cm->proc], cm->proc});
      pending[cm->proc].reset();
    } else if (const auto* dr = std::get_if<event::SvDrop>(&e)) {
      if (!in_range(dr->proc) || !pending[dr->proc]) {
        bad(where + "drop without pending tuple");
        continue;
      }
      if (!crashed[dr->proc]) bad(where + "drop of a live process's tuple");
      pending[dr->proc].reset();
    } else if (const auto* dv = std::get_if<event::SvDeliver>(&e)) {
      if (dv->tuples.size() < n - h.cfg.f) bad(where + "delivered set below n - f");
      if (dv->tuples.size() > sequence.size() || !std::equal(dv->tuples.begin(), dv->tuples.end(), sequence.begin()))
        bad(where + "delivered set is not a prefix of the commit sequence");
    }
  }

  try {
    TraceView view(trace);
    std::set<ProcessId> prev;
    for (unsigned t = 0; t <= h.t_end + 1; ++t) {
      auto ft = view.crashed_before_round(t);
      if (!std::includes(ft.begin(), ft.end(), prev.begin(), prev.end()))
        bad("F[" + std::to_string(t) + "] does not contain F[" + std::to_string(t - 1) + "]");
      if (!std::includes(h.plan.faulty.begin(), h.plan.faulty.end(), ft.begin(), ft.end()))
        bad("F[" + std::to_string(t) + "] is not a subset of F");
      prev = std::move(ft);
    }
  } catch (const TraceFormatError& err) {
    bad(err.what());
  }
  return rep;
}

}  // namespace polycc

#include "polycc/verifier.hpp"

#include <algorithm>

#include "polycc/net_sim.hpp"

namespace polycc {

bool VerdictReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

const Check* VerdictReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

json to_json(const Check& c) { return json{{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}}; }

json to_json(const VerdictReport& r) {
  json checks = json::object();
  for (const auto& c : r.checks) checks[c.name] = json{{"ok", c.ok}, {"detail", c.detail}};
  return json{{"ok", r.ok()}, {"checks", std::move(checks)}};
}

namespace {

void add_witness(Check& c, json w) {
  c.ok = false;
  auto& list = c.detail["witnesses"];
  if (!list.is_array()) list = json::array();
  if (list.size() < 10) list.push_back(std::move(w));
}

}  // namespace

Check check_termination(const TraceView& view) {
  Check c{"termination"};
  for (ProcessId i : view.fault_free()) {
    for (unsigned t = 0; t <= view.t_end(); ++t)
      if (!view.h(i, t)) {
        add_witness(c, json{{"proc", i}, {"round", t}, {"missing", "h"}});
        break;
      }
    const ConvexPolytope* dec = view.decision(i);
    if (!dec) {
      add_witness(c, json{{"proc", i}, {"missing", "decision"}});
    } else if (const ConvexPolytope* last = view.h(i, view.t_end()); last && !(*dec == *last)) {
      add_witness(c, json{{"proc", i}, {"decision_differs_from_h_t_end", true}});
    }
  }
  c.detail["t_end"] = view.t_end();
  return c;
}

Check check_stable_vector(const TraceView& view) {
  Check c{"stable_vector"};
  const std::size_t need = view.n() - view.cfg().f;
  std::vector<const DeliveredSet*> sets;
  std::size_t min_size = view.n(), max_size = 0;
  for (ProcessId p = 0; p < view.n(); ++p) {
    const auto& r = view.delivered(p);
    if (!r) {
      if (!view.crashed(p)) add_witness(c, json{{"proc", p}, {"liveness", "live process never received R_i"}});
      continue;
    }
    sets.push_back(&*r);
    min_size = std::min(min_size, r->tuples.size());
    max_size = std::max(max_size, r->tuples.size());
    if (r->tuples.size() < need) add_witness(c, json{{"proc", p}, {"liveness", "|R_i| below n - f"}, {"size", r->tuples.size()}});
    for (const auto& tup : r->tuples) {
      const auto& sub = tup.sender < view.n() ? view.submitted_value(tup.sender) : std::optional<Point>{};
      if (!sub || !(*sub == tup.value))
        add_witness(c, json{{"proc", p}, {"fabricated_sender", tup.sender}, {"value", to_json(tup.value)}});
    }
  }
  for (std::size_t a = 0; a < sets.size(); ++a)
    for (std::size_t b = a + 1; b < sets.size(); ++b)
      if (!sets[a]->subset_of(*sets[b]) && !sets[b]->subset_of(*sets[a]))
        add_witness(c, json{{"containment", "sets not chain ordered"}, {"procs", {sets[a]->owner, sets[b]->owner}}});
  c.detail["delivered"] = sets.size();
  c.detail["min_size"] = sets.empty() ? 0 : min_size;
  c.detail["max_size"] = max_size;
  return c;
}

Check check_validity(const TraceView& view) {
  Check c{"validity"};
  const ConvexPolytope hull = convex_hull(view.correct_inputs(), view.cfg().d);
  std::size_t checked = 0;
  for (ProcessId i : view.fault_free())
    for (unsigned t = 0; t <= view.t_end(); ++t) {
      const ConvexPolytope* h = view.h(i, t);
      if (!h) continue;
      ++checked;
      if (h->is_empty() || !contains_polytope(hull, *h))
        add_witness(c, json{{"proc", i}, {"round", t}, {"h", to_json(*h)}, {"correct_hull", to_json(hull)}});
    }
  c.detail["checked"] = checked;
  return c;
}

Check check_agreement(const TraceView& view) {
  Check c{"agreement"};
  const Rat eps2 = view.cfg().epsilon * view.cfg().epsilon;
  const auto ff = view.fault_free();
  Rat worst = 0;
  json worst_pair = json::array();
  for (std::size_t a = 0; a < ff.size(); ++a)
    for (std::size_t b = a + 1; b < ff.size(); ++b) {
      const ConvexPolytope* x = view.decision(ff[a]);
      const ConvexPolytope* y = view.decision(ff[b]);
      if (!x || !y) continue;
      const HausdorffDistance d = hausdorff_distance(*x, *y);
      if (d.squared > worst || worst_pair.empty()) {
        worst = d.squared;
        worst_pair = json::array({ff[a], ff[b]});
      }
      if (!(d.squared < eps2))
        add_witness(c, json{{"procs", {ff[a], ff[b]}}, {"distance", d.value}, {"a", to_json(*x)}, {"b", to_json(*y)}});
    }
  const double dist = sqrt_to_double(worst);
  c.detail["max_distance"] = dist;
  c.detail["max_pair"] = worst_pair;
  c.detail["epsilon"] = format_rat(view.cfg().epsilon);
  c.detail["ratio"] = dist / to_double(view.cfg().epsilon);
  c.detail["distance_error_bound"] = HausdorffDistance::kErrorBound;
  return c;
}

ConvexPolytope compute_IZ(const TraceView& view, ZScope scope) {
  std::vector<ProcessId> members;
  if (scope == ZScope::FaultFree) {
    members = view.fault_free();
  } else {
    const auto gone = view.crashed_before_round(1);
    for (ProcessId i = 0; i < view.n(); ++i)
      if (!gone.count(i)) members.push_back(i);
  }
  const DeliveredSet* z = nullptr;
  std::vector<const DeliveredSet*> sets;
  for (ProcessId i : members) {
    const auto& r = view.delivered(i);
    if (!r) throw TraceFormatError("process " + std::to_string(i) + " entered round 1 without a delivered set");
    sets.push_back(&*r);
    if (!z || r->tuples.size() < z->tuples.size()) z = &*r;
  }
  if (!z) throw TraceFormatError("no process in scope for Z");
  for (const auto* r : sets)
    if (!z->subset_of(*r)) throw TraceFormatError("smallest delivered set is not contained in every other one");
  PointMultiset xz;
  for (const auto& t : z->tuples) xz.push_back(t.value);
  return view.cfg().mode == InputMode::IncorrectInputs ? safe_area(xz, view.cfg().f) : convex_hull(xz, view.cfg().d);
}

Check check_lower_bound(const TraceView& view) {
  Check c{"lower_bound"};
  ConvexPolytope iz, iz_ff;
  try {
    iz = compute_IZ(view, ZScope::RoundOneAlive);
    iz_ff = compute_IZ(view, ZScope::FaultFree);
  } catch (const TraceFormatError& e) {
    add_witness(c, json{{"error", e.what()}});
    return c;
  }
  std::size_t checked = 0;
  bool ff_holds = true;
  json ff_witness;
  for (unsigned t = 0; t <= view.t_end(); ++t) {
    const auto crashed_next = view.crashed_before_round(t + 1);
    for (ProcessId i = 0; i < view.n(); ++i) {
      if (crashed_next.count(i)) continue;
      const ConvexPolytope* h = view.h(i, t);
      if (!h) continue;
      ++checked;
      if (!contains_polytope(*h, iz)) add_witness(c, json{{"proc", i}, {"round", t}, {"h", to_json(*h)}});
      if (ff_holds && !contains_polytope(*h, iz_ff)) {
        ff_holds = false;
        ff_witness = json{{"proc", i}, {"round", t}, {"h", to_json(*h)}};
      }
    }
  }
  c.detail["iz"] = to_json(iz);
  c.detail["iz_vertices"] = iz.vertices().size();
  c.detail["iz_volume"] = to_double(volume(iz));
  c.detail["checked"] = checked;
  c.detail["fault_free_iz"] = to_json(iz_ff);
  c.detail["fault_free_z_holds"] = ff_holds;
  if (!ff_holds) c.detail["fault_free_z_witness"] = ff_witness;
  return c;
}

Check check_structure_verdict(const SimTrace& trace) {
  Check c{"structure"};
  const StructureReport rep = check_structure(trace);
  for (const auto& p : rep.problems) add_witness(c, p);
  return c;
}

Check check_matrix_state_verdict(const TraceView& view, const std::vector<StochMatrix>& ms) {
  Check c{"matrix_state"};
  const MatrixStateReport rep = check_matrix_state(view, ms);
  c.ok = rep.ok();
  c.detail = to_json(rep);
  return c;
}

Check check_decay_verdict(const TraceView& view, const std::vector<StochMatrix>& ms) {
  Check c{"decay"};
  const DecayReport rep = check_decay(view, ms);
  c.ok = rep.ok();
  c.detail = to_json(rep);
  return c;
}

VerdictReport verify_trace(const SimTrace& trace, const VerifyOptions& opts) {
  VerdictReport rep;
  rep.checks.push_back(check_structure_verdict(trace));
  std::optional<TraceView> view;
  try {
    view.emplace(trace);
  } catch (const TraceFormatError& e) {
    rep.checks.push_back(Check{"trace", false, json{{"error", e.what()}}});
    return rep;
  }
  auto guarded = [&rep](const char* name, auto&& fn) {
    try {
      rep.checks.push_back(fn());
    } catch (const std::exception& e) {
      rep.checks.push_back(Check{name, false, json{{"error", e.what()}}});
    }
  };
  guarded("termination", [&] { return check_termination(*view); });
  guarded("stable_vector", [&] { return check_stable_vector(*view); });
  guarded("validity", [&] { return check_validity(*view); });
  guarded("agreement", [&] { return check_agreement(*view); });
  guarded("lower_bound", [&] { return check_lower_bound(*view); });
  if (opts.matrix) {
    std::vector<StochMatrix> ms;
    try {
      ms = build_all_M(*view);
    } catch (const std::exception& e) {
      rep.checks.push_back(Check{"matrix_state", false, json{{"error", e.what()}}});
      rep.checks.push_back(Check{"decay", false, json{{"error", e.what()}}});
      return rep;
    }
    guarded("matrix_state", [&] { return check_matrix_state_verdict(*view, ms); });
    guarded("decay", [&] { return check_decay_verdict(*view, ms); });
  }
  return rep;
}

ScenarioResult check_optimality_scenario(const Config& cfg, const std::vector<Point>& inputs, std::uint64_t seed,
                                         const std::map<ProcessId, Point>& incorrect) {
  if (cfg.mode != InputMode::IncorrectInputs) throw ConfigError("the optimality scenario needs incorrect-inputs mode");
  FaultPlan plan;
  SchedulerPolicy policy;
  policy.kind = SchedulerKind::SlowSet;
  policy.seed = seed;
  for (ProcessId p = cfg.n - cfg.f; p < cfg.n; ++p) {
    plan.faulty.insert(p);
    policy.slow.insert(p);
  }
  for (const auto& [p, x] : incorrect)
    if (plan.faulty.count(p)) plan.incorrect_inputs[p] = x;

  ScenarioResult res{run(cfg, inputs, plan, policy), ConvexPolytope::empty(cfg.d), Check{"optimality_scenario"}};
  TraceView view(res.trace);
  res.iz = compute_IZ(view);
  Check& c = res.verdict;
  const Rat eps2 = cfg.epsilon * cfg.epsilon;
  bool all_equal = true;
  for (ProcessId i = 0; i + cfg.f < cfg.n; ++i) {
    const auto& r = view.delivered(i);
    if (r)
      for (ProcessId s : policy.slow)
        if (r->contains_sender(s)) add_witness(c, json{{"proc", i}, {"heard_in_round0_from", s}});
    for (unsigned t = 1; t <= view.t_end(); ++t)
      if (const auto* used = view.used_senders(i, t))
        for (ProcessId s : *used)
          if (policy.slow.count(s)) add_witness(c, json{{"proc", i}, {"round", t}, {"used_message_from", s}});
    const ConvexPolytope* dec = view.decision(i);
    if (!dec) {
      add_witness(c, json{{"proc", i}, {"missing", "decision"}});
      continue;
    }
    if (!contains_polytope(*dec, res.iz)) add_witness(c, json{{"proc", i}, {"decision_misses_iz", to_json(*dec)}});
    if (!(hausdorff_distance(*dec, res.iz).squared < eps2))
      add_witness(c, json{{"proc", i}, {"decision_far_from_iz", to_json(*dec)}});
    all_equal = all_equal && *dec == res.iz;
  }
  c.detail["iz"] = to_json(res.iz);
  c.detail["iz_is_point"] = res.iz.vertices().size() == 1;
  c.detail["decisions_equal_iz"] = all_equal;
  c.detail["slow"] = policy.slow;
  return res;
}

}  // namespace polycc

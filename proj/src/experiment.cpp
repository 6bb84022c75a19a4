#include "polycc/experiment.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "polycc/rng.hpp"

namespace polycc {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream per purpose so that changing, say, the fault model
/// does not reshuffle the inputs of the same seed.
std::uint64_t stream(std::uint64_t seed, std::uint64_t purpose) { return splitmix(splitmix(seed) ^ purpose); }

constexpr std::uint64_t kInputs = 1, kFaults = 2, kSchedule = 3, kSlow = 4;

Point random_point(Rng& rng, const Config& cfg, long denominator) {
  std::vector<Rat> xs;
  for (std::size_t r = 0; r < cfg.d; ++r)
    xs.push_back(cfg.mu + (cfg.upper - cfg.mu) * make_rat(static_cast<long>(rng.below(denominator + 1)), denominator));
  return Point(std::move(xs));
}

Point uniform_point(const Config& cfg, const Rat& v) { return Point(std::vector<Rat>(cfg.d, v)); }

InputKind parse_input_kind(const std::string& s) {
  if (s == "explicit") return InputKind::Explicit;
  if (s == "random") return InputKind::Random;
  if (s == "preset") return InputKind::Preset;
  throw ConfigError("unknown input kind '" + s + "'");
}

FaultKind parse_fault_kind(const std::string& s) {
  if (s == "none") return FaultKind::None;
  if (s == "random") return FaultKind::Random;
  if (s == "crash-heavy") return FaultKind::CrashHeavy;
  if (s == "explicit") return FaultKind::Explicit;
  throw ConfigError("unknown fault kind '" + s + "'");
}

std::string fault_kind_name(FaultKind k) {
  switch (k) {
    case FaultKind::None: return "none";
    case FaultKind::Random: return "random";
    case FaultKind::CrashHeavy: return "crash-heavy";
    case FaultKind::Explicit: return "explicit";
  }
  return "?";
}

std::string input_kind_name(InputKind k) {
  switch (k) {
    case InputKind::Explicit: return "explicit";
    case InputKind::Random: return "random";
    case InputKind::Preset: return "preset";
  }
  return "?";
}

}  // namespace

void ExperimentSpec::validate() const {
  cfg.validate();
  switch (inputs.kind) {
    case InputKind::Explicit:
      if (inputs.points.size() != cfg.n)
        throw ConfigError("explicit inputs list " + std::to_string(inputs.points.size()) + " points for n=" + std::to_string(cfg.n));
      for (const auto& x : inputs.points) cfg.validate_input(x);
      break;
    case InputKind::Random:
      if (inputs.denominator <= 0) throw ConfigError("input denominator must be positive");
      break;
    case InputKind::Preset:
      preset_inputs(inputs.preset, cfg, 0, inputs.point);
      break;
  }
  if (faults.kind == FaultKind::Explicit) faults.plan.validate(cfg);
  if (!scheduler.mixed) scheduler.policy.validate(cfg);
  if (cost) cost_from_json(*cost, cfg);
}

ExperimentSpec spec_from_json(const json& j) {
  try {
    ExperimentSpec s;
    s.cfg = config_from_json(j.at("config"));
    if (j.contains("inputs")) {
      const json& in = j.at("inputs");
      if (in.is_array()) {
        s.inputs.kind = InputKind::Explicit;
        for (const auto& p : in) s.inputs.points.push_back(point_from_json(p));
      } else {
        s.inputs.kind = parse_input_kind(in.value("kind", "random"));
        if (in.contains("points"))
          for (const auto& p : in.at("points")) s.inputs.points.push_back(point_from_json(p));
        s.inputs.preset = in.value("name", "");
        if (in.contains("point")) s.inputs.point = point_from_json(in.at("point"));
        s.inputs.denominator = in.value("denominator", 100L);
      }
    }
    if (j.contains("faults")) {
      const json& fj = j.at("faults");
      s.faults.kind = parse_fault_kind(fj.value("kind", "none"));
      if (fj.contains("plan")) s.faults.plan = fault_plan_from_json(fj.at("plan"));
    }
    if (j.contains("scheduler")) {
      const json& sj = j.at("scheduler");
      const std::string kind = sj.is_string() ? sj.get<std::string>() : sj.value("kind", "seeded-random");
      if (kind == "mixed") {
        s.scheduler.mixed = true;
      } else {
        s.scheduler.policy = policy_from_json(sj);
      }
    }
    if (j.contains("seeds")) {
      const json& sj = j.at("seeds");
      s.seeds.clear();
      if (sj.is_array()) {
        s.seeds = sj.get<std::vector<std::uint64_t>>();
      } else {
        const auto first = sj.value("first", std::uint64_t{0});
        const auto count = sj.value("count", std::uint64_t{0});
        for (std::uint64_t k = 0; k < count; ++k) s.seeds.push_back(first + k);
      }
    }
    if (j.contains("cost")) s.cost = j.at("cost");
    if (j.contains("output")) {
      const json& o = j.at("output");
      s.trace_path = o.value("trace", "");
      s.verdict_path = o.value("verdict", "");
      s.csv_path = o.value("csv", "");
    }
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed spec: ") + e.what());
  } catch (const ParseError& e) {
    throw ConfigError(std::string("malformed spec: ") + e.what());
  }
}

json to_json(const ExperimentSpec& s) {
  json inputs{{"kind", input_kind_name(s.inputs.kind)}};
  if (s.inputs.kind == InputKind::Explicit) {
    json pts = json::array();
    for (const auto& p : s.inputs.points) pts.push_back(to_json(p));
    inputs["points"] = std::move(pts);
  }
  if (s.inputs.kind == InputKind::Preset) inputs["name"] = s.inputs.preset;
  if (s.inputs.point) inputs["point"] = to_json(*s.inputs.point);
  inputs["denominator"] = s.inputs.denominator;
  json faults{{"kind", fault_kind_name(s.faults.kind)}};
  if (s.faults.kind == FaultKind::Explicit) faults["plan"] = to_json(s.faults.plan);
  json j{{"config", to_json(s.cfg)},
         {"inputs", std::move(inputs)},
         {"faults", std::move(faults)},
         {"scheduler", s.scheduler.mixed ? json{{"kind", "mixed"}} : to_json(s.scheduler.policy)},
         {"seeds", s.seeds},
         {"output", {{"trace", s.trace_path}, {"verdict", s.verdict_path}, {"csv", s.csv_path}}}};
  if (s.cost) j["cost"] = *s.cost;
  return j;
}

std::vector<Point> random_inputs(const Config& cfg, std::uint64_t seed, long denominator) {
  Rng rng(stream(seed, kInputs));
  std::vector<Point> out;
  for (std::size_t i = 0; i < cfg.n; ++i) out.push_back(random_point(rng, cfg, denominator));
  return out;
}

std::vector<Point> preset_inputs(const std::string& name, const Config& cfg, std::uint64_t seed, const std::optional<Point>& point) {
  const Rat mid = (cfg.mu + cfg.upper) / 2;
  if (name == "identical") return std::vector<Point>(cfg.n, point ? *point : uniform_point(cfg, mid));
  if (name == "degenerate") {
    if (cfg.n != (cfg.d + 2) * cfg.f + 1)
      throw ConfigError("the degenerate preset needs n = (d+2)f+1 = " + std::to_string((cfg.d + 2) * cfg.f + 1));
    std::vector<Point> out(cfg.f + 1, uniform_point(cfg, cfg.mu));
    for (std::size_t j = 0; j < cfg.d; ++j) {
      Point corner = uniform_point(cfg, cfg.mu);
      corner[j] = cfg.upper;
      for (std::size_t k = 0; k < cfg.f; ++k) out.push_back(corner);
    }
    for (std::size_t k = 0; k < cfg.f; ++k) out.push_back(uniform_point(cfg, cfg.upper));
    return out;
  }
  if (name == "shared") {
    const Point x = point ? *point : uniform_point(cfg, mid);
    cfg.validate_input(x);
    std::vector<Point> out = random_inputs(cfg, seed, 100);
    for (std::size_t i = 0; i < std::min(cfg.n, 2 * cfg.f + 1); ++i) out[i] = x;
    return out;
  }
  throw ConfigError("unknown input preset '" + name + "' (expected identical, degenerate or shared)");
}

FaultPlan random_fault_plan(const Config& cfg, std::uint64_t seed, bool crash_heavy) {
  Rng rng(stream(seed, kFaults));
  FaultPlan plan;
  const std::size_t total_actions = 1 + (cfg.n - 1) * compute_t_end(cfg);
  const std::size_t early = 1 + 3 * (cfg.n - 1);
  const std::size_t count = crash_heavy ? cfg.f : rng.between(0, cfg.f);
  std::vector<ProcessId> ids(cfg.n);
  for (ProcessId p = 0; p < cfg.n; ++p) ids[p] = p;
  rng.shuffle(ids);
  for (std::size_t k = 0; k < count; ++k) {
    const ProcessId p = ids[k];
    plan.faulty.insert(p);
    if (cfg.mode == InputMode::IncorrectInputs && rng.coin()) plan.incorrect_inputs[p] = random_point(rng, cfg, 100);
    const bool crashes = crash_heavy || rng.below(3) != 0;
    if (!crashes) continue;
    const bool early_crash = crash_heavy ? rng.below(4) != 0 : rng.coin();
    plan.crash_points[p] = rng.between(0, early_crash ? std::min(early, total_actions) : total_actions);
  }
  return plan;
}

RunInstance instantiate(const ExperimentSpec& spec, std::uint64_t seed) {
  RunInstance inst;
  inst.cfg = spec.cfg;
  switch (spec.inputs.kind) {
    case InputKind::Explicit: inst.inputs = spec.inputs.points; break;
    case InputKind::Random: inst.inputs = random_inputs(spec.cfg, seed, spec.inputs.denominator); break;
    case InputKind::Preset: inst.inputs = preset_inputs(spec.inputs.preset, spec.cfg, seed, spec.inputs.point); break;
  }
  switch (spec.faults.kind) {
    case FaultKind::None: break;
    case FaultKind::Random: inst.plan = random_fault_plan(spec.cfg, seed, false); break;
    case FaultKind::CrashHeavy: inst.plan = random_fault_plan(spec.cfg, seed, true); break;
    case FaultKind::Explicit: inst.plan = spec.faults.plan; break;
  }
  if (spec.scheduler.mixed) {
    static constexpr SchedulerKind kRotation[] = {SchedulerKind::SeededRandom, SchedulerKind::PrefixSkew,
                                                  SchedulerKind::RoundRobin, SchedulerKind::SlowSet};
    inst.policy.kind = kRotation[seed % 4];
    if (inst.policy.kind == SchedulerKind::SlowSet) {
      Rng rng(stream(seed, kSlow));
      std::vector<ProcessId> ids(spec.cfg.n);
      for (ProcessId p = 0; p < spec.cfg.n; ++p) ids[p] = p;
      rng.shuffle(ids);
      for (std::size_t k = 0; k < spec.cfg.f; ++k) inst.policy.slow.insert(ids[k]);
    }
  } else {
    inst.policy = spec.scheduler.policy;
  }
  inst.policy.seed = stream(seed, kSchedule);
  return inst;
}

RunOutcome execute(const RunInstance& inst, const std::optional<CostFunction>& cost, const VerifyOptions& opts) {
  RunOutcome out;
  out.trace = run(inst.cfg, inst.inputs, inst.plan, inst.policy);
  out.verdict = verify_trace(out.trace, opts);
  if (cost) {
    TraceView view(out.trace);
    out.opt = optimize_run(view, *cost);
  }
  return out;
}

json verdict_json(const RunOutcome& out) {
  json j = to_json(out.verdict);
  j["ok"] = out.ok();
  if (out.opt) j["optimization"] = to_json(*out.opt, out.trace.header.cfg.epsilon);
  return j;
}

std::string sweep_csv_header() {
  return "seed,n,f,d,epsilon,mode,scheduler,faulty,crashed,t_end,max_hausdorff,hausdorff_over_epsilon,iz_volume,"
         "events,ok,failed_checks\n";
}

std::string sweep_csv_row(std::uint64_t seed, const RunInstance& inst, const RunOutcome& out) {
  std::size_t crashed = 0;
  for (const auto& e : out.trace.events) crashed += std::holds_alternative<event::Crash>(e) ? 1 : 0;
  double maxd = 0, ratio = 0, izv = 0;
  if (const Check* a = out.verdict.find("agreement"); a && a->detail.contains("max_distance")) {
    maxd = a->detail["max_distance"].get<double>();
    ratio = a->detail["ratio"].get<double>();
  }
  if (const Check* l = out.verdict.find("lower_bound"); l && l->detail.contains("iz_volume"))
    izv = l->detail["iz_volume"].get<double>();
  std::string failed;
  for (const auto& c : out.verdict.checks)
    if (!c.ok) failed += (failed.empty() ? "" : ";") + c.name;
  if (out.opt && !out.opt->ok()) failed += (failed.empty() ? "" : ";") + std::string("optimization");
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  std::ostringstream row;
  row << seed << ',' << inst.cfg.n << ',' << inst.cfg.f << ',' << inst.cfg.d << ',' << format_rat(inst.cfg.epsilon) << ','
      << to_string(inst.cfg.mode) << ',' << to_string(inst.policy.kind) << ',' << inst.plan.faulty.size() << ',' << crashed
      << ',' << out.trace.header.t_end << ',' << num(maxd) << ',' << num(ratio) << ',' << num(izv) << ','
      << out.trace.events.size() << ',' << (out.ok() ? 1 : 0) << ',' << failed << '\n';
  return row.str();
}

std::size_t sweep(const ExperimentSpec& spec, std::ostream& csv, unsigned workers, const VerifyOptions& opts) {
  spec.validate();
  std::optional<CostFunction> cost;
  if (spec.cost) cost = cost_from_json(*spec.cost, spec.cfg);
  csv << sweep_csv_header();
  const std::size_t total = spec.seeds.size();
  std::vector<std::string> rows(total);
  std::vector<char> ok(total, 1);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      try {
        const RunInstance inst = instantiate(spec, spec.seeds[k]);
        const RunOutcome out = execute(inst, cost, opts);
        rows[k] = sweep_csv_row(spec.seeds[k], inst, out);
        ok[k] = out.ok();
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!err) err = std::current_exception();
        next = total;
      }
    }
  };
  const unsigned n_workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  std::size_t failures = 0;
  for (std::size_t k = 0; k < total; ++k) {
    csv << rows[k];
    failures += ok[k] ? 0 : 1;
  }
  return failures;
}

unsigned workers_from_env() {
  const char* v = std::getenv("POLYCC_WORKERS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long w = std::strtol(v, &end, 10);
  if (*end != '\0' || w < 1) return 1;
  return static_cast<unsigned>(w);
}

}  // namespace polycc

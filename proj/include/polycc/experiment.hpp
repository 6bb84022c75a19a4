#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polycc/net_sim.hpp"
#include "polycc/optimizer.hpp"
#include "polycc/verifier.hpp"

namespace polycc {

enum class InputKind { Explicit, Random, Preset };
enum class FaultKind { None, Random, CrashHeavy, Explicit };

/// Input presets:
///   identical   every process starts at the box midpoint
///   degenerate  n = (d+2)f+1; f+1 processes at the low corner, f at each
///               axis corner, the last f at the high corner
///   shared      the first 2f+1 processes share `point` (default: the
///               midpoint), the rest are random
struct InputSpec {
  InputKind kind = InputKind::Random;
  std::vector<Point> points;
  std::string preset;
  std::optional<Point> point;
  long denominator = 100;
};

struct FaultSpec {
  FaultKind kind = FaultKind::None;
  FaultPlan plan;
};

/// `mixed` rotates through seeded-random, prefix-skew, round-robin and a
/// slow-set with a random slow set, one per seed.
struct SchedulerSpec {
  bool mixed = false;
  SchedulerPolicy policy;
};

struct ExperimentSpec {
  Config cfg;
  InputSpec inputs;
  FaultSpec faults;
  SchedulerSpec scheduler;
  std::vector<std::uint64_t> seeds{0};
  std::optional<json> cost;
  std::string trace_path;
  std::string verdict_path;
  std::string csv_path;

  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

ExperimentSpec spec_from_json(const json& j);
json to_json(const ExperimentSpec& s);

/// Everything net_sim needs for one seed.
struct RunInstance {
  Config cfg;
  std::vector<Point> inputs;
  FaultPlan plan;
  SchedulerPolicy policy;
};

std::vector<Point> preset_inputs(const std::string& name, const Config& cfg, std::uint64_t seed,
                                 const std::optional<Point>& point = std::nullopt);
std::vector<Point> random_inputs(const Config& cfg, std::uint64_t seed, long denominator);
/// Random plan for `seed`; crash-heavy makes all f processes faulty and
/// crashing, biased towards early crash points.
FaultPlan random_fault_plan(const Config& cfg, std::uint64_t seed, bool crash_heavy);

RunInstance instantiate(const ExperimentSpec& spec, std::uint64_t seed);

struct RunOutcome {
  SimTrace trace;
  VerdictReport verdict;
  std::optional<OptResult> opt;

  bool ok() const { return verdict.ok() && (!opt || opt->ok()); }
};

RunOutcome execute(const RunInstance& inst, const std::optional<CostFunction>& cost = std::nullopt,
                   const VerifyOptions& opts = {});

/// Verdict document for one run: the verdict checks plus the optimization
/// result when a cost is given.
json verdict_json(const RunOutcome& out);

std::string sweep_csv_header();
std::string sweep_csv_row(std::uint64_t seed, const RunInstance& inst, const RunOutcome& out);

/// Runs every seed on `workers` threads and writes one CSV row per seed, in
/// seed-list order. Returns the number of failing runs.
std::size_t sweep(const ExperimentSpec& spec, std::ostream& csv, unsigned workers, const VerifyOptions& opts = {});

/// Worker count from POLYCC_WORKERS (default 1).
unsigned workers_from_env();

}  // namespace polycc

// polycc: run, sweep, verify and optimize convex consensus executions.
//
// Exit codes: 0 all checks pass, 1 a property check failed, 2 usage, spec or
// file error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "polycc/experiment.hpp"

namespace {

using polycc::json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Overrides {
  std::string spec_path;
  std::optional<std::size_t> n, f, d;
  std::optional<std::string> epsilon, mu, upper, mode, scheduler, inputs, preset, faults;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> seeds;
  std::optional<std::string> cost;
  std::vector<std::size_t> slow;

  void attach(CLI::App* app) {
    app->add_option("--spec", spec_path, "Experiment spec JSON file");
    app->add_option("-n,--n", n, "Process count");
    app->add_option("-f,--f", f, "Fault budget");
    app->add_option("-d,--d", d, "Dimension (1 or 2)");
    app->add_option("--epsilon", epsilon, "Agreement parameter, e.g. 1/100 or 0.01");
    app->add_option("--mu", mu, "Lower coordinate bound");
    app->add_option("--U", upper, "Upper coordinate bound");
    app->add_option("--mode", mode, "incorrect-inputs or correct-inputs");
    app->add_option("--scheduler", scheduler, "seeded-random, prefix-skew, round-robin, slow-set or mixed");
    app->add_option("--slow", slow, "Slow set for the slow-set scheduler");
    app->add_option("--inputs", inputs, "random, preset or a JSON array of points");
    app->add_option("--preset", preset, "identical, degenerate or shared");
    app->add_option("--faults", faults, "none, random, crash-heavy or a fault plan JSON object");
    app->add_option("--seed", seed, "Single seed");
    app->add_option("--seeds", seeds, "Seed range FIRST:COUNT");
    app->add_option("--cost", cost, "Cost JSON (inline or @file)");
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw polycc::ConfigError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json parse_json_arg(const std::string& text) {
  const std::string body = !text.empty() && text[0] == '@' ? slurp(text.substr(1)) : text;
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw polycc::ConfigError(std::string("invalid JSON argument: ") + e.what());
  }
}

json default_spec() {
  return json{{"config",
               {{"n", 4}, {"f", 1}, {"d", 1}, {"epsilon", "1/10"}, {"mu", "0/1"}, {"U", "1/1"}, {"mode", "incorrect-inputs"}}},
              {"inputs", {{"kind", "random"}}},
              {"faults", {{"kind", "none"}}},
              {"scheduler", {{"kind", "seeded-random"}}},
              {"seeds", json::array({0})}};
}

polycc::ExperimentSpec build_spec(const Overrides& o) {
  json j = default_spec();
  if (!o.spec_path.empty()) {
    try {
      json file = json::parse(slurp(o.spec_path));
      j.merge_patch(file);
    } catch (const json::exception& e) {
      throw polycc::ConfigError("malformed spec file: " + std::string(e.what()));
    }
  }
  auto& cfg = j["config"];
  if (o.n) cfg["n"] = *o.n;
  if (o.f) cfg["f"] = *o.f;
  if (o.d) cfg["d"] = *o.d;
  if (o.epsilon) cfg["epsilon"] = *o.epsilon;
  if (o.mu) cfg["mu"] = *o.mu;
  if (o.upper) cfg["U"] = *o.upper;
  if (o.mode) cfg["mode"] = *o.mode;
  if (o.scheduler) j["scheduler"] = json{{"kind", *o.scheduler}};
  if (!o.slow.empty()) j["scheduler"]["slow"] = o.slow;
  if (o.inputs) {
    if (!o.inputs->empty() && (o.inputs->front() == '[' || o.inputs->front() == '@'))
      j["inputs"] = json{{"kind", "explicit"}, {"points", parse_json_arg(*o.inputs)}};
    else
      j["inputs"] = json{{"kind", *o.inputs}};
  }
  if (o.preset) j["inputs"] = json{{"kind", "preset"}, {"name", *o.preset}};
  if (o.faults) {
    if (!o.faults->empty() && (o.faults->front() == '{' || o.faults->front() == '@'))
      j["faults"] = json{{"kind", "explicit"}, {"plan", parse_json_arg(*o.faults)}};
    else
      j["faults"] = json{{"kind", *o.faults}};
  }
  if (o.seed) j["seeds"] = json::array({*o.seed});
  if (o.seeds) {
    const auto colon = o.seeds->find(':');
    if (colon == std::string::npos) throw polycc::ConfigError("--seeds expects FIRST:COUNT");
    try {
      j["seeds"] = json{{"first", std::stoull(o.seeds->substr(0, colon))}, {"count", std::stoull(o.seeds->substr(colon + 1))}};
    } catch (const std::exception&) {
      throw polycc::ConfigError("--seeds expects FIRST:COUNT");
    }
  }
  if (o.cost) j["cost"] = parse_json_arg(*o.cost);
  polycc::ExperimentSpec spec = polycc::spec_from_json(j);
  spec.validate();
  return spec;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

int cmd_run(const Overrides& o, std::string trace_path, std::string verdict_path) {
  polycc::ExperimentSpec spec = build_spec(o);
  if (trace_path.empty()) trace_path = spec.trace_path;
  if (verdict_path.empty()) verdict_path = spec.verdict_path;
  std::optional<polycc::CostFunction> cost;
  if (spec.cost) cost = polycc::cost_from_json(*spec.cost, spec.cfg);
  const auto inst = polycc::instantiate(spec, spec.seeds.empty() ? 0 : spec.seeds.front());
  const auto out = polycc::execute(inst, cost);
  if (!trace_path.empty()) polycc::write_jsonl_file(out.trace, trace_path);
  write_text(verdict_path, polycc::verdict_json(out).dump(2) + "\n");
  return out.ok() ? kPass : kFail;
}

int cmd_sweep(const Overrides& o, std::string csv_path) {
  polycc::ExperimentSpec spec = build_spec(o);
  if (csv_path.empty()) csv_path = spec.csv_path;
  std::ostringstream csv;
  const std::size_t failures = polycc::sweep(spec, csv, polycc::workers_from_env());
  write_text(csv_path, csv.str());
  if (failures) std::cerr << failures << " of " << spec.seeds.size() << " runs failed\n";
  return failures ? kFail : kPass;
}

int cmd_verify(const std::string& trace_path, const std::string& out_path, bool no_matrix) {
  const polycc::SimTrace trace = polycc::read_jsonl_file(trace_path);
  polycc::VerifyOptions opts;
  opts.matrix = !no_matrix;
  const auto rep = polycc::verify_trace(trace, opts);
  write_text(out_path, polycc::to_json(rep).dump(2) + "\n");
  return rep.ok() ? kPass : kFail;
}

int cmd_optimize(const std::string& trace_path, const std::string& cost_arg, const std::string& out_path) {
  const polycc::SimTrace trace = polycc::read_jsonl_file(trace_path);
  const auto cost = polycc::cost_from_json(parse_json_arg(cost_arg), trace.header.cfg);
  const polycc::TraceView view(trace);
  const auto res = polycc::optimize_run(view, cost);
  json j = polycc::to_json(res, trace.header.cfg.epsilon);
  j["cost"] = polycc::to_json(cost);
  write_text(out_path, j.dump(2) + "\n");
  return res.ok() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and verifier for approximate convex consensus"};
  app.require_subcommand(1);

  Overrides run_o, sweep_o;
  std::string run_trace, run_verdict, sweep_csv;
  auto* run = app.add_subcommand("run", "Simulate one execution and verify it");
  run_o.attach(run);
  run->add_option("--trace", run_trace, "Trace output (JSONL)");
  run->add_option("--verdict", run_verdict, "Verdict output (JSON, default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Run many seeds and write one CSV row each");
  sweep_o.attach(sweep);
  sweep->add_option("--csv", sweep_csv, "CSV output (default stdout)");

  std::string verify_trace, verify_out;
  bool no_matrix = false;
  auto* verify = app.add_subcommand("verify", "Verify a recorded trace");
  verify->add_option("trace", verify_trace, "Trace file (JSONL)")->required();
  verify->add_option("--out", verify_out, "Verdict output (default stdout)");
  verify->add_flag("--no-matrix", no_matrix, "Skip the transition-matrix checks");

  std::string opt_trace, opt_cost, opt_out;
  auto* optimize = app.add_subcommand("optimize", "Minimize a convex cost over each decided polytope");
  optimize->add_option("trace", opt_trace, "Trace file (JSONL)")->required();
  optimize->add_option("--cost", opt_cost, "Cost JSON (inline or @file)")->required();
  optimize->add_option("--out", opt_out, "Result output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run_o, run_trace, run_verdict);
    if (sweep->parsed()) return cmd_sweep(sweep_o, sweep_csv);
    if (verify->parsed()) return cmd_verify(verify_trace, verify_out, no_matrix);
    if (optimize->parsed()) return cmd_optimize(opt_trace, opt_cost, opt_out);
  } catch (const polycc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const polycc::TraceFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const polycc::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

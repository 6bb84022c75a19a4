#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "polycc/experiment.hpp"

namespace py = pybind11;
using namespace polycc;

namespace {

// Points cross the boundary as lists of rational strings ("p/q", "3", "0.25").
Point to_point(const std::vector<std::string>& coords) {
  std::vector<Rat> xs;
  for (const auto& c : coords) xs.push_back(parse_rat(c));
  return Point(std::move(xs));
}

PointMultiset to_points(const std::vector<std::vector<std::string>>& pts) {
  PointMultiset out;
  for (const auto& p : pts) out.push_back(to_point(p));
  return out;
}

std::vector<std::vector<std::string>> from_polytope(const ConvexPolytope& h) {
  std::vector<std::vector<std::string>> out;
  for (const auto& v : h.vertices()) {
    std::vector<std::string> row;
    for (const auto& c : v.coords()) row.push_back(format_rat(c));
    out.push_back(std::move(row));
  }
  return out;
}

std::size_t dim_of(const std::vector<std::vector<std::string>>& pts) { return pts.empty() ? 1 : pts.front().size(); }

ConvexPolytope hull_of(const std::vector<std::vector<std::string>>& pts) { return convex_hull(to_points(pts), dim_of(pts)); }

Config config_from(const std::string& cfg_json) { return config_from_json(json::parse(cfg_json)); }

}  // namespace

PYBIND11_MODULE(_polycc, m) {
  m.doc() = "Exact polytope calculus and convex consensus simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<TraceFormatError>(m, "TraceFormatError", PyExc_ValueError);

  m.def("convex_hull", [](const std::vector<std::vector<std::string>>& pts) { return from_polytope(hull_of(pts)); },
        "Vertices of the hull, lexicographically sorted.");
  m.def("safe_area",
        [](const std::vector<std::vector<std::string>>& pts, std::size_t f) {
          return from_polytope(safe_area(to_points(pts), f));
        });
  m.def("intersect", [](const std::vector<std::vector<std::string>>& a, const std::vector<std::vector<std::string>>& b) {
    return from_polytope(intersect(hull_of(a), hull_of(b)));
  });
  m.def("linear_combination",
        [](const std::vector<std::vector<std::vector<std::string>>>& polys, const std::vector<std::string>& weights) {
          std::vector<ConvexPolytope> hs;
          for (const auto& p : polys) hs.push_back(hull_of(p));
          std::vector<Rat> w;
          for (const auto& x : weights) w.push_back(parse_rat(x));
          return from_polytope(linear_combination(hs, w));
        });
  m.def("hausdorff_distance", [](const std::vector<std::vector<std::string>>& a, const std::vector<std::vector<std::string>>& b) {
    const auto d = hausdorff_distance(hull_of(a), hull_of(b));
    return py::make_tuple(format_rat(d.squared), d.value);
  }, "Returns (exact squared distance as 'p/q', distance as float).");
  m.def("compute_t_end", [](const std::string& cfg_json) { return compute_t_end(config_from(cfg_json)); },
        "t_end for a config given as JSON.");
  m.def("run_spec",
        [](const std::string& spec_json, std::uint64_t seed) {
          const ExperimentSpec spec = spec_from_json(json::parse(spec_json));
          spec.validate();
          std::optional<CostFunction> cost;
          if (spec.cost) cost = cost_from_json(*spec.cost, spec.cfg);
          RunOutcome out;
          {
            py::gil_scoped_release release;
            out = execute(instantiate(spec, seed), cost);
          }
          return py::make_tuple(to_jsonl(out.trace), verdict_json(out).dump(), out.ok());
        },
        py::arg("spec_json"), py::arg("seed") = 0, "Returns (trace JSONL, verdict JSON, ok).");
  m.def("verify_trace",
        [](const std::string& jsonl) {
          std::istringstream in(jsonl);
          const SimTrace trace = read_jsonl(in);
          const VerdictReport rep = verify_trace(trace);
          return py::make_tuple(to_json(rep).dump(), rep.ok());
        },
        "Returns (verdict JSON, ok).");
  m.def("optimize_trace",
        [](const std::string& jsonl, const std::string& cost_json) {
          std::istringstream in(jsonl);
          const SimTrace trace = read_jsonl(in);
          const auto cost = cost_from_json(json::parse(cost_json), trace.header.cfg);
          const TraceView view(trace);
          const auto res = optimize_run(view, cost);
          return py::make_tuple(to_json(res, trace.header.cfg.epsilon).dump(), res.ok());
        });
}

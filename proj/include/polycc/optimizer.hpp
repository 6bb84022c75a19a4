#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polycc/trace.hpp"

namespace polycc {

enum class CostKind { Linear, Quadratic, MaxAffine };

std::string to_string(CostKind kind);

struct AffinePiece {
  Point a;
  Rat b;
};

/// Convex cost over R^d with a Lipschitz bound B valid on [mu, U]^d.
///
/// linear:     c(x) = coeffs . x + offset
/// quadratic:  c(x) = (x - center)^T W (x - center), W symmetric positive definite
/// max-affine: c(x) = max_k (a_k . x + b_k), a tabulated piecewise-linear cost
struct CostFunction {
  CostKind kind = CostKind::Linear;
  std::size_t dim = 1;
  Point coeffs;
  Rat offset;
  Point center;
  /// Row-major d x d.
  std::vector<Rat> weights;
  std::vector<AffinePiece> pieces;
  Rat lipschitz;

  static CostFunction linear(Point coeffs, Rat offset = 0);
  static CostFunction quadratic(Point center, std::vector<Rat> weights);
  static CostFunction max_affine(std::vector<AffinePiece> pieces);

  Rat operator()(const Point& x) const;
  /// Rational upper bound on the Lipschitz constant over [mu, U]^d.
  Rat default_lipschitz(const Config& cfg) const;
  /// Throws ConfigError on a malformed cost.
  void validate() const;
};

/// {"kind":"linear","coeffs":[..],"offset":..}, {"kind":"quadratic","center":[..],"weights":[[..],..]}
/// or {"kind":"max-affine","pieces":[{"a":[..],"b":..},..]}, plus an optional "B".
/// Without "B" the default bound for cfg is used.
CostFunction cost_from_json(const json& j, const Config& cfg);
json to_json(const CostFunction& c);

struct Minimizer {
  Point y;
  Rat value;
};

/// Exact minimizer of c over a non-empty h; among several minimizers the
/// lexicographically smallest is returned.
Minimizer minimize_over_polytope(const CostFunction& c, const ConvexPolytope& h);

/// Samples pairs in [mu, U]^d and checks |c(x) - c(y)| <= B d_E(x, y) exactly.
/// Returns the number of violating pairs.
std::size_t spot_check_lipschitz(const CostFunction& c, const Config& cfg, std::uint64_t seed, std::size_t samples);

struct ProcessOpt {
  ProcessId proc = 0;
  Point y;
  Rat value;
};

struct OptResult {
  std::vector<ProcessOpt> per_process;
  /// All minimizations here are exact.
  Rat delta_opt;
  Rat value_bound;
  Rat max_value_gap;
  double max_point_distance = 0.0;
  bool membership_ok = true;
  bool agreement_ok = true;
  /// Inputs shared by at least 2f + 1 processes, and whether every c(y_i) <= c(x).
  std::vector<Point> shared_inputs;
  bool weak_optimality_ok = true;

  bool ok() const { return membership_ok && agreement_ok && weak_optimality_ok; }
};

/// Step 2 at every fault-free process plus the value-agreement and weak
/// optimality checks. Point distances are reported, never asserted.
OptResult optimize_run(const TraceView& view, const CostFunction& c);

json to_json(const OptResult& r, const Rat& epsilon);

}  // namespace polycc

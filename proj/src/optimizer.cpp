#include "polycc/optimizer.hpp"

#include <algorithm>
#include <map>

#include "polycc/rng.hpp"

namespace polycc {

std::string to_string(CostKind kind) {
  switch (kind) {
    case CostKind::Linear: return "linear";
    case CostKind::Quadratic: return "quadratic";
    case CostKind::MaxAffine: return "max-affine";
  }
  return "?";
}

CostFunction CostFunction::linear(Point coeffs, Rat offset) {
  CostFunction c;
  c.kind = CostKind::Linear;
  c.dim = coeffs.dim();
  c.coeffs = std::move(coeffs);
  c.offset = std::move(offset);
  return c;
}

CostFunction CostFunction::quadratic(Point center, std::vector<Rat> weights) {
  CostFunction c;
  c.kind = CostKind::Quadratic;
  c.dim = center.dim();
  c.center = std::move(center);
  c.weights = std::move(weights);
  return c;
}

CostFunction CostFunction::max_affine(std::vector<AffinePiece> pieces) {
  CostFunction c;
  c.kind = CostKind::MaxAffine;
  c.dim = pieces.empty() ? 1 : pieces.front().a.dim();
  c.pieces = std::move(pieces);
  return c;
}

void CostFunction::validate() const {
  if (dim != 1 && dim != 2) throw ConfigError("cost dimension must be 1 or 2");
  switch (kind) {
    case CostKind::Linear:
      if (coeffs.dim() != dim) throw ConfigError("linear cost coefficient dimension mismatch");
      break;
    case CostKind::Quadratic: {
      if (center.dim() != dim || weights.size() != dim * dim) throw ConfigError("quadratic cost shape mismatch");
      const auto& w = weights;
      const bool pd = dim == 1 ? sgn(w[0]) > 0 : (sgn(w[0]) > 0 && w[1] == w[2] && sgn(Rat(w[0] * w[3] - w[1] * w[2])) > 0);
      if (!pd) throw ConfigError("quadratic cost weights must be symmetric positive definite");
      break;
    }
    case CostKind::MaxAffine:
      if (pieces.empty()) throw ConfigError("max-affine cost needs at least one piece");
      for (const auto& p : pieces)
        if (p.a.dim() != dim) throw ConfigError("max-affine piece dimension mismatch");
      break;
  }
  if (sgn(lipschitz) < 0) throw ConfigError("Lipschitz bound must be non-negative");
}

Rat CostFunction::operator()(const Point& x) const {
  switch (kind) {
    case CostKind::Linear: return dot(coeffs, x) + offset;
    case CostKind::Quadratic: {
      const Point u = x - center;
      Rat v = 0;
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t s = 0; s < dim; ++s) v += u[r] * weights[r * dim + s] * u[s];
      return v;
    }
    case CostKind::MaxAffine: {
      Rat best = dot(pieces.front().a, x) + pieces.front().b;
      for (const auto& p : pieces) best = std::max(best, Rat(dot(p.a, x) + p.b));
      return best;
    }
  }
  return 0;
}

Rat CostFunction::default_lipschitz(const Config& cfg) const {
  switch (kind) {
    case CostKind::Linear: return sqrt_upper_bound(squared_norm(coeffs));
    case CostKind::MaxAffine: {
      Rat m = 0;
      for (const auto& p : pieces) m = std::max(m, squared_norm(p.a));
      return sqrt_upper_bound(m);
    }
    case CostKind::Quadratic: {
      // |grad| = 2|W(x - z)| <= 2 |W|_F max_x |x - z| over the box.
      Rat frob = 0;
      for (const auto& w : weights) frob += w * w;
      Rat radius = 0;
      for (std::size_t r = 0; r < dim; ++r) {
        const Rat lo = cfg.mu - center[r], hi = cfg.upper - center[r];
        radius += std::max(Rat(lo * lo), Rat(hi * hi));
      }
      return 2 * sqrt_upper_bound(frob) * sqrt_upper_bound(radius);
    }
  }
  return 0;
}

CostFunction cost_from_json(const json& j, const Config& cfg) {
  const std::string kind = j.at("kind").get<std::string>();
  CostFunction c;
  if (kind == "linear") {
    c = CostFunction::linear(point_from_json(j.at("coeffs")), j.contains("offset") ? rat_from_json(j.at("offset")) : Rat(0));
  } else if (kind == "quadratic") {
    Point z = point_from_json(j.at("center"));
    std::vector<Rat> w;
    if (j.contains("weights")) {
      for (const auto& row : j.at("weights"))
        for (const auto& v : row) w.push_back(rat_from_json(v));
    } else {
      for (std::size_t r = 0; r < z.dim(); ++r)
        for (std::size_t s = 0; s < z.dim(); ++s) w.push_back(r == s ? Rat(1) : Rat(0));
    }
    c = CostFunction::quadratic(std::move(z), std::move(w));
  } else if (kind == "max-affine" || kind == "tabulated") {
    std::vector<AffinePiece> pieces;
    for (const auto& p : j.at("pieces")) pieces.push_back(AffinePiece{point_from_json(p.at("a")), rat_from_json(p.at("b"))});
    c = CostFunction::max_affine(std::move(pieces));
  } else {
    throw ConfigError("unknown cost kind '" + kind + "'");
  }
  if (c.dim != cfg.d) throw ConfigError("cost dimension does not match d");
  c.lipschitz = j.contains("B") ? rat_from_json(j.at("B")) : c.default_lipschitz(cfg);
  c.validate();
  return c;
}

json to_json(const CostFunction& c) {
  json j{{"kind", to_string(c.kind)}, {"B", format_rat(c.lipschitz)}};
  switch (c.kind) {
    case CostKind::Linear:
      j["coeffs"] = to_json(c.coeffs);
      j["offset"] = format_rat(c.offset);
      break;
    case CostKind::Quadratic: {
      j["center"] = to_json(c.center);
      json rows = json::array();
      for (std::size_t r = 0; r < c.dim; ++r) {
        json row = json::array();
        for (std::size_t s = 0; s < c.dim; ++s) row.push_back(format_rat(c.weights[r * c.dim + s]));
        rows.push_back(std::move(row));
      }
      j["weights"] = std::move(rows);
      break;
    }
    case CostKind::MaxAffine: {
      json pieces = json::array();
      for (const auto& p : c.pieces) pieces.push_back(json{{"a", to_json(p.a)}, {"b", format_rat(p.b)}});
      j["pieces"] = std::move(pieces);
      break;
    }
  }
  return j;
}

namespace {

std::vector<std::pair<Point, Point>> edges_of(const ConvexPolytope& h) {
  const auto& b = h.boundary();
  std::vector<std::pair<Point, Point>> out;
  if (b.size() == 2) {
    out.emplace_back(b[0], b[1]);
  } else if (b.size() > 2) {
    for (std::size_t k = 0; k < b.size(); ++k) out.emplace_back(b[k], b[(k + 1) % b.size()]);
  }
  return out;
}

/// Point of segment [p, q] at parameter s in [0, 1].
Point along(const Point& p, const Point& q, const Rat& s) { return p + s * (q - p); }

Rat clamp01(const Rat& s) {
  if (s < 0) return 0;
  if (s > 1) return 1;
  return s;
}

std::vector<Point> quadratic_candidates(const CostFunction& c, const ConvexPolytope& h) {
  if (contains_point(h, c.center)) return {c.center};
  std::vector<Point> cand(h.vertices());
  const std::size_t d = c.dim;
  auto wdot = [&](const Point& u, const Point& v) {
    Rat s = 0;
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t t = 0; t < d; ++t) s += u[r] * c.weights[r * d + t] * v[t];
    return s;
  };
  for (const auto& [p, q] : edges_of(h)) {
    const Point e = q - p;
    const Rat den = wdot(e, e);
    if (sgn(den) == 0) continue;
    cand.push_back(along(p, q, clamp01(wdot(e, c.center - p) / den)));
  }
  return cand;
}

std::vector<Point> max_affine_candidates(const CostFunction& c, const ConvexPolytope& h) {
  std::vector<Point> cand(h.vertices());
  const auto& pcs = c.pieces;
  std::vector<std::pair<Point, Rat>> lines;  // g . x = r where pieces k and l are equal
  for (std::size_t k = 0; k < pcs.size(); ++k)
    for (std::size_t l = k + 1; l < pcs.size(); ++l) lines.emplace_back(pcs[k].a - pcs[l].a, pcs[l].b - pcs[k].b);
  for (const auto& [p, q] : edges_of(h))
    for (const auto& [g, r] : lines) {
      const Rat den = dot(g, q - p);
      if (sgn(den) == 0) continue;
      const Rat s = (r - dot(g, p)) / den;
      if (s >= 0 && s <= 1) cand.push_back(along(p, q, s));
    }
  if (c.dim == 2)
    for (std::size_t a = 0; a < lines.size(); ++a)
      for (std::size_t b = a + 1; b < lines.size(); ++b) {
        const auto& [g1, r1] = lines[a];
        const auto& [g2, r2] = lines[b];
        const Rat det = g1[0] * g2[1] - g1[1] * g2[0];
        if (sgn(det) == 0) continue;
        Point x{Rat((r1 * g2[1] - r2 * g1[1]) / det), Rat((g1[0] * r2 - g2[0] * r1) / det)};
        if (contains_point(h, x)) cand.push_back(std::move(x));
      }
  return cand;
}

double distance(const Point& a, const Point& b) { return sqrt_to_double(squared_norm(a - b)); }

}  // namespace

Minimizer minimize_over_polytope(const CostFunction& c, const ConvexPolytope& h) {
  if (h.is_empty()) throw std::invalid_argument("minimize_over_polytope: empty polytope");
  if (h.dim() != c.dim) throw DimensionMismatch("minimize_over_polytope: cost and polytope dimensions differ");
  std::vector<Point> cand;
  switch (c.kind) {
    case CostKind::Linear: cand = h.vertices(); break;
    case CostKind::Quadratic: cand = quadratic_candidates(c, h); break;
    case CostKind::MaxAffine: cand = max_affine_candidates(c, h); break;
  }
  std::optional<Minimizer> best;
  for (auto& x : cand) {
    Rat v = c(x);
    if (!best || v < best->value || (v == best->value && x < best->y)) best = Minimizer{std::move(x), std::move(v)};
  }
  return *best;
}

std::size_t spot_check_lipschitz(const CostFunction& c, const Config& cfg, std::uint64_t seed, std::size_t samples) {
  Rng rng(seed);
  constexpr long kGrid = 1000;
  auto sample = [&] {
    std::vector<Rat> xs;
    for (std::size_t r = 0; r < c.dim; ++r)
      xs.push_back(cfg.mu + (cfg.upper - cfg.mu) * make_rat(static_cast<long>(rng.below(kGrid + 1)), kGrid));
    return Point(std::move(xs));
  };
  const Rat b2 = c.lipschitz * c.lipschitz;
  std::size_t bad = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const Point x = sample(), y = sample();
    const Rat gap = c(x) - c(y);
    if (gap * gap > b2 * squared_norm(x - y)) ++bad;
  }
  return bad;
}

OptResult optimize_run(const TraceView& view, const CostFunction& c) {
  OptResult r;
  r.delta_opt = 0;
  r.value_bound = view.cfg().epsilon * c.lipschitz + 2 * r.delta_opt;
  for (ProcessId i : view.fault_free()) {
    const ConvexPolytope* h = view.decision(i);
    if (!h) {
      r.membership_ok = false;
      continue;
    }
    Minimizer m = minimize_over_polytope(c, *h);
    if (!contains_point(*h, m.y)) r.membership_ok = false;
    r.per_process.push_back(ProcessOpt{i, std::move(m.y), std::move(m.value)});
  }
  const auto& pp = r.per_process;
  for (std::size_t a = 0; a < pp.size(); ++a)
    for (std::size_t b = a + 1; b < pp.size(); ++b) {
      const Rat gap = abs(Rat(pp[a].value - pp[b].value));
      if (gap > r.max_value_gap) r.max_value_gap = gap;
      r.max_point_distance = std::max(r.max_point_distance, distance(pp[a].y, pp[b].y));
    }
  r.agreement_ok = r.max_value_gap <= r.value_bound;

  std::map<Point, std::size_t> counts;
  for (const auto& x : view.trace().header.inputs) ++counts[x];
  for (const auto& [x, k] : counts) {
    if (k < 2 * view.cfg().f + 1) continue;
    r.shared_inputs.push_back(x);
    const Rat cx = c(x) + r.delta_opt;
    for (const auto& p : pp)
      if (p.value > cx) r.weak_optimality_ok = false;
  }
  return r;
}

json to_json(const OptResult& r, const Rat& epsilon) {
  json procs = json::array();
  for (const auto& p : r.per_process)
    procs.push_back(json{{"proc", p.proc}, {"y", to_json(p.y)}, {"value", format_rat(p.value)}, {"value_approx", to_double(p.value)}});
  json shared = json::array();
  for (const auto& x : r.shared_inputs) shared.push_back(to_json(x));
  return json{{"ok", r.ok()},
              {"delta_opt", format_rat(r.delta_opt)},
              {"value_bound", format_rat(r.value_bound)},
              {"max_value_gap", format_rat(r.max_value_gap)},
              {"max_value_gap_approx", to_double(r.max_value_gap)},
              {"max_point_distance", r.max_point_distance},
              {"point_distance_over_epsilon", r.max_point_distance / to_double(epsilon)},
              {"membership_ok", r.membership_ok},
              {"agreement_ok", r.agreement_ok},
              {"shared_inputs", std::move(shared)},
              {"weak_optimality_ok", r.weak_optimality_ok},
              {"processes", std::move(procs)}};
}

}  // namespace polycc

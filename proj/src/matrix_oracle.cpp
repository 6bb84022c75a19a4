#include "polycc/matrix_oracle.hpp"

#include <algorithm>

namespace polycc {

StochMatrix StochMatrix::identity(std::size_t n) {
  StochMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool StochMatrix::is_row_stochastic() const {
  for (std::size_t i = 0; i < n_; ++i) {
    Rat sum = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (sgn((*this)(i, j)) < 0) return false;
      sum += (*this)(i, j);
    }
    if (sum != 1) return false;
  }
  return true;
}

StochMatrix mat_mul(const StochMatrix& a, const StochMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("mat_mul: size mismatch");
  const std::size_t n = a.size();
  StochMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(a(i, k)) == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (sgn(b(k, j)) != 0) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

ConvexPolytope mat_vec_row(const StochMatrix& a, std::size_t i, const PolytopeVector& v) {
  if (v.size() != a.size()) throw std::invalid_argument("mat_vec: size mismatch");
  std::vector<ConvexPolytope> ops;
  std::vector<Rat> w;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (sgn(a(i, k)) == 0) continue;
    ops.push_back(v[k]);
    w.push_back(a(i, k));
  }
  if (ops.empty()) throw std::invalid_argument("mat_vec: row " + std::to_string(i) + " has empty support");
  return linear_combination(ops, w);
}

PolytopeVector mat_vec(const StochMatrix& a, const PolytopeVector& v) {
  PolytopeVector out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(mat_vec_row(a, i, v));
  return out;
}

StochMatrix build_M(const TraceView& view, unsigned t) {
  if (t == 0 || t > view.t_end()) throw std::invalid_argument("build_M: round out of range");
  const std::size_t n = view.n();
  const auto crashed_next = view.crashed_before_round(t + 1);
  StochMatrix m(n);
  for (ProcessId i = 0; i < n; ++i) {
    if (crashed_next.count(i)) {
      for (std::size_t k = 0; k < n; ++k) m(i, k) = make_rat(1, static_cast<long>(n));
      continue;
    }
    const auto* senders = view.used_senders(i, t);
    if (!senders || senders->empty())
      throw TraceFormatError("process " + std::to_string(i) + " is outside F[" + std::to_string(t + 1) +
                             "] but never completed round " + std::to_string(t));
    const Rat w = make_rat(1, static_cast<long>(senders->size()));
    for (ProcessId k : *senders) m(i, k) = w;
  }
  return m;
}

std::vector<StochMatrix> build_all_M(const TraceView& view) {
  std::vector<StochMatrix> ms;
  ms.reserve(view.t_end() + 1);
  ms.push_back(StochMatrix::identity(view.n()));
  for (unsigned t = 1; t <= view.t_end(); ++t) ms.push_back(build_M(view, t));
  return ms;
}

PolytopeVector init_v0(const TraceView& view) {
  const auto ff = view.fault_free();
  if (ff.empty()) throw TraceFormatError("no fault-free process");
  const ConvexPolytope* hm = view.h(ff.front(), 0);
  if (!hm) throw TraceFormatError("fault-free process " + std::to_string(ff.front()) + " has no h[0]");
  const auto f1 = view.crashed_before_round(1);
  PolytopeVector v;
  for (ProcessId i = 0; i < view.n(); ++i) {
    if (f1.count(i)) {
      v.push_back(*hm);
      continue;
    }
    const ConvexPolytope* hi = view.h(i, 0);
    if (!hi) throw TraceFormatError("process " + std::to_string(i) + " is outside F[1] but has no h[0]");
    v.push_back(*hi);
  }
  return v;
}

Ergodicity ergodicity(const StochMatrix& a) {
  const std::size_t n = a.size();
  Ergodicity e{0, 0};
  Rat min_overlap = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Rat overlap = 0;
      for (std::size_t k = 0; k < n; ++k) {
        Rat diff = abs(Rat(a(i, k) - a(j, k)));
        if (diff > e.delta) e.delta = diff;
        overlap += std::min(a(i, k), a(j, k));
      }
      if (overlap < min_overlap) min_overlap = overlap;
    }
  e.lambda = n < 2 ? Rat(0) : Rat(1 - min_overlap);
  return e;
}

MatrixStateReport check_matrix_state(const TraceView& view) { return check_matrix_state(view, build_all_M(view)); }

MatrixStateReport check_matrix_state(const TraceView& view, const std::vector<StochMatrix>& ms) {
  MatrixStateReport rep;
  const PolytopeVector v0 = init_v0(view);
  StochMatrix p = StochMatrix::identity(view.n());
  for (unsigned tau = 0; tau <= view.t_end(); ++tau) {
    if (tau > 0) p = mat_mul(ms[tau], p);
    const auto crashed_next = view.crashed_before_round(tau + 1);
    for (ProcessId i = 0; i < view.n(); ++i) {
      if (crashed_next.count(i)) continue;
      ConvexPolytope expected = mat_vec_row(p, i, v0);
      const ConvexPolytope* actual = view.h(i, tau);
      ++rep.checked;
      if (!actual || !(expected == *actual))
        rep.mismatches.push_back(
            MatrixStateMismatch{tau, i, std::move(expected), actual ? *actual : ConvexPolytope::empty(view.cfg().d)});
    }
  }
  return rep;
}

DecayReport check_decay(const TraceView& view) { return check_decay(view, build_all_M(view)); }

DecayReport check_decay(const TraceView& view, const std::vector<StochMatrix>& ms) {
  DecayReport rep;
  const std::size_t n = view.n();
  const Rat inv_n = make_rat(1, static_cast<long>(n));
  const Rat contraction = 1 - inv_n;
  const auto ff = view.fault_free();
  const auto f1 = view.crashed_before_round(1);
  const bool need_fault_free_column = view.cfg().mode == InputMode::IncorrectInputs;
  auto fail = [&rep](unsigned t, const std::string& what) {
    if (rep.violations.size() < 50) rep.violations.push_back("round " + std::to_string(t) + ": " + what);
  };

  StochMatrix p = StochMatrix::identity(n);
  Rat lambda_product = 1;
  Rat bound = 1;
  Rat max_lambda = 0;
  for (unsigned t = 1; t <= view.t_end(); ++t) {
    const StochMatrix& m = ms[t];
    ++rep.rounds;
    if (!m.is_row_stochastic()) fail(t, "M[t] is not row stochastic");
    const Ergodicity em = ergodicity(m);
    if (em.lambda > max_lambda) max_lambda = em.lambda;
    if (em.lambda > contraction) fail(t, "lambda(M[t]) = " + format_rat(em.lambda) + " exceeds 1 - 1/n");

    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        bool found = false;
        for (std::size_t k = 0; k < n && !found; ++k) {
          if (need_fault_free_column && view.is_faulty(k)) continue;
          found = m(i, k) >= inv_n && m(j, k) >= inv_n;
        }
        if (!found) fail(t, "rows " + std::to_string(i) + "," + std::to_string(j) + " share no column with weight >= 1/n");
      }

    p = mat_mul(m, p);
    lambda_product *= em.lambda;
    bound *= contraction;
    if (!p.is_row_stochastic()) fail(t, "P[t] is not row stochastic");
    const Ergodicity ep = ergodicity(p);
    if (ep.delta > lambda_product) fail(t, "delta(P[t]) exceeds the product of lambda(M)");
    if (lambda_product > bound) fail(t, "product of lambda(M) exceeds (1 - 1/n)^t");
    for (std::size_t a = 0; a < ff.size(); ++a)
      for (std::size_t b = a + 1; b < ff.size(); ++b)
        for (std::size_t k = 0; k < n; ++k)
          if (abs(Rat(p(ff[a], k) - p(ff[b], k))) > bound)
            fail(t, "|P_ik - P_jk| exceeds (1 - 1/n)^t for i=" + std::to_string(ff[a]) + ", j=" + std::to_string(ff[b]));
    const auto crashed_next = view.crashed_before_round(t + 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (crashed_next.count(j)) continue;
      for (ProcessId k : f1)
        if (sgn(p(j, k)) != 0)
          fail(t, "P_jk nonzero for j=" + std::to_string(j) + " outside F[t+1], k=" + std::to_string(k) + " in F[1]");
    }
    if (t == view.t_end()) rep.final_delta = to_double(ep.delta);
  }
  rep.max_lambda = to_double(max_lambda);
  return rep;
}

json to_json(const StochMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(format_rat(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const MatrixStateReport& r) {
  json mism = json::array();
  for (const auto& m : r.mismatches)
    mism.push_back(json{{"round", m.round}, {"proc", m.proc}, {"expected", to_json(m.expected)}, {"actual", to_json(m.actual)}});
  return json{{"ok", r.ok()}, {"checked", r.checked}, {"mismatches", std::move(mism)}};
}

json to_json(const DecayReport& r) {
  return json{{"ok", r.ok()},
              {"rounds", r.rounds},
              {"max_lambda", r.max_lambda},
              {"final_delta", r.final_delta},
              {"violations", r.violations}};
}

}  // namespace polycc

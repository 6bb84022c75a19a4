#pragma once

#include <string>
#include <vector>

#include "polycc/trace.hpp"

namespace polycc {

/// Dense n x n rational matrix. Row stochasticity is checked, not enforced.
class StochMatrix {
 public:
  explicit StochMatrix(std::size_t n = 0) : n_(n), a_(n * n) {}
  static StochMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  Rat& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  bool is_row_stochastic() const;

  friend bool operator==(const StochMatrix&, const StochMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<Rat> a_;
};

using PolytopeVector = std::vector<ConvexPolytope>;

StochMatrix mat_mul(const StochMatrix& a, const StochMatrix& b);
/// Entry i of A v: the combination of v over the support of row i
/// (zero-weight operands are dropped).
ConvexPolytope mat_vec_row(const StochMatrix& a, std::size_t i, const PolytopeVector& v);
PolytopeVector mat_vec(const StochMatrix& a, const PolytopeVector& v);

/// M[t] reconstructed from the trace. Row i outside F[t+1] puts
/// 1/|MSG_i[t]| on the senders its round-t threshold used; rows in F[t+1]
/// are uniform 1/n. Throws TraceFormatError if some row outside F[t+1] never
/// completed round t.
StochMatrix build_M(const TraceView& view, unsigned t);
/// M[1], ..., M[t_end] (index 0 holds the identity).
std::vector<StochMatrix> build_all_M(const TraceView& view);

/// v[0]: h_i[0] for i outside F[1]; rows in F[1] copy h_m[0] where m is the
/// lowest-id fault-free process.
PolytopeVector init_v0(const TraceView& view);

struct Ergodicity {
  Rat delta;
  Rat lambda;
};
Ergodicity ergodicity(const StochMatrix& a);

struct MatrixStateMismatch {
  unsigned round = 0;
  ProcessId proc = 0;
  ConvexPolytope expected;
  ConvexPolytope actual;
};

struct MatrixStateReport {
  std::size_t checked = 0;
  std::vector<MatrixStateMismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

/// For every round tau and every i outside F[tau+1], compares entry i of
/// (M[tau] ... M[1]) v[0] with the recorded h_i[tau] by exact equality.
MatrixStateReport check_matrix_state(const TraceView& view);
MatrixStateReport check_matrix_state(const TraceView& view, const std::vector<StochMatrix>& ms);

struct DecayReport {
  std::size_t rounds = 0;
  std::vector<std::string> violations;
  /// max_t lambda(M[t]) and delta(P[t_end]) as doubles, for reporting.
  double max_lambda = 0.0;
  double final_delta = 0.0;
  bool ok() const { return violations.empty(); }
};

/// Exact checks on the matrices of a trace: stochastic rows, lambda(M[t]) <=
/// 1 - 1/n, delta(P[t]) <= prod lambda <= (1 - 1/n)^t, entrywise decay for
/// fault-free pairs, a common heavy column for every row pair, and
/// P_jk[t] = 0 for j outside F[t+1], k in F[1].
DecayReport check_decay(const TraceView& view);
DecayReport check_decay(const TraceView& view, const std::vector<StochMatrix>& ms);

json to_json(const StochMatrix& m);
json to_json(const MatrixStateReport& r);
json to_json(const DecayReport& r);

}  // namespace polycc

#include "polycc/stable_vector.hpp"

#include <algorithm>
#include <string>

namespace polycc {

bool DeliveredSet::contains_sender(ProcessId p) const {
  return std::any_of(tuples.begin(), tuples.end(), [p](const InputTuple& t) { return t.sender == p; });
}

bool DeliveredSet::subset_of(const DeliveredSet& other) const {
  return std::all_of(tuples.begin(), tuples.end(), [&](const InputTuple& t) {
    return std::find(other.tuples.begin(), other.tuples.end(), t) != other.tuples.end();
  });
}

StableVector::StableVector(std::size_t n, std::size_t f)
    : n_(n), f_(f), pending_(n), submitted_(n, false), delivered_(n) {
  if (f >= n) throw std::invalid_argument("stable vector needs f < n");
}

void StableVector::check_id(ProcessId p) const {
  if (p >= n_) throw StableVectorError("process id " + std::to_string(p) + " out of range");
}

void StableVector::submit(ProcessId p, Point x) {
  check_id(p);
  if (submitted_[p]) throw StableVectorError("process " + std::to_string(p) + " submitted twice");
  submitted_[p] = true;
  pending_[p] = std::move(x);
}

bool StableVector::is_pending(ProcessId p) const {
  check_id(p);
  return pending_[p].has_value();
}

std::vector<ProcessId> StableVector::pending() const {
  std::vector<ProcessId> out;
  for (ProcessId p = 0; p < n_; ++p)
    if (pending_[p]) out.push_back(p);
  return out;
}

void StableVector::commit(ProcessId p) {
  if (!is_pending(p)) throw StableVectorError("no pending tuple for process " + std::to_string(p));
  sequence_.push_back(InputTuple{std::move(*pending_[p]), p});
  pending_[p].reset();
}

void StableVector::drop(ProcessId p) {
  if (!is_pending(p)) throw StableVectorError("no pending tuple for process " + std::to_string(p));
  pending_[p].reset();
}

const DeliveredSet& StableVector::deliver(ProcessId p, std::size_t prefix) {
  check_id(p);
  if (delivered_[p]) throw StableVectorError("process " + std::to_string(p) + " already received its set");
  if (prefix < n_ - f_ || prefix > sequence_.size())
    throw StableVectorError("prefix " + std::to_string(prefix) + " outside [" + std::to_string(n_ - f_) + ", " +
                            std::to_string(sequence_.size()) + "]");
  DeliveredSet r{p, std::vector<InputTuple>(sequence_.begin(), sequence_.begin() + static_cast<long>(prefix))};
  delivered_[p] = std::move(r);
  return *delivered_[p];
}

}  // namespace polycc

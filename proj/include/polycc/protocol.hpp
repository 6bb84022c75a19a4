#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "polycc/geometry.hpp"
#include "polycc/stable_vector.hpp"

namespace polycc {

enum class InputMode { IncorrectInputs, CorrectInputs };

std::string to_string(InputMode mode);
InputMode parse_input_mode(const std::string& text);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Config {
  std::size_t n = 0;
  std::size_t f = 0;
  std::size_t d = 1;
  Rat epsilon{1};
  /// Per-coordinate input bounds: every coordinate lies in [mu, upper].
  Rat mu{0};
  Rat upper{1};
  InputMode mode = InputMode::IncorrectInputs;

  /// Smallest n accepted for this mode and dimension.
  std::size_t min_processes() const;
  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
  void validate_input(const Point& x) const;
};

/// First round t >= 1 with (1 - 1/n)^t * sqrt(d n^2 max(U^2, mu^2)) < epsilon,
/// decided on the squared inequality in exact arithmetic.
unsigned compute_t_end(const Config& cfg);

/// h_i[0] from the delivered round-0 set: the safe area of its values in
/// incorrect-inputs mode, their plain hull in correct-inputs mode.
ConvexPolytope round0_decide_h0(const DeliveredSet& delivered, const Config& cfg);

using PolytopePtr = std::shared_ptr<const ConvexPolytope>;

/// (h, sender, round) with round >= 1.
struct RoundMessage {
  PolytopePtr payload;
  ProcessId sender = 0;
  unsigned round = 0;
};

enum class Receipt { Accepted, Buffered, Late };
std::string to_string(Receipt r);

struct Broadcast {
  unsigned round = 0;
  PolytopePtr payload;
};

/// Outcome of a round's threshold firing at one process.
struct ThresholdOutcome {
  unsigned round = 0;
  PolytopePtr h;
  /// Senders whose round messages formed Y_i[t], ascending.
  std::vector<ProcessId> senders;
  /// Set when the process moved on to round + 1; empty when it decided.
  std::optional<Broadcast> next;
};

/// One process running the convex consensus rounds as a sequential state
/// machine. The simulator feeds it the delivered round-0 set and round
/// messages and performs the sends it asks for.
class Process {
 public:
  Process(ProcessId id, Point input, const Config& cfg, unsigned t_end);

  ProcessId id() const { return id_; }
  const Point& input() const { return input_; }
  /// 0 until the round-0 set arrives, then the round currently being collected.
  unsigned round() const { return round_; }
  bool decided() const { return decision_ != nullptr; }
  PolytopePtr decision() const { return decision_; }

  /// h_i[t] for every completed round t (index 0 is h_i[0]).
  const std::vector<PolytopePtr>& history() const { return history_; }
  /// MSG senders used at round t's threshold (index 0 unused).
  const std::vector<std::vector<ProcessId>>& used_senders() const { return used_; }
  const std::optional<DeliveredSet>& delivered() const { return delivered_; }

  /// Round 0 completion: computes h_i[0], enters round 1 and returns the
  /// round-1 broadcast. The own message is already counted.
  Broadcast on_delivered(const DeliveredSet& r);

  /// Records a peer message. Throws InvariantViolation on a duplicate
  /// (sender, round) pair or a message from itself.
  Receipt on_round_message(const RoundMessage& msg);

  /// Fires the current round's threshold if it is reached and has not
  /// fired yet; otherwise returns std::nullopt.
  std::optional<ThresholdOutcome> try_threshold();

 private:
  void enter_round(unsigned t);

  ProcessId id_;
  Point input_;
  const Config* cfg_;
  unsigned t_end_;
  unsigned round_ = 0;
  bool fired_ = false;
  std::optional<DeliveredSet> delivered_;
  std::map<unsigned, std::vector<RoundMessage>> inbox_;
  std::set<std::pair<ProcessId, unsigned>> seen_;
  std::vector<PolytopePtr> history_;
  std::vector<std::vector<ProcessId>> used_;
  PolytopePtr decision_;
};

}  // namespace polycc

#include "polycc/protocol.hpp"

#include <algorithm>

namespace polycc {

std::string to_string(InputMode mode) {
  return mode == InputMode::IncorrectInputs ? "incorrect-inputs" : "correct-inputs";
}

InputMode parse_input_mode(const std::string& text) {
  if (text == "incorrect-inputs") return InputMode::IncorrectInputs;
  if (text == "correct-inputs") return InputMode::CorrectInputs;
  throw ConfigError("unknown mode '" + text + "' (expected incorrect-inputs or correct-inputs)");
}

std::string to_string(Receipt r) {
  switch (r) {
    case Receipt::Accepted: return "accepted";
    case Receipt::Buffered: return "buffered";
    case Receipt::Late: return "late";
  }
  return "?";
}

std::size_t Config::min_processes() const {
  return mode == InputMode::IncorrectInputs ? (d + 2) * f + 1 : 2 * f + 1;
}

void Config::validate() const {
  if (d != 1 && d != 2) throw ConfigError("dimension d=" + std::to_string(d) + " unsupported (use 1 or 2)");
  if (n == 0) throw ConfigError("n must be positive");
  if (n < min_processes())
    throw ConfigError("n=" + std::to_string(n) + " violates n >= " + std::to_string(min_processes()) + " for f=" +
                      std::to_string(f) + ", d=" + std::to_string(d) + " in " + to_string(mode) + " mode");
  if (sgn(epsilon) <= 0) throw ConfigError("epsilon must be positive");
  if (mu > upper) throw ConfigError("input bounds require mu <= U");
}

void Config::validate_input(const Point& x) const {
  if (x.dim() != d) throw ConfigError("input of dimension " + std::to_string(x.dim()) + ", expected " + std::to_string(d));
  for (const auto& c : x.coords())
    if (c < mu || c > upper) throw ConfigError("input coordinate " + format_rat(c) + " outside [mu, U]");
}

unsigned compute_t_end(const Config& cfg) {
  const Rat big = std::max(cfg.upper * cfg.upper, cfg.mu * cfg.mu);
  Rat bound = Rat(static_cast<long>(cfg.d * cfg.n * cfg.n)) * big;
  const Rat eps2 = cfg.epsilon * cfg.epsilon;
  Rat ratio = make_rat(static_cast<long>(cfg.n) - 1, static_cast<long>(cfg.n));
  ratio *= ratio;
  unsigned t = 1;
  bound *= ratio;
  while (!(bound < eps2)) {
    bound *= ratio;
    ++t;
  }
  return t;
}

ConvexPolytope round0_decide_h0(const DeliveredSet& delivered, const Config& cfg) {
  if (delivered.tuples.size() < cfg.n - cfg.f)
    throw InvariantViolation("delivered set of size " + std::to_string(delivered.tuples.size()) + " below n - f");
  PointMultiset values;
  values.reserve(delivered.tuples.size());
  for (const auto& t : delivered.tuples) values.push_back(t.value);
  ConvexPolytope h = cfg.mode == InputMode::IncorrectInputs ? safe_area(values, cfg.f) : convex_hull(values, cfg.d);
  if (h.is_empty()) throw InvariantViolation("h[0] is empty at process " + std::to_string(delivered.owner));
  return h;
}

Process::Process(ProcessId id, Point input, const Config& cfg, unsigned t_end)
    : id_(id), input_(std::move(input)), cfg_(&cfg), t_end_(t_end) {}

void Process::enter_round(unsigned t) {
  round_ = t;
  fired_ = false;
  inbox_[t].push_back(RoundMessage{history_.back(), id_, t});
}

Broadcast Process::on_delivered(const DeliveredSet& r) {
  if (delivered_) throw InvariantViolation("round-0 set delivered twice to process " + std::to_string(id_));
  delivered_ = r;
  history_.push_back(std::make_shared<const ConvexPolytope>(round0_decide_h0(r, *cfg_)));
  used_.emplace_back();
  enter_round(1);
  return Broadcast{1, history_.back()};
}

Receipt Process::on_round_message(const RoundMessage& msg) {
  if (msg.round == 0) throw InvariantViolation("round messages start at round 1");
  if (msg.sender == id_) throw InvariantViolation("process received its own round message over a channel");
  if (!seen_.insert({msg.sender, msg.round}).second)
    throw InvariantViolation("duplicate round " + std::to_string(msg.round) + " message from " +
                             std::to_string(msg.sender) + " at " + std::to_string(id_));
  if (round_ == 0 || msg.round > round_) {
    inbox_[msg.round].push_back(msg);
    return Receipt::Buffered;
  }
  if (msg.round < round_ || fired_) return Receipt::Late;
  inbox_[msg.round].push_back(msg);
  return Receipt::Accepted;
}

std::optional<ThresholdOutcome> Process::try_threshold() {
  if (round_ == 0 || fired_) return std::nullopt;
  auto it = inbox_.find(round_);
  if (it == inbox_.end() || it->second.size() < cfg_->n - cfg_->f) return std::nullopt;

  const auto& msgs = it->second;
  std::vector<ConvexPolytope> ys;
  ys.reserve(msgs.size());
  ThresholdOutcome out;
  out.round = round_;
  for (const auto& m : msgs) {
    ys.push_back(*m.payload);
    out.senders.push_back(m.sender);
  }
  std::sort(out.senders.begin(), out.senders.end());
  std::vector<Rat> weights(ys.size(), make_rat(1, static_cast<long>(ys.size())));
  out.h = std::make_shared<const ConvexPolytope>(linear_combination(ys, weights));
  fired_ = true;
  history_.push_back(out.h);
  used_.push_back(out.senders);
  inbox_.erase(it);

  if (round_ < t_end_) {
    enter_round(round_ + 1);
    out.next = Broadcast{round_, out.h};
  } else {
    decision_ = out.h;
  }
  return out;
}

}  // namespace polycc

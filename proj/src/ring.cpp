#include "atlplus/ring.hpp"

#include <charconv>

namespace atlplus {

RingCarriage::RingCarriage(std::size_t cells) : cells_(cells) {
  if (cells < 3) throw ModelError("a ring needs at least three cells");
}

std::size_t RingCarriage::cell(const StateKey& s) const {
  std::size_t value = 0;
  if (s.size() < 2 || s[0] != 'q') throw ModelError("unknown state '" + s + "'");
  const auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || value >= cells_ || (s.size() > 2 && s[1] == '0')) {
    throw ModelError("unknown state '" + s + "'");
  }
  return value;
}

bool RingCarriage::do_has_state(const StateKey& s) const {
  try {
    cell(s);
    return true;
  } catch (const ModelError&) {
    return false;
  }
}

std::vector<Action> RingCarriage::do_available_actions(AgentId, const StateKey&) const { return {"push", "wait"}; }

StateKey RingCarriage::do_out(const StateKey& s, const GlobalMove& move) const {
  const std::size_t i = cell(s);
  for (const auto& a : move.actions) {
    if (a != "push" && a != "wait") throw ModelError("action '" + a + "' not available at state '" + s + "'");
  }
  const bool first = move.actions[0] == "push";
  const bool second = move.actions[1] == "push";
  std::size_t next = i;
  if (first && !second) next = (i + 1) % cells_;
  if (second && !first) next = (i + cells_ - 1) % cells_;
  return "q" + std::to_string(next);
}

std::vector<std::string> RingCarriage::do_labeling(const StateKey& s) const {
  return {"pos" + std::to_string(cell(s) % 3)};
}

}  // namespace atlplus

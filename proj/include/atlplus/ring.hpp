#pragma once

#include <cstddef>

#include "atlplus/cgm.hpp"

namespace atlplus {

// Programmatic n-cell generalization of the robots-and-carriage model.
// Cells q0..q{n-1}; agents 1 and 2 choose push or wait; if only agent 1
// pushes the carriage moves to q{i+1}, if only agent 2 pushes it moves to
// q{i-1}, otherwise it stays.  Cell qi is labelled pos{i mod 3}.
class RingCarriage final : public ModelProvider {
 public:
  explicit RingCarriage(std::size_t cells);
  std::size_t cells() const noexcept { return cells_; }

 protected:
  int do_agent_count() const override { return 2; }
  bool do_has_state(const StateKey& s) const override;
  std::vector<Action> do_available_actions(AgentId agent, const StateKey& s) const override;
  StateKey do_out(const StateKey& s, const GlobalMove& move) const override;
  std::vector<std::string> do_labeling(const StateKey& s) const override;

 private:
  std::size_t cell(const StateKey& s) const;
  std::size_t cells_;
};

}  // namespace atlplus

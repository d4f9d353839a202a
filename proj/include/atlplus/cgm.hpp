#pragma once

#include <cstddef>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "atlplus/formula.hpp"

namespace atlplus {

using StateKey = std::string;
using Action = std::string;

inline constexpr std::string_view kPlaceholder = "*";

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One action per agent, agent 1 first.
struct GlobalMove {
  std::vector<Action> actions;
  auto operator<=>(const GlobalMove&) const = default;
};

// Actions for coalition members, kPlaceholder for everybody else.
struct CoalitionMove {
  Coalition coalition;
  std::vector<Action> actions;
  auto operator<=>(const CoalitionMove&) const = default;
};

std::string to_string(const GlobalMove& move);
std::string to_string(const CoalitionMove& move);

// Lazy access to a concurrent game model.  All queries go through the
// public non-virtual methods, which record every state they touch.
class ModelProvider {
 public:
  ModelProvider() = default;
  ModelProvider(const ModelProvider& other);
  ModelProvider& operator=(const ModelProvider& other);
  virtual ~ModelProvider() = default;

  int agent_count() const { return do_agent_count(); }
  bool has_state(const StateKey& s) const { return do_has_state(s); }
  std::vector<Action> available_actions(AgentId agent, const StateKey& s) const;
  StateKey out(const StateKey& s, const GlobalMove& move) const;
  std::vector<std::string> labeling(const StateKey& s) const;
  bool holds(const StateKey& s, const std::string& prop) const;

  std::size_t materialized_count() const;
  void reset_materialized();

 protected:
  virtual int do_agent_count() const = 0;
  virtual bool do_has_state(const StateKey& s) const = 0;
  virtual std::vector<Action> do_available_actions(AgentId agent, const StateKey& s) const = 0;
  virtual StateKey do_out(const StateKey& s, const GlobalMove& move) const = 0;
  virtual std::vector<std::string> do_labeling(const StateKey& s) const = 0;

 private:
  void touch(const StateKey& s) const;
  void check_agent(AgentId agent) const;

  mutable std::mutex mutex_;
  mutable std::unordered_set<StateKey> materialized_;
};

// Finite model held in memory.  Immutable once validated.
class ExplicitCGM final : public ModelProvider {
 public:
  explicit ExplicitCGM(int agents);

  // Builder interface.  Actions default to the single action "0".
  std::size_t add_state(const StateKey& name, std::vector<std::string> labels = {});
  void set_actions(const StateKey& s, AgentId agent, std::vector<Action> actions);
  void set_transition(const StateKey& s, const GlobalMove& move, const StateKey& target);
  // Throws ModelError naming the first (state, move) without a transition.
  void validate() const;

  std::size_t state_count() const noexcept { return states_.size(); }
  const StateKey& state_name(std::size_t index) const { return states_.at(index).name; }
  std::size_t state_index(const StateKey& s) const;
  const std::vector<Action>& actions_at(std::size_t state, AgentId agent) const;
  // Successor under the global move given as per-agent action indices.
  std::size_t successor(std::size_t state, std::span<const std::size_t> action_indices) const;
  bool label(std::size_t state, const std::string& prop) const;
  const std::vector<std::string>& labels_at(std::size_t state) const { return states_.at(state).labels; }

  // Serializes in the model file format; load_explicit(to_text()) round-trips.
  std::string to_text() const;

 protected:
  int do_agent_count() const override { return agents_; }
  bool do_has_state(const StateKey& s) const override { return index_.count(s) > 0; }
  std::vector<Action> do_available_actions(AgentId agent, const StateKey& s) const override;
  StateKey do_out(const StateKey& s, const GlobalMove& move) const override;
  std::vector<std::string> do_labeling(const StateKey& s) const override;

 private:
  struct StateData {
    StateKey name;
    std::vector<std::string> labels;
    std::vector<std::vector<Action>> actions;  // per agent
    std::vector<long> transitions;             // mixed-radix move index -> state, -1 unset
  };

  std::size_t move_index(const StateData& data, std::span<const std::size_t> action_indices) const;
  std::size_t move_index(const StateData& data, const GlobalMove& move) const;
  GlobalMove move_at(const StateData& data, std::size_t index) const;
  StateData& data(const StateKey& s);
  const StateData& data(const StateKey& s) const;

  int agents_;
  std::vector<StateData> states_;
  std::unordered_map<StateKey, std::size_t> index_;
};

// Parses the line-oriented model format:
//   agents: k
//   state <name> [p1 p2 ...]
//   actions <state> <agent>: a1 a2 ...
//   trans <state> <a1,...,ak> -> <state>
// '#' starts a comment.
ExplicitCGM load_explicit(std::string_view text);
ExplicitCGM load_explicit_file(const std::string& path);

// All moves of `coalition` at `s`, in lexicographic order of member actions.
std::vector<CoalitionMove> coalition_moves(const ModelProvider& provider, const StateKey& s,
                                           const Coalition& coalition);

// Complement coalition of `coalition` among agents 1..k.
Coalition complement(const Coalition& coalition, int agent_count);

// Combines moves of complementary coalitions into a global move.
GlobalMove merge(const CoalitionMove& a, const CoalitionMove& b);

// States reachable in one step when the coalition plays `move`, first-encounter order.
std::vector<StateKey> out_set(const ModelProvider& provider, const StateKey& s, const CoalitionMove& move);

// Copies the fragment reachable from `root` into an explicit model.
ExplicitCGM explore(const ModelProvider& provider, const StateKey& root, std::size_t max_states = 100000);

}  // namespace atlplus

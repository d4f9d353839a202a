#include "atlplus/generators.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace atlplus {

std::vector<std::string> proposition_names(int count) {
  static const std::vector<std::string> names{"p", "q", "r", "t", "u", "v", "w"};
  if (count < 0 || count > static_cast<int>(names.size())) throw std::invalid_argument("too many propositions");
  return {names.begin(), names.begin() + count};
}

namespace {

struct RawModel {
  int states;
  int agents;
  std::vector<std::vector<int>> actions;  // [state][agent] action count
  std::vector<std::vector<int>> trans;    // [state][move index] target
  std::vector<unsigned> labels;           // [state] proposition bit mask

  int moves(int s) const {
    int m = 1;
    for (int c : actions[s]) m *= c;
    return m;
  }
};

ExplicitCGM materialize(const RawModel& raw, const std::vector<std::string>& props) {
  ExplicitCGM model(raw.agents);
  auto name = [](int s) { return "s" + std::to_string(s); };
  for (int s = 0; s < raw.states; ++s) {
    std::vector<std::string> labels;
    for (std::size_t p = 0; p < props.size(); ++p) {
      if (raw.labels[s] >> p & 1U) labels.push_back(props[p]);
    }
    model.add_state(name(s), std::move(labels));
  }
  for (int s = 0; s < raw.states; ++s) {
    for (int a = 0; a < raw.agents; ++a) {
      std::vector<Action> acts;
      for (int i = 0; i < raw.actions[s][a]; ++i) acts.push_back("a" + std::to_string(i));
      model.set_actions(name(s), a + 1, std::move(acts));
    }
  }
  for (int s = 0; s < raw.states; ++s) {
    for (int m = 0; m < raw.moves(s); ++m) {
      GlobalMove move;
      move.actions.resize(raw.agents);
      int rest = m;
      for (int a = raw.agents - 1; a >= 0; --a) {
        move.actions[a] = "a" + std::to_string(rest % raw.actions[s][a]);
        rest /= raw.actions[s][a];
      }
      model.set_transition(name(s), move, name(raw.trans[s][m]));
    }
  }
  model.validate();
  return model;
}

// Encoding of the model after renaming states by `state_perm` (old -> new),
// actions by `action_perm[s][a]` (old -> new) and propositions by `prop_perm`.
std::vector<int> encode(const RawModel& raw, const std::vector<int>& state_perm,
                        const std::vector<std::vector<std::vector<int>>>& action_perm, const std::vector<int>& prop_perm) {
  std::vector<int> inverse(raw.states);
  for (int s = 0; s < raw.states; ++s) inverse[state_perm[s]] = s;
  std::vector<int> code;
  for (int ns = 0; ns < raw.states; ++ns) {
    const int s = inverse[ns];
    unsigned mask = 0;
    for (std::size_t p = 0; p < prop_perm.size(); ++p) {
      if (raw.labels[s] >> p & 1U) mask |= 1U << prop_perm[p];
    }
    code.push_back(static_cast<int>(mask));
    for (int c : raw.actions[s]) code.push_back(c);
    std::vector<int> row(raw.moves(s));
    for (int m = 0; m < raw.moves(s); ++m) {
      int rest = m;
      int renamed = 0;
      int stride = 1;
      for (int a = raw.agents - 1; a >= 0; --a) {
        const int old_action = rest % raw.actions[s][a];
        rest /= raw.actions[s][a];
        renamed += action_perm[s][a][old_action] * stride;
        stride *= raw.actions[s][a];
      }
      row[renamed] = state_perm[raw.trans[s][m]];
    }
    code.insert(code.end(), row.begin(), row.end());
  }
  return code;
}

std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

bool is_canonical(const RawModel& raw, int props) {
  std::vector<int> identity_states(raw.states), identity_props(props);
  std::iota(identity_states.begin(), identity_states.end(), 0);
  std::iota(identity_props.begin(), identity_props.end(), 0);
  std::vector<std::vector<std::vector<int>>> identity_actions(raw.states);
  std::vector<std::pair<int, int>> slots;
  for (int s = 0; s < raw.states; ++s) {
    for (int a = 0; a < raw.agents; ++a) {
      std::vector<int> p(raw.actions[s][a]);
      std::iota(p.begin(), p.end(), 0);
      identity_actions[s].push_back(p);
      slots.push_back({s, a});
    }
  }
  const std::vector<int> own = encode(raw, identity_states, identity_actions, identity_props);

  const auto state_perms = permutations(raw.states);
  const auto prop_perms = permutations(props);
  auto action_perms = identity_actions;
  bool canonical = true;
  std::function<void(std::size_t)> search = [&](std::size_t slot) {
    if (!canonical) return;
    if (slot == slots.size()) {
      for (const auto& sp : state_perms) {
        for (const auto& pp : prop_perms) {
          if (encode(raw, sp, action_perms, pp) < own) {
            canonical = false;
            return;
          }
        }
      }
      return;
    }
    const auto [s, a] = slots[slot];
    for (const auto& p : permutations(raw.actions[s][a])) {
      action_perms[s][a] = p;
      search(slot + 1);
    }
    action_perms[s][a] = identity_actions[s][a];
  };
  search(0);
  return canonical;
}

// Advances a mixed-radix counter; false once it wraps around.
bool advance(std::vector<int>& digits, const std::vector<int>& radix) {
  for (std::size_t i = digits.size(); i > 0; --i) {
    if (++digits[i - 1] < radix[i - 1]) return true;
    digits[i - 1] = 0;
  }
  return false;
}

}  // namespace

void for_each_model(const ModelBounds& bounds, bool reduce, const std::function<void(const ExplicitCGM&)>& visit) {
  if (bounds.max_states < 1 || bounds.max_agents < 1 || bounds.max_actions < 1 || bounds.propositions < 0) {
    throw std::invalid_argument("infeasible model bounds");
  }
  const auto props = proposition_names(bounds.propositions);
  for (int n = 1; n <= bounds.max_states; ++n) {
    for (int k = 1; k <= bounds.max_agents; ++k) {
      std::vector<int> counts(n * k, 0);
      const std::vector<int> count_radix(n * k, bounds.max_actions);
      do {
        RawModel raw{n, k, std::vector<std::vector<int>>(n, std::vector<int>(k)), {}, std::vector<unsigned>(n, 0)};
        for (int s = 0; s < n; ++s) {
          for (int a = 0; a < k; ++a) raw.actions[s][a] = counts[s * k + a] + 1;
        }
        std::vector<int> targets, target_radix;
        for (int s = 0; s < n; ++s) {
          for (int m = 0; m < raw.moves(s); ++m) {
            targets.push_back(0);
            target_radix.push_back(n);
          }
        }
        do {
          raw.trans.assign(n, {});
          std::size_t t = 0;
          for (int s = 0; s < n; ++s) {
            for (int m = 0; m < raw.moves(s); ++m) raw.trans[s].push_back(targets[t++]);
          }
          std::vector<int> labels(n, 0);
          const std::vector<int> label_radix(n, 1 << bounds.propositions);
          do {
            for (int s = 0; s < n; ++s) raw.labels[s] = static_cast<unsigned>(labels[s]);
            if (!reduce || is_canonical(raw, bounds.propositions)) visit(materialize(raw, props));
          } while (advance(labels, label_radix));
        } while (advance(targets, target_radix));
      } while (advance(counts, count_radix));
    }
  }
}

ExplicitCGM random_model(std::mt19937_64& rng, const ModelBounds& bounds) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RawModel raw;
  raw.states = uniform(1, bounds.max_states);
  raw.agents = uniform(1, bounds.max_agents);
  raw.actions.assign(raw.states, std::vector<int>(raw.agents));
  for (auto& row : raw.actions) {
    for (auto& c : row) c = uniform(1, bounds.max_actions);
  }
  raw.trans.assign(raw.states, {});
  for (int s = 0; s < raw.states; ++s) {
    for (int m = 0; m < raw.moves(s); ++m) raw.trans[s].push_back(uniform(0, raw.states - 1));
  }
  raw.labels.assign(raw.states, 0);
  for (auto& l : raw.labels) l = static_cast<unsigned>(uniform(0, (1 << bounds.propositions) - 1));
  return materialize(raw, proposition_names(bounds.propositions));
}

namespace {

std::vector<Coalition> all_coalitions(int agents) {
  std::vector<Coalition> out;
  for (unsigned mask = 0; mask < (1U << agents); ++mask) {
    std::vector<AgentId> members;
    for (int a = 0; a < agents; ++a) {
      if (mask >> a & 1U) members.push_back(a + 1);
    }
    out.emplace_back(std::move(members));
  }
  return out;
}

std::vector<Formula> literals(int propositions) {
  std::vector<Formula> out{Formula::top(), Formula::bottom()};
  for (const auto& p : proposition_names(propositions)) {
    out.push_back(Formula::prop(p));
    out.push_back(Formula::neg_prop(p));
  }
  return out;
}

}  // namespace

std::vector<Formula> enumerate_formulas(const FormulaBounds& bounds, const std::function<bool(const Formula&)>& keep) {
  const std::size_t max = bounds.max_size;
  auto ok = [&](const Formula& f) { return f.size() <= max && (!keep || keep(f)); };
  const auto coalitions = all_coalitions(bounds.agents);
  // state[n] and path[n]: formulas of size n; path formulas contain a temporal operator
  std::vector<std::vector<Formula>> state(max + 1), path(max + 1);
  for (const auto& l : literals(bounds.propositions)) {
    if (ok(l)) state[1].push_back(l);
  }
  auto add = [&](std::vector<Formula>& bucket, Formula f) {
    if (ok(f)) bucket.push_back(std::move(f));
  };
  for (std::size_t n = 2; n <= max; ++n) {
    // temporal operators over state formulas
    for (const auto& s : state[n - 1]) {
      add(path[n], Formula::next(s));
      add(path[n], Formula::always(s));
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      for (const auto& a : state[i]) {
        for (const auto& b : state[n - 1 - i]) add(path[n], Formula::until(a, b));
      }
    }
    // boolean connectives; operands in increasing text order
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const std::size_t j = n - 1 - i;
      auto combine = [&](const std::vector<Formula>& lhs, const std::vector<Formula>& rhs, std::vector<Formula>& bucket) {
        for (const auto& a : lhs) {
          for (const auto& b : rhs) {
            if (!(a < b)) continue;
            add(bucket, Formula::conj(a, b));
            add(bucket, Formula::disj(a, b));
          }
        }
      };
      combine(state[i], state[j], state[n]);
      combine(path[i], path[j], path[n]);
      combine(path[i], state[j], path[n]);
      combine(state[i], path[j], path[n]);
    }
    // strategic quantifiers over path formulas, and over literals
    for (const auto& c : coalitions) {
      for (bool existential : {true, false}) {
        for (const auto& body : path[n - 1]) add(state[n], Formula::quantified(existential, c, body));
        if (n == 2) {
          for (const auto& l : state[1]) add(state[n], Formula::quantified(existential, c, l));
        }
      }
    }
  }
  std::vector<Formula> out;
  for (std::size_t n = 1; n <= max; ++n) out.insert(out.end(), state[n].begin(), state[n].end());
  return out;
}

namespace {

class RandomFormulas {
 public:
  RandomFormulas(std::mt19937_64& rng, const FormulaBounds& bounds)
      : rng_(rng), props_(proposition_names(bounds.propositions)), coalitions_(all_coalitions(bounds.agents)) {}

  Formula state(std::size_t budget) {
    if (budget <= 1) return literal();
    if (budget == 2) return pick(4) == 0 ? quantifier(literal()) : literal();
    switch (pick(5)) {
      case 0:
      case 1:
      case 2: return quantifier(path(budget - 1));
      default: {
        const std::size_t left = 1 + pick(budget - 2);
        Formula a = state(left);
        Formula b = state(budget - 1 - a.size());
        return pick(2) ? Formula::conj(a, b) : Formula::disj(a, b);
      }
    }
  }

  Formula path(std::size_t budget) {
    if (budget <= 2) return pick(2) ? Formula::next(literal()) : Formula::always(literal());
    const std::size_t choice = budget >= 4 ? pick(5) : pick(3);
    switch (choice) {
      case 0: return Formula::next(state(budget - 1));
      case 1: return Formula::always(state(budget - 1));
      case 2: {
        const std::size_t left = 1 + pick(budget - 2);
        Formula a = state(left);
        return Formula::until(a, state(budget - 1 - a.size()));
      }
      default: {
        const std::size_t left = 2 + pick(budget - 3);
        Formula a = path(left);
        const std::size_t rest = budget - 1 - a.size();
        Formula b = rest >= 2 && pick(2) ? path(rest) : state(rest);
        return choice == 3 ? Formula::conj(a, b) : Formula::disj(a, b);
      }
    }
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  Formula literal() {
    const std::size_t i = pick(2 * props_.size() + 1);
    if (i == 2 * props_.size()) return Formula::top();
    return i % 2 ? Formula::neg_prop(props_[i / 2]) : Formula::prop(props_[i / 2]);
  }

  Formula quantifier(Formula body) {
    return Formula::quantified(pick(2) == 0, coalitions_[pick(coalitions_.size())], std::move(body));
  }

  std::mt19937_64& rng_;
  std::vector<std::string> props_;
  std::vector<Coalition> coalitions_;
};

}  // namespace

Formula random_formula(std::mt19937_64& rng, const FormulaBounds& bounds, std::size_t size) {
  if (size < 1) throw std::invalid_argument("formula size must be positive");
  RandomFormulas gen(rng, bounds);
  return gen.state(size);
}

}  // namespace atlplus

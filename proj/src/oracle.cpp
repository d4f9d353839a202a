#include "atlplus/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace atlplus {

namespace {

// All index tuples over the given radices, last position fastest.
std::vector<std::vector<std::size_t>> tuples(const std::vector<std::size_t>& radices) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> current(radices.size(), 0);
  while (true) {
    out.push_back(current);
    std::size_t pos = radices.size();
    while (pos > 0) {
      --pos;
      if (++current[pos] < radices[pos]) break;
      current[pos] = 0;
      if (pos == 0) return out;
    }
    if (radices.empty()) return out;
  }
}

}  // namespace

MoveTable move_table(const ExplicitCGM& model, const Coalition& coalition) {
  const int k = model.agent_count();
  for (AgentId a : coalition.members()) {
    if (a < 1 || a > k) throw OracleError("unknown agent " + std::to_string(a) + " in coalition");
  }
  std::vector<AgentId> members, others;
  for (AgentId a = 1; a <= k; ++a) (coalition.contains(a) ? members : others).push_back(a);

  MoveTable table;
  table.successors.resize(model.state_count());
  for (std::size_t s = 0; s < model.state_count(); ++s) {
    std::vector<std::size_t> mine, theirs;
    for (AgentId a : members) mine.push_back(model.actions_at(s, a).size());
    for (AgentId a : others) theirs.push_back(model.actions_at(s, a).size());
    const auto answers = tuples(theirs);
    std::vector<std::size_t> global(k);
    for (const auto& move : tuples(mine)) {
      std::vector<std::size_t> row;
      for (std::size_t i = 0; i < members.size(); ++i) global[members[i] - 1] = move[i];
      for (const auto& answer : answers) {
        for (std::size_t i = 0; i < others.size(); ++i) global[others[i] - 1] = answer[i];
        row.push_back(model.successor(s, global));
      }
      table.successors[s].push_back(std::move(row));
    }
  }
  return table;
}

namespace {

// Can the protagonist force the next state into `target` from state s?
bool controllable(const MoveTable& table, std::size_t s, bool existential, const Truth& target) {
  const auto& moves = table.successors[s];
  if (existential) {
    return std::any_of(moves.begin(), moves.end(), [&](const auto& row) {
      return std::all_of(row.begin(), row.end(), [&](std::size_t t) { return target[t]; });
    });
  }
  return std::all_of(moves.begin(), moves.end(), [&](const auto& row) {
    return std::any_of(row.begin(), row.end(), [&](std::size_t t) { return target[t]; });
  });
}

}  // namespace

Truth eval_vanilla(const ExplicitCGM& model, bool existential, const Coalition& coalition, Shape shape,
                   const Truth& lhs, const Truth& rhs) {
  const std::size_t n = model.state_count();
  const MoveTable table = move_table(model, coalition);
  Truth result(n, false);
  switch (shape) {
    case Shape::Next:
      for (std::size_t s = 0; s < n; ++s) result[s] = controllable(table, s, existential, lhs);
      return result;
    case Shape::Always: {
      result = lhs;
      for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t s = 0; s < n; ++s) {
          if (result[s] && !controllable(table, s, existential, result)) {
            result[s] = false;
            changed = true;
          }
        }
      }
      return result;
    }
    case Shape::Until: {
      result = rhs;
      for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t s = 0; s < n; ++s) {
          if (!result[s] && lhs[s] && controllable(table, s, existential, result)) {
            result[s] = true;
            changed = true;
          }
        }
      }
      return result;
    }
  }
  return result;
}

namespace {

enum class AtomKind { State, Next, Always, Until };

struct Atom {
  AtomKind kind;
  Truth first;   // state value, X/G argument, or U left side
  Truth second;  // U right side
};

struct Term {
  enum Kind { Leaf, Not, And, Or } kind;
  int atom = -1;
  int left = -1;
  int right = -1;
};

constexpr std::uint8_t kOpen = 0;
constexpr std::uint8_t kHolds = 1;
constexpr std::uint8_t kFails = 2;

class Objective {
 public:
  Objective(const ExplicitCGM& model, const Formula& body, const OracleOptions& options) {
    root_ = build(model, body, options);
  }

  std::size_t atom_count() const { return atoms_.size(); }

  std::uint8_t initial(std::size_t atom, std::size_t s) const {
    const Atom& a = atoms_[atom];
    switch (a.kind) {
      case AtomKind::State: return a.first[s] ? kHolds : kFails;
      case AtomKind::Next: return kOpen;
      case AtomKind::Always: return a.first[s] ? kOpen : kFails;
      case AtomKind::Until: return a.second[s] ? kHolds : a.first[s] ? kOpen : kFails;
    }
    return kOpen;
  }

  // Status after moving to state t; only called for open atoms.
  std::uint8_t step(std::size_t atom, std::size_t t) const {
    const Atom& a = atoms_[atom];
    switch (a.kind) {
      case AtomKind::Next: return a.first[t] ? kHolds : kFails;
      case AtomKind::Always: return a.first[t] ? kOpen : kFails;
      case AtomKind::Until: return a.second[t] ? kHolds : a.first[t] ? kOpen : kFails;
      case AtomKind::State: return kOpen;
    }
    return kOpen;
  }

  // Value of the body on a play whose statuses never change again.
  bool limit(const std::vector<std::uint8_t>& status) const { return eval(root_, status); }

 private:
  int add_atom(AtomKind kind, Truth first, Truth second = {}) {
    atoms_.push_back({kind, std::move(first), std::move(second)});
    terms_.push_back({Term::Leaf, static_cast<int>(atoms_.size() - 1)});
    return static_cast<int>(terms_.size() - 1);
  }

  int add_term(Term::Kind kind, int left, int right = -1) {
    terms_.push_back({kind, -1, left, right});
    return static_cast<int>(terms_.size() - 1);
  }

  int build(const ExplicitCGM& model, const Formula& f, const OracleOptions& options) {
    if (f.is_state()) return add_atom(AtomKind::State, eval_all(model, f, options));
    switch (f.op()) {
      case Op::Not: return add_term(Term::Not, build(model, f.lhs(), options));
      case Op::And: {
        const int l = build(model, f.lhs(), options);
        return add_term(Term::And, l, build(model, f.rhs(), options));
      }
      case Op::Or: {
        const int l = build(model, f.lhs(), options);
        return add_term(Term::Or, l, build(model, f.rhs(), options));
      }
      case Op::Next: return add_atom(AtomKind::Next, eval_all(model, f.lhs(), options));
      case Op::Always: return add_atom(AtomKind::Always, eval_all(model, f.lhs(), options));
      case Op::Until:
        return add_atom(AtomKind::Until, eval_all(model, f.lhs(), options), eval_all(model, f.rhs(), options));
      case Op::Release: {
        // a R b  ==  ~(~a U ~b)
        Truth a = eval_all(model, f.lhs(), options);
        Truth b = eval_all(model, f.rhs(), options);
        a.flip();
        b.flip();
        return add_term(Term::Not, add_atom(AtomKind::Until, std::move(a), std::move(b)));
      }
      default: throw OracleError("not an ATL+ path formula: " + f.text());
    }
  }

  bool eval(int term, const std::vector<std::uint8_t>& status) const {
    const Term& t = terms_[term];
    switch (t.kind) {
      case Term::Leaf: {
        const std::uint8_t st = status[t.atom];
        if (st != kOpen) return st == kHolds;
        return atoms_[t.atom].kind == AtomKind::Always;
      }
      case Term::Not: return !eval(t.left, status);
      case Term::And: return eval(t.left, status) && eval(t.right, status);
      case Term::Or: return eval(t.left, status) || eval(t.right, status);
    }
    return false;
  }

  std::vector<Atom> atoms_;
  std::vector<Term> terms_;
  int root_ = -1;
};

}  // namespace

Truth eval_game(const ExplicitCGM& model, bool existential, const Coalition& coalition, const Formula& body,
                const OracleOptions& options) {
  const Objective objective(model, body, options);
  const MoveTable table = move_table(model, coalition);
  const std::size_t n = model.state_count();
  const std::size_t atoms = objective.atom_count();

  // Status vectors are packed base 3.
  auto pack = [&](const std::vector<std::uint8_t>& st) {
    std::uint64_t code = 0;
    for (std::size_t i = atoms; i > 0; --i) code = code * 3 + st[i - 1];
    return code;
  };
  auto unpack = [&](std::uint64_t code) {
    std::vector<std::uint8_t> st(atoms);
    for (std::size_t i = 0; i < atoms; ++i) {
      st[i] = static_cast<std::uint8_t>(code % 3);
      code /= 3;
    }
    return st;
  };

  struct Node {
    std::size_t state;
    std::uint64_t code;
    int resolved;
    std::vector<std::vector<std::size_t>> next;  // [move][answer] -> node
  };
  std::vector<Node> nodes;
  std::unordered_map<std::uint64_t, std::size_t> index;  // code * n + state
  auto intern = [&](std::size_t state, const std::vector<std::uint8_t>& st) {
    const std::uint64_t code = pack(st);
    const std::uint64_t key = code * n + state;
    auto [it, inserted] = index.emplace(key, nodes.size());
    if (inserted) {
      if (nodes.size() >= options.max_product_nodes) throw OracleError("product game exceeds the size cap");
      const int resolved = static_cast<int>(std::count_if(st.begin(), st.end(), [](auto v) { return v != kOpen; }));
      nodes.push_back({state, code, resolved, {}});
    }
    return it->second;
  };

  std::vector<std::size_t> roots(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::uint8_t> st(atoms);
    for (std::size_t i = 0; i < atoms; ++i) st[i] = objective.initial(i, s);
    roots[s] = intern(s, st);
  }
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    const std::vector<std::uint8_t> st = unpack(nodes[v].code);
    std::vector<std::vector<std::size_t>> next;
    for (const auto& row : table.successors[nodes[v].state]) {
      std::vector<std::size_t> out;
      for (std::size_t t : row) {
        std::vector<std::uint8_t> moved = st;
        for (std::size_t i = 0; i < atoms; ++i) {
          if (moved[i] == kOpen) moved[i] = objective.step(i, t);
        }
        out.push_back(intern(t, moved));
      }
      next.push_back(std::move(out));
    }
    nodes[v].next = std::move(next);
  }

  // Statuses only ever become resolved, so solving vectors from most to least
  // resolved leaves every edge out of the current vector already decided.
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t v = 0; v < order.size(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (nodes[a].resolved != nodes[b].resolved) return nodes[a].resolved > nodes[b].resolved;
    return nodes[a].code < nodes[b].code;
  });

  std::vector<bool> win(nodes.size(), false);
  std::vector<bool> solved(nodes.size(), false);
  std::vector<bool> member(nodes.size(), false);
  auto forces = [&](std::size_t v) {
    auto good = [&](std::size_t w) { return solved[w] ? win[w] : member[w] && win[w]; };
    const auto& moves = nodes[v].next;
    if (existential) {
      return std::any_of(moves.begin(), moves.end(),
                         [&](const auto& row) { return std::all_of(row.begin(), row.end(), good); });
    }
    return std::all_of(moves.begin(), moves.end(),
                       [&](const auto& row) { return std::any_of(row.begin(), row.end(), good); });
  };

  for (std::size_t begin = 0; begin < order.size();) {
    std::size_t end = begin;
    while (end < order.size() && nodes[order[end]].code == nodes[order[begin]].code) ++end;
    const bool stays_true = objective.limit(unpack(nodes[order[begin]].code));
    for (std::size_t i = begin; i < end; ++i) {
      member[order[i]] = true;
      win[order[i]] = stays_true;
    }
    // Greatest fixpoint if staying here forever wins, least fixpoint otherwise.
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t v = order[i];
        const bool value = forces(v);
        if (value != win[v]) {
          win[v] = value;
          changed = true;
        }
      }
    }
    for (std::size_t i = begin; i < end; ++i) {
      member[order[i]] = false;
      solved[order[i]] = true;
    }
    begin = end;
  }

  Truth result(n);
  for (std::size_t s = 0; s < n; ++s) result[s] = win[roots[s]];
  return result;
}

Truth eval_all(const ExplicitCGM& model, const Formula& f, const OracleOptions& options) {
  const std::size_t n = model.state_count();
  Truth result(n, false);
  switch (f.op()) {
    case Op::True: result.assign(n, true); return result;
    case Op::False: return result;
    case Op::Prop:
    case Op::NegProp:
      for (std::size_t s = 0; s < n; ++s) result[s] = model.label(s, f.name()) == (f.op() == Op::Prop);
      return result;
    case Op::Not:
      result = eval_all(model, f.lhs(), options);
      result.flip();
      return result;
    case Op::And:
    case Op::Or: {
      if (!f.is_state()) break;
      const Truth l = eval_all(model, f.lhs(), options);
      const Truth r = eval_all(model, f.rhs(), options);
      for (std::size_t s = 0; s < n; ++s) result[s] = f.op() == Op::And ? (l[s] && r[s]) : (l[s] || r[s]);
      return result;
    }
    case Op::Exist:
    case Op::Univ: {
      const Formula& body = f.body();
      const bool existential = f.op() == Op::Exist;
      if (body.is_state()) return eval_all(model, body, options);
      if (!options.force_game) {
        const bool unary = body.op() == Op::Next || body.op() == Op::Always;
        if ((unary && body.lhs().is_state()) ||
            (body.op() == Op::Until && body.lhs().is_state() && body.rhs().is_state())) {
          const Truth l = eval_all(model, body.lhs(), options);
          if (body.op() == Op::Next) return eval_vanilla(model, existential, f.coalition(), Shape::Next, l);
          if (body.op() == Op::Always) return eval_vanilla(model, existential, f.coalition(), Shape::Always, l);
          return eval_vanilla(model, existential, f.coalition(), Shape::Until, l, eval_all(model, body.rhs(), options));
        }
      }
      return eval_game(model, existential, f.coalition(), body, options);
    }
    default: break;
  }
  throw OracleError("not an ATL+ state formula: " + f.text());
}

bool eval_state_formula(const ExplicitCGM& model, const StateKey& s, const Formula& f, const OracleOptions& options) {
  return eval_all(model, f, options)[model.state_index(s)];
}

}  // namespace atlplus

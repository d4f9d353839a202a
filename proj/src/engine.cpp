#include "atlplus/engine.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "atlplus/decomposition.hpp"
#include "atlplus/normal_form.hpp"
#include "atlplus/parser.hpp"

namespace atlplus {

Clause make_clause(std::vector<Assertion> assertions) {
  std::sort(assertions.begin(), assertions.end());
  assertions.erase(std::unique(assertions.begin(), assertions.end()), assertions.end());
  return assertions;
}

std::string to_string(const Assertion& a) { return a.state + " |- " + a.formula.text(); }

std::string to_string(const Clause& c) {
  std::string out = "{";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += to_string(c[i]);
  }
  return out + "}";
}

std::string to_string(Rule rule) {
  switch (rule) {
    case Rule::True: return "True";
    case Rule::False: return "False";
    case Rule::Alpha: return "Alpha";
    case Rule::Beta: return "Beta";
    case Rule::Gamma: return "Gamma";
    case Rule::Next: return "Next";
    case Rule::LeafTrue: return "Leaf-T";
    case Rule::LeafEmpty: return "Leaf-Empty";
    case Rule::Subsumed: return "Subsumed";
  }
  return "?";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::True: return "True";
    case Verdict::False: return "False";
    case Verdict::Pending: return "Pending";
  }
  return "?";
}

std::size_t ProofGraph::back_edge_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes) n += node.back_edges.size();
  return n;
}

namespace {

enum class Tag { Literal, Alpha, Beta, Successor, Gamma };

Tag tag_of(const Formula& f) {
  return std::visit(
      [](const auto& kind) {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, LiteralKind>) return Tag::Literal;
        else if constexpr (std::is_same_v<K, AlphaKind>) return Tag::Alpha;
        else if constexpr (std::is_same_v<K, BetaKind>) return Tag::Beta;
        else if constexpr (std::is_same_v<K, SuccessorKind>) return Tag::Successor;
        else return Tag::Gamma;
      },
      classify(f));
}

// Would a play that keeps `body` pending forever satisfy it?  Untils never
// fulfilled fail, always-formulas never violated hold.
bool good_body(const Formula& body) {
  switch (body.op()) {
    case Op::Always: return true;
    case Op::And: return good_body(body.lhs()) && good_body(body.rhs());
    case Op::Or: return good_body(body.lhs()) || good_body(body.rhs());
    default: return false;
  }
}

bool good_on_cycle(const Formula& f) {
  if (!f.is_quantified()) return false;
  const Formula& body = f.body();
  if (body.op() == Op::Next) {
    const Formula& inner = body.lhs();
    return inner.is_quantified() && good_body(inner.body());
  }
  return good_body(body);
}

// The strategic formula an assertion keeps alive around a loop: Q X Q' Psi
// continues Q' Psi.
Formula core(const Formula& f) {
  if (f.is_quantified() && f.body().op() == Op::Next && f.body().lhs().is_quantified()) return f.body().lhs();
  return f;
}

std::vector<Formula> outputs(const Formula& g) {
  std::vector<Formula> out;
  std::visit(
      [&](const auto& kind) {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, AlphaKind> || std::is_same_v<K, BetaKind>) {
          out = {kind.left, kind.right};
        } else if constexpr (std::is_same_v<K, SuccessorKind>) {
          out = {kind.successor};
        } else if constexpr (std::is_same_v<K, GammaKind>) {
          for (const auto& clause : analyze(g).clauses) out.insert(out.end(), clause.begin(), clause.end());
        }
      },
      classify(g));
  return out;
}

template <class IsStatic, class LastUse>
std::optional<std::size_t> round_robin(std::size_t n, IsStatic is_static, LastUse last_use) {
  std::optional<std::size_t> best;
  long best_last = std::numeric_limits<long>::max();
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_static(i)) continue;
    const long last = last_use(i);
    if (last < best_last) {
      best = i;
      best_last = last;
    }
  }
  return best;
}

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  Bits& operator|=(const Bits& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }

 private:
  std::vector<std::uint64_t> words_;
};

constexpr std::size_t kNoLow = std::numeric_limits<std::size_t>::max();

struct Item {
  std::uint32_t state;
  Formula formula;
  bool operator==(const Item& o) const { return state == o.state && formula == o.formula; }
};

struct ItemHash {
  std::size_t operator()(const Item& i) const noexcept { return i.formula.hash() * 31 + i.state; }
};

using IClause = std::vector<Item>;

std::size_t clause_hash(const IClause& c) {
  std::size_t h = c.size();
  for (const auto& i : c) h = h * 1000003U ^ ItemHash{}(i);
  return h;
}

struct ClauseHash {
  std::size_t operator()(const IClause& c) const noexcept { return clause_hash(c); }
};

// A clause produced by a rule, with the positions in the premise each of its
// assertions descends from.
struct Child {
  IClause clause;
  std::vector<std::vector<std::uint32_t>> parents;
  bool operator==(const Child&) const = default;
};

struct ChildHash {
  std::size_t operator()(const Child& c) const noexcept {
    std::size_t h = clause_hash(c.clause);
    for (const auto& ps : c.parents) {
      for (auto p : ps) h = h * 131 + p;
      h = h * 7 + 1;
    }
    return h;
  }
};

struct Frame {
  IClause clause;
  std::vector<std::vector<std::uint32_t>> parents;
  std::size_t node = 0;
  std::optional<Item> principal;
};

struct Outcome {
  bool ok;
  std::size_t low;
};

class Run {
 public:
  Run(const ModelProvider& provider, const CheckOptions& options) : provider_(provider), options_(options) {}

  CheckResult execute(const StateKey& state, const Formula& formula);

  std::uint32_t intern(const StateKey& name) {
    auto [it, inserted] = ids_.emplace(name, static_cast<std::uint32_t>(names_.size()));
    if (inserted) {
      names_.push_back(name);
      labels_.emplace_back();
    }
    return it->second;
  }

  IClause to_internal(const Clause& c) {
    IClause out;
    for (const auto& a : c) {
      if (!provider_.has_state(a.state)) throw ModelError("unknown state '" + a.state + "'");
      out.push_back({intern(a.state), a.formula});
    }
    sort_clause(out);
    return out;
  }

  Clause to_public(const IClause& c) const {
    Clause out;
    out.reserve(c.size());
    for (const auto& i : c) out.push_back({names_[i.state], i.formula});
    return out;
  }

  std::vector<Child> all_next_children(const IClause& c) {
    return next_children(c);
  }

 private:
  bool less(const Item& a, const Item& b) const {
    if (a.state != b.state) return names_[a.state] < names_[b.state];
    return a.formula < b.formula;
  }

  void sort_clause(IClause& c) const {
    std::sort(c.begin(), c.end(), [this](const Item& a, const Item& b) { return less(a, b); });
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }

  Child assemble(std::vector<std::pair<Item, std::uint32_t>>& parts) const {
    std::sort(parts.begin(), parts.end(), [this](const auto& x, const auto& y) {
      if (less(x.first, y.first)) return true;
      if (less(y.first, x.first)) return false;
      return x.second < y.second;
    });
    Child out;
    for (auto& [item, parent] : parts) {
      if (!out.clause.empty() && out.clause.back() == item) {
        if (out.parents.back().back() != parent) out.parents.back().push_back(parent);
      } else {
        out.clause.push_back(std::move(item));
        out.parents.push_back({parent});
      }
    }
    return out;
  }

  Tag tag(const Formula& f) {
    auto it = tags_.find(f);
    if (it != tags_.end()) return it->second;
    return tags_.emplace(f, tag_of(f)).first->second;
  }

  const GammaAnalysis& analysis(const Formula& theta) {
    auto it = analyses_.find(theta);
    if (it != analyses_.end()) return it->second;
    return analyses_.emplace(theta, analyze(theta, options_.subsumption)).first->second;
  }

  bool literal_holds(const Item& item) {
    const Formula& f = item.formula;
    switch (f.op()) {
      case Op::True: return true;
      case Op::False: return false;
      default: break;
    }
    auto& labels = labels_[item.state];
    if (!labels) {
      auto l = provider_.labeling(names_[item.state]);
      std::sort(l.begin(), l.end());
      labels = std::move(l);
    }
    const bool in = std::binary_search(labels->begin(), labels->end(), f.name());
    return f.op() == Op::Prop ? in : !in;
  }

  // For each move of the coalition at the state, the successor states it allows.
  const std::vector<std::vector<std::uint32_t>>& successors(std::uint32_t state, const Coalition& coalition) {
    auto key = std::make_pair(state, coalition);
    auto it = successors_.find(key);
    if (it != successors_.end()) return it->second;
    const StateKey name = names_[state];
    const int k = provider_.agent_count();
    const auto answers = coalition_moves(provider_, name, complement(coalition, k));
    std::vector<std::vector<std::uint32_t>> groups;
    for (const auto& move : coalition_moves(provider_, name, coalition)) {
      std::vector<std::uint32_t> group;
      for (const auto& answer : answers) {
        const std::uint32_t target = intern(provider_.out(name, merge(move, answer)));
        if (std::find(group.begin(), group.end(), target) == group.end()) group.push_back(target);
      }
      groups.push_back(std::move(group));
    }
    return successors_.emplace(key, std::move(groups)).first->second;
  }

  // Keeps only the parent links a good cycle can use.
  void normalize(Child& c, const IClause& premise) const {
    for (std::size_t i = 0; i < c.clause.size(); ++i) {
      const Formula family = core(c.clause[i].formula);
      auto& ps = c.parents[i];
      if (!open_.count(family)) {
        ps.clear();
        continue;
      }
      ps.erase(std::remove_if(ps.begin(), ps.end(), [&](std::uint32_t p) { return core(premise[p].formula) != family; }),
               ps.end());
    }
  }

  Child join(const Child& a, const Child& b) const {
    Child out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.clause.size() || j < b.clause.size()) {
      if (j == b.clause.size() || (i < a.clause.size() && less(a.clause[i], b.clause[j]))) {
        out.clause.push_back(a.clause[i]);
        out.parents.push_back(a.parents[i++]);
      } else if (i == a.clause.size() || less(b.clause[j], a.clause[i])) {
        out.clause.push_back(b.clause[j]);
        out.parents.push_back(b.parents[j++]);
      } else {
        std::vector<std::uint32_t> ps;
        std::set_union(a.parents[i].begin(), a.parents[i].end(), b.parents[j].begin(), b.parents[j].end(),
                       std::back_inserter(ps));
        out.clause.push_back(a.clause[i++]);
        out.parents.push_back(std::move(ps));
        ++j;
      }
    }
    return out;
  }

  // Every assertion of `a` occurs in `b`, descending from at least the same premises.
  bool dominates(const Child& a, const Child& b, bool traced) const {
    std::size_t j = 0;
    for (std::size_t i = 0; i < a.clause.size(); ++i) {
      while (j < b.clause.size() && less(b.clause[j], a.clause[i])) ++j;
      if (j == b.clause.size() || !(b.clause[j] == a.clause[i])) return false;
      if (traced && !std::includes(b.parents[j].begin(), b.parents[j].end(), a.parents[i].begin(), a.parents[i].end())) {
        return false;
      }
      ++j;
    }
    return true;
  }

  // Keeps the first of equal candidates and drops every candidate another one dominates.
  std::vector<Child> minimal(std::vector<Child> candidates, bool traced) const {
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return candidates[x].clause.size() < candidates[y].clause.size();
    });
    std::vector<std::size_t> kept;
    for (auto x : order) {
      bool covered = false;
      for (auto y : kept) {
        if (dominates(candidates[y], candidates[x], traced)) {
          covered = true;
          break;
        }
      }
      if (!covered) kept.push_back(x);
    }
    std::sort(kept.begin(), kept.end());
    std::vector<Child> out;
    out.reserve(kept.size());
    for (auto x : kept) out.push_back(std::move(candidates[x]));
    return out;
  }

  // CNF of the Next rule's pre-expansion, one child per minimal clause.
  std::vector<Child> next_children(const IClause& premise) {
    const bool traced = options_.cycle_rule == CycleRule::Trace;
    std::vector<std::vector<Child>> factors;
    for (std::uint32_t i = 0; i < premise.size(); ++i) {
      const Formula& f = premise[i].formula;
      const Formula& successor = f.body().lhs();
      const auto& groups = successors(premise[i].state, f.coalition());
      auto single = [&](const std::vector<std::uint32_t>& states) {
        std::vector<std::pair<Item, std::uint32_t>> parts;
        for (auto t : states) parts.push_back({{t, successor}, i});
        Child c = assemble(parts);
        normalize(c, premise);
        return c;
      };
      if (f.is_existential()) {
        for (const auto& group : groups) {
          std::vector<Child> choice;
          for (auto t : group) choice.push_back(single({t}));
          factors.push_back(std::move(choice));
        }
      } else {
        std::vector<Child> all;
        for (const auto& group : groups) all.push_back(single(group));
        factors.push_back(std::move(all));
      }
    }
    std::vector<Child> acc{Child{}};
    for (const auto& factor : factors) {
      std::vector<Child> product;
      product.reserve(acc.size() * factor.size());
      for (const auto& a : acc) {
        for (const auto& d : factor) product.push_back(join(a, d));
      }
      acc = minimal(std::move(product), traced);
    }
    // Small clauses first: they are the likeliest to fail, and cheapest to settle.
    std::stable_sort(acc.begin(), acc.end(),
                     [](const Child& a, const Child& b) { return a.clause.size() < b.clause.size(); });
    return acc;
  }

  std::size_t make_node(std::size_t parent, const IClause& clause, Rule rule) {
    ++nodes_;
    if (nodes_ > options_.node_budget) throw BudgetExceeded(options_.node_budget);
    if (!graph_) return 0;
    ProofNode node;
    node.id = graph_->nodes.size() + 1;
    node.clause = to_public(clause);
    node.rule = rule;
    graph_->nodes.push_back(std::move(node));
    if (parent) graph_->nodes[parent - 1].children.push_back(graph_->nodes.size());
    return graph_->nodes.size();
  }

  void set_rule(std::size_t node, Rule rule, const Item* principal) {
    if (!graph_ || !node) return;
    auto& n = graph_->nodes[node - 1];
    n.rule = rule;
    if (principal) n.principal = Assertion{names_[principal->state], principal->formula};
  }

  void set_verdict(std::size_t node, bool ok) {
    if (graph_ && node) graph_->nodes[node - 1].verdict = ok ? Verdict::True : Verdict::False;
  }

  void record_failure(std::size_t depth, bool empty_leaf, std::optional<std::size_t> entry) {
    if (witness_) return;
    FailureWitness w;
    for (std::size_t d = 0; d <= depth; ++d) w.path.push_back(to_public(path_[d].clause));
    if (empty_leaf) w.path.emplace_back();
    w.ends_in_empty_clause = empty_leaf;
    w.entry = entry;
    witness_ = std::move(w);
  }

  void check_clause(const IClause& clause) {
    for (const auto& item : clause) {
      if (!closure_.count(item.formula)) {
        throw InvariantViolation("formula outside the closure: " + item.formula.text());
      }
    }
    for (std::size_t i = 1; i < clause.size(); ++i) {
      if (!less(clause[i - 1], clause[i])) throw InvariantViolation("clause not in canonical order");
    }
  }

  bool trace_success(std::size_t entry_depth, std::size_t depth, const Child& closing) const {
    const IClause& entry = path_[entry_depth].clause;
    // Every assertion of a closed family descends from one of the same family,
    // so following parents back around the loop must close a cycle.
    for (const auto& item : entry) {
      if (good_on_cycle(item.formula) && !open_.count(core(item.formula))) return true;
    }
    const std::size_t n = entry.size();
    std::vector<Bits> reach(n, Bits(n));
    for (std::size_t i = 0; i < n; ++i) reach[i].set(i);
    for (std::size_t d = entry_depth + 1; d <= depth; ++d) {
      const Frame& frame = path_[d];
      std::vector<Bits> next(frame.clause.size(), Bits(n));
      for (std::size_t a = 0; a < frame.clause.size(); ++a) {
        for (auto p : frame.parents[a]) next[a] |= reach[p];
      }
      reach = std::move(next);
    }
    // adjacency[a] holds b when the trace from entry[a] reaches entry[b] around the loop
    std::vector<Bits> adjacency(n, Bits(n));
    for (std::size_t b = 0; b < n; ++b) {
      Bits from(n);
      for (auto p : closing.parents[b]) from |= reach[p];
      for (std::size_t a = 0; a < n; ++a) {
        if (from.test(a)) adjacency[a].set(b);
      }
    }
    for (std::size_t m = 0; m < n; ++m) {
      for (std::size_t a = 0; a < n; ++a) {
        if (adjacency[a].test(m)) adjacency[a] |= adjacency[m];
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      if (adjacency[a].test(a) && good_on_cycle(entry[a].formula)) return true;
    }
    return false;
  }

  std::optional<std::size_t> on_path(const IClause& clause) const {
    auto [lo, hi] = on_path_.equal_range(clause_hash(clause));
    for (auto it = lo; it != hi; ++it) {
      if (path_[it->second].clause == clause) return it->second;
    }
    return std::nullopt;
  }

  void push_frame(Frame frame) {
    const std::size_t hash = clause_hash(frame.clause);
    path_.push_back(std::move(frame));
    on_path_.emplace(hash, path_.size() - 1);
  }

  void pop_frame() {
    const std::size_t depth = path_.size() - 1;
    for (auto [lo, hi] = on_path_.equal_range(clause_hash(path_.back().clause)); lo != hi; ++lo) {
      if (lo->second == depth) {
        on_path_.erase(lo);
        break;
      }
    }
    path_.pop_back();
  }

  // Judges the back-edge from path_[depth] to an earlier copy of `child`.
  bool close_cycle(std::size_t target, std::size_t depth, const Child& child) {
    ++back_edges_;
    CycleVerdict cycle;
    if (options_.cycle_rule == CycleRule::Trace) {
      cycle = trace_success(target, depth, child) ? CycleVerdict::Success : CycleVerdict::Failure;
    } else {
      cycle = classify_cycle(to_public(child.clause));
    }
    const std::size_t node = path_[depth].node;
    if (graph_ && node) graph_->nodes[node - 1].back_edges.push_back({path_[target].node, cycle});
    const bool ok = cycle == CycleVerdict::Success;
    if (!ok) record_failure(depth, false, target);
    return ok;
  }

  // A clause with successor assertions only, waiting for the Next rule.
  struct Pending {
    std::vector<Frame> chain;  // frames below the phase root, the last one holds the clause
    Child composed;            // the clause with parents taken in the phase root
    std::size_t rec;
  };

  enum Status { kHolds, kFails, kOpen };

  // The static rules applied below one clause, up to the clauses that need (Next).
  struct Phase {
    std::size_t root;
    std::vector<Pending> pending;
    std::vector<std::size_t> nodes;  // per record: proof node
    std::vector<std::size_t> up;     // per record: parent record
    std::vector<Status> status;
    Outcome outcome{true, kNoLow};

    std::size_t add(std::size_t node, std::size_t parent, Status s) {
      nodes.push_back(node);
      up.push_back(parent);
      status.push_back(s);
      return nodes.size() - 1;
    }
  };

  std::vector<std::vector<std::uint32_t>> compose(std::size_t from, std::size_t to) const {
    std::vector<std::vector<std::uint32_t>> rel(path_[from].clause.size());
    for (std::uint32_t i = 0; i < rel.size(); ++i) rel[i] = {i};
    for (std::size_t d = from + 1; d <= to; ++d) {
      const Frame& frame = path_[d];
      std::vector<std::vector<std::uint32_t>> next(frame.clause.size());
      for (std::size_t a = 0; a < frame.clause.size(); ++a) {
        for (auto p : frame.parents[a]) next[a].insert(next[a].end(), rel[p].begin(), rel[p].end());
        std::sort(next[a].begin(), next[a].end());
        next[a].erase(std::unique(next[a].begin(), next[a].end()), next[a].end());
      }
      rel = std::move(next);
    }
    return rel;
  }

  bool fail(Phase& ph) {
    ph.outcome.ok = false;
    return !options_.early_abort;
  }

  bool static_descend(Phase& ph, std::size_t depth, std::size_t rec, Child child) {
    normalize(child, path_[depth].clause);
    if (child.clause.empty()) {
      const std::size_t leaf = make_node(path_[depth].node, child.clause, Rule::LeafEmpty);
      set_verdict(leaf, false);
      ph.add(leaf, rec, kFails);
      record_failure(depth, true, std::nullopt);
      return fail(ph);
    }
    if (auto target = on_path(child.clause)) {
      ph.outcome.low = std::min(ph.outcome.low, *target);
      if (close_cycle(*target, depth, child)) return true;
      ph.status[rec] = kFails;
      return fail(ph);
    }
    if (options_.check_invariants) check_clause(child.clause);
    const std::size_t node = make_node(path_[depth].node, child.clause, Rule::Gamma);
    if (use_memo_) {
      if (known_true(child.clause)) {
        distinct_.insert(child.clause);
        return true;
      }
      trail_.push_back(child.clause);
    }
    push_frame(Frame{std::move(child.clause), std::move(child.parents), node, std::nullopt});
    const bool go = expand_static(ph, depth + 1, ph.add(node, rec, kHolds));
    pop_frame();
    return go;
  }

  // Literals, and with memoization strategic formulas smaller than the root,
  // whose truth is settled outside the clause by a separate run.
  bool decided(const Item& item) {
    if (tag(item.formula) == Tag::Literal) return true;
    return use_memo_ && item.formula.is_quantified() && item.formula.size() < root_size_;
  }

  bool decided_value(const Item& item) {
    if (tag(item.formula) == Tag::Literal) return literal_holds(item);
    const auto key = std::make_pair(names_[item.state], item.formula);
    if (auto it = lemmas_->find(key); it != lemmas_->end()) return it->second;
    CheckOptions sub_options = options_;
    sub_options.node_budget = options_.node_budget - std::min(options_.node_budget, nodes_);
    Run sub(provider_, sub_options);
    sub.lemmas_ = lemmas_;
    CheckResult r;
    try {
      r = sub.execute(names_[item.state], item.formula);
    } catch (const BudgetExceeded&) {
      throw BudgetExceeded(options_.node_budget);
    }
    nodes_ += r.nodes_expanded;
    back_edges_ += r.back_edges;
    nested_distinct_ += r.distinct_clauses;
    for (const auto& name : sub.names_) intern(name);
    lemmas_->emplace(key, r.verdict);
    return r.verdict;
  }

  // Applies (True), (False), alpha, beta and gamma below path_[depth] until
  // every open clause consists of successor assertions.  Returns false when a
  // failure ends the search.
  bool expand_static(Phase& ph, std::size_t depth, std::size_t rec) {
    max_depth_ = std::max(max_depth_, depth);
    Frame& frame = path_[depth];
    const IClause& clause = frame.clause;
    const std::size_t node = frame.node;
    distinct_.insert(clause);

    bool any_true = false;
    bool any_false = false;
    for (const auto& item : clause) {
      if (!decided(item)) continue;
      if (decided_value(item)) {
        any_true = true;
        break;
      }
      any_false = true;
    }
    if (any_true) {
      set_rule(node, Rule::True, nullptr);
      const std::size_t leaf = make_node(node, {}, Rule::LeafTrue);
      set_verdict(leaf, true);
      ph.add(leaf, rec, kHolds);
      return true;
    }
    if (any_false) {
      set_rule(node, Rule::False, nullptr);
      std::vector<std::pair<Item, std::uint32_t>> parts;
      for (std::uint32_t i = 0; i < clause.size(); ++i) {
        if (!decided(clause[i])) parts.push_back({clause[i], i});
      }
      return static_descend(ph, depth, rec, assemble(parts));
    }

    const auto principal = round_robin(
        clause.size(),
        [&](std::size_t i) {
          const Tag t = tag(clause[i].formula);
          return t == Tag::Alpha || t == Tag::Beta || t == Tag::Gamma;
        },
        [&](std::size_t i) {
          auto it = last_principal_.find(clause[i]);
          return it == last_principal_.end() ? -1L : it->second;
        });

    if (!principal) {
      set_rule(node, Rule::Next, nullptr);
      Pending p;
      p.chain.assign(path_.begin() + static_cast<std::ptrdiff_t>(ph.root + 1),
                     path_.begin() + static_cast<std::ptrdiff_t>(depth + 1));
      p.composed = Child{clause, compose(ph.root, depth)};
      p.rec = rec;
      ph.status[rec] = kOpen;
      ph.pending.push_back(std::move(p));
      return true;
    }

    const Item chosen = clause[*principal];
    frame.principal = chosen;
    const std::uint32_t pidx = static_cast<std::uint32_t>(*principal);
    std::vector<std::pair<Item, std::uint32_t>> context;
    for (std::uint32_t i = 0; i < clause.size(); ++i) {
      if (i != pidx) context.push_back({clause[i], i});
    }
    auto with = [&](const std::vector<Formula>& added) {
      auto parts = context;
      for (const auto& f : added) parts.push_back({{chosen.state, f}, pidx});
      return assemble(parts);
    };

    const auto saved = remember(chosen, static_cast<long>(depth));
    bool go = true;
    switch (tag(chosen.formula)) {
      case Tag::Alpha:
        set_rule(node, Rule::Alpha, &chosen);
        go = static_descend(ph, depth, rec, with({chosen.formula.lhs()}));
        if (go) go = static_descend(ph, depth, rec, with({chosen.formula.rhs()}));
        break;
      case Tag::Beta:
        set_rule(node, Rule::Beta, &chosen);
        go = static_descend(ph, depth, rec, with({chosen.formula.lhs(), chosen.formula.rhs()}));
        break;
      default: {
        set_rule(node, Rule::Gamma, &chosen);
        const GammaAnalysis& an = analysis(chosen.formula);
        if (an.clauses.empty()) {
          const std::size_t leaf = make_node(node, {}, Rule::LeafTrue);
          set_verdict(leaf, true);
          ph.add(leaf, rec, kHolds);
          break;
        }
        for (const auto& delta : an.clauses) {
          if (!(go = static_descend(ph, depth, rec, with(delta)))) break;
        }
        break;
      }
    }
    forget(chosen, saved);
    return go;
  }

  long remember(const Item& item, long depth) {
    long previous = -2;
    if (auto it = last_principal_.find(item); it != last_principal_.end()) previous = it->second;
    last_principal_[item] = depth;
    return previous;
  }

  void forget(const Item& item, long previous) {
    if (previous == -2) last_principal_.erase(item);
    else last_principal_[item] = previous;
  }

  Outcome descend(std::size_t depth, Child child) {
    if (child.clause.empty()) {
      const std::size_t leaf = make_node(path_[depth].node, child.clause, Rule::LeafEmpty);
      set_verdict(leaf, false);
      record_failure(depth, true, std::nullopt);
      return {false, kNoLow};
    }
    if (auto target = on_path(child.clause)) return {close_cycle(*target, depth, child), *target};
    if (options_.check_invariants) check_clause(child.clause);
    const std::size_t node = make_node(path_[depth].node, child.clause, Rule::Gamma);
    push_frame(Frame{std::move(child.clause), std::move(child.parents), node, std::nullopt});
    const Outcome outcome = visit(depth + 1);
    pop_frame();
    return outcome;
  }

  // Runs (Next) on a pending clause, with its frames restored on the path.
  Outcome expand_pending(std::size_t root, const Pending& p) {
    for (const auto& frame : p.chain) push_frame(frame);
    std::vector<std::pair<Item, long>> saved;
    for (std::size_t d = root; d + 1 < path_.size(); ++d) {
      if (path_[d].principal) saved.emplace_back(*path_[d].principal, remember(*path_[d].principal, static_cast<long>(d)));
    }
    const std::size_t depth = path_.size() - 1;
    Outcome result{true, kNoLow};
    for (auto& child : next_children(path_[depth].clause)) {
      const Outcome o = descend(depth, std::move(child));
      result.low = std::min(result.low, o.low);
      if (!o.ok) {
        result.ok = false;
        if (options_.early_abort) break;
      }
    }
    for (auto it = saved.rbegin(); it != saved.rend(); ++it) forget(it->first, it->second);
    for (std::size_t i = 0; i < p.chain.size(); ++i) pop_frame();
    return result;
  }

  Outcome visit(std::size_t depth) {
    const std::size_t node = path_[depth].node;
    const std::size_t mark = trail_.size();
    if (use_memo_) {
      if (known_true(path_[depth].clause)) {
        distinct_.insert(path_[depth].clause);
        return {true, kNoLow};
      }
      trail_.push_back(path_[depth].clause);
    }

    Phase ph;
    ph.root = depth;
    ph.add(node, 0, kHolds);
    const bool go = expand_static(ph, depth, 0);

    // Open clauses that contain another open clause, with the same origins, follow from it.
    std::vector<std::size_t> cover(ph.pending.size());
    std::vector<std::size_t> order(ph.pending.size());
    for (std::size_t i = 0; i < order.size(); ++i) cover[i] = order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return ph.pending[x].composed.clause.size() < ph.pending[y].composed.clause.size();
    });
    const bool traced = options_.cycle_rule == CycleRule::Trace;
    std::vector<std::size_t> kept;
    for (auto x : order) {
      for (auto y : kept) {
        if (dominates(ph.pending[y].composed, ph.pending[x].composed, traced)) {
          cover[x] = y;
          break;
        }
      }
      if (cover[x] == x) kept.push_back(x);
    }

    if (go) {
      for (std::size_t i = 0; i < ph.pending.size(); ++i) {
        if (cover[i] != i) continue;
        const Outcome o = expand_pending(depth, ph.pending[i]);
        ph.status[ph.pending[i].rec] = o.ok ? kHolds : kFails;
        ph.outcome.low = std::min(ph.outcome.low, o.low);
        if (!o.ok) {
          ph.outcome.ok = false;
          if (options_.early_abort) break;
        }
      }
    }
    for (std::size_t i = 0; i < ph.pending.size(); ++i) {
      if (cover[i] == i) continue;
      const std::size_t rec = ph.pending[i].rec;
      ph.status[rec] = ph.status[ph.pending[cover[i]].rec];
      if (graph_ && ph.nodes[rec]) {
        auto& n = graph_->nodes[ph.nodes[rec] - 1];
        n.rule = Rule::Subsumed;
        n.subsumed_by = ph.nodes[ph.pending[cover[i]].rec];
      }
    }
    if (graph_) {
      std::vector<Status> summary = ph.status;
      for (std::size_t r = summary.size(); r-- > 1;) {
        Status& parent = summary[ph.up[r]];
        if (summary[r] == kFails) parent = kFails;
        else if (summary[r] == kOpen && parent != kFails) parent = kOpen;
      }
      for (std::size_t r = 0; r < summary.size(); ++r) {
        if (summary[r] != kOpen) set_verdict(ph.nodes[r], summary[r] == kHolds);
      }
    }
    if (use_memo_ && (ph.outcome.low == kNoLow || ph.outcome.low >= depth)) {
      // Nothing below reaches above this clause: the subproof stands alone, and
      // when it succeeds every clause in it is true.
      if (ph.outcome.ok) {
        for (std::size_t i = mark; i < trail_.size(); ++i) prove(trail_[i]);
      }
      trail_.resize(mark);
    }
    return ph.outcome;
  }

  bool known_true(const IClause& c) const {
    if (proved_.empty()) return false;
    auto cmp = [this](const Item& a, const Item& b) { return less(a, b); };
    for (const auto& item : c) {
      auto it = proved_index_.find(item);
      if (it == proved_index_.end()) continue;
      for (auto id : it->second) {
        const IClause& k = proved_[id];
        if (std::includes(c.begin(), c.end(), k.begin(), k.end(), cmp)) return true;
      }
    }
    return false;
  }

  void prove(const IClause& c) {
    if (known_true(c)) return;
    const auto id = static_cast<std::uint32_t>(proved_.size());
    proved_.push_back(c);
    for (const auto& item : c) proved_index_[item].push_back(id);
  }

  const ModelProvider& provider_;
  CheckOptions options_;
  bool use_memo_ = false;

  std::unordered_map<StateKey, std::uint32_t> ids_;
  std::vector<StateKey> names_;
  std::vector<std::optional<std::vector<std::string>>> labels_;
  std::map<std::pair<std::uint32_t, Coalition>, std::vector<std::vector<std::uint32_t>>> successors_;
  std::unordered_map<Formula, Tag, FormulaHash> tags_;
  std::unordered_map<Formula, GammaAnalysis, FormulaHash> analyses_;
  std::set<Formula> closure_;

  std::deque<Frame> path_;
  std::unordered_multimap<std::size_t, std::size_t> on_path_;
  std::unordered_map<Item, long, ItemHash> last_principal_;
  std::unordered_set<IClause, ClauseHash> distinct_;
  std::unordered_set<Formula, FormulaHash> open_;
  std::size_t root_size_ = 0;
  std::map<std::pair<StateKey, Formula>, bool> own_lemmas_;
  std::map<std::pair<StateKey, Formula>, bool>* lemmas_ = &own_lemmas_;
  std::size_t nested_distinct_ = 0;
  std::vector<IClause> trail_;
  std::vector<IClause> proved_;
  std::unordered_map<Item, std::vector<std::uint32_t>, ItemHash> proved_index_;

  std::optional<ProofGraph> graph_;
  std::optional<FailureWitness> witness_;
  std::size_t nodes_ = 0;
  std::size_t back_edges_ = 0;
  std::size_t max_depth_ = 0;
};

CheckResult Run::execute(const StateKey& state, const Formula& formula) {
  const auto start = std::chrono::steady_clock::now();
  if (!provider_.has_state(state)) throw ModelError("unknown state '" + state + "'");
  check_fragment(formula);
  const Formula root = to_nnf(formula);
  use_memo_ = options_.memoize && !options_.retain_proof;
  if (options_.retain_proof) graph_.emplace();
  if (options_.check_invariants) closure_ = closure(root);
  {
    // A good family is open when some formula other than the root can introduce it.
    const std::set<Formula> all = options_.check_invariants ? closure_ : closure(root);
    std::set<Formula> produced;
    std::vector<std::pair<Formula, std::vector<Formula>>> out;
    for (const auto& g : all) {
      out.emplace_back(g, outputs(g));
      produced.insert(out.back().second.begin(), out.back().second.end());
    }
    for (const auto& [g, hs] : out) {
      if (!produced.count(g)) continue;
      for (const auto& h : hs) {
        const Formula family = core(h);
        if (family != core(g) && good_on_cycle(family)) open_.insert(family);
      }
    }
  }
  root_size_ = root.size();

  push_frame(Frame{{Item{intern(state), root}}, {}, 0, std::nullopt});
  path_.back().node = make_node(0, path_.back().clause, Rule::Gamma);
  const Outcome outcome = visit(0);

  CheckResult result;
  result.verdict = outcome.ok;
  result.states_materialized = names_.size();
  result.nodes_expanded = nodes_;
  result.distinct_clauses = distinct_.size() + nested_distinct_;
  result.back_edges = back_edges_;
  result.max_depth = max_depth_;
  result.closure_size = closure_.size();
  if (!outcome.ok) result.failure_witness = std::move(witness_);
  result.proof = std::move(graph_);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

CheckResult check(const ModelProvider& provider, const StateKey& state, const Formula& formula,
                  const CheckOptions& options) {
  Run run(provider, options);
  return run.execute(state, formula);
}

LiteralOutcome apply_literal_rules(const Clause& c, const ModelProvider& provider) {
  LiteralOutcome out;
  for (const auto& a : c) {
    if (!a.formula.is_literal()) {
      out.reduced.push_back(a);
      continue;
    }
    bool holds = false;
    switch (a.formula.op()) {
      case Op::True: holds = true; break;
      case Op::False: holds = false; break;
      case Op::Prop: holds = provider.holds(a.state, a.formula.name()); break;
      default: holds = !provider.holds(a.state, a.formula.name()); break;
    }
    if (holds) return {true, {}};
  }
  return out;
}

namespace {

Clause replace(const Clause& c, const Assertion& principal, std::initializer_list<Formula> added) {
  if (std::find(c.begin(), c.end(), principal) == c.end()) {
    throw std::invalid_argument("principal " + to_string(principal) + " not in clause");
  }
  std::vector<Assertion> out;
  for (const auto& a : c) {
    if (a != principal) out.push_back(a);
  }
  for (const auto& f : added) out.push_back({principal.state, f});
  return make_clause(std::move(out));
}

}  // namespace

std::pair<Clause, Clause> apply_alpha(const Clause& c, const Assertion& principal) {
  if (principal.formula.op() != Op::And) throw std::invalid_argument("alpha rule needs a conjunction");
  return {replace(c, principal, {principal.formula.lhs()}), replace(c, principal, {principal.formula.rhs()})};
}

Clause apply_beta(const Clause& c, const Assertion& principal) {
  if (principal.formula.op() != Op::Or) throw std::invalid_argument("beta rule needs a disjunction");
  return replace(c, principal, {principal.formula.lhs(), principal.formula.rhs()});
}

std::vector<Clause> apply_gamma(const Clause& c, const Assertion& principal, bool subsumption) {
  if (!is_gamma(principal.formula)) throw std::invalid_argument("gamma rule needs a gamma formula");
  std::vector<Clause> out;
  for (const auto& delta : analyze(principal.formula, subsumption).clauses) {
    std::vector<Assertion> next;
    for (const auto& a : c) {
      if (a != principal) next.push_back(a);
    }
    for (const auto& f : delta) next.push_back({principal.state, f});
    out.push_back(make_clause(std::move(next)));
  }
  return out;
}

std::vector<Clause> build_next_expansions(const Clause& c, const ModelProvider& provider) {
  for (const auto& a : c) {
    if (!is_successor(a.formula)) throw std::invalid_argument("Next rule needs successor formulas only");
  }
  if (c.empty()) throw std::invalid_argument("Next rule needs a non-empty clause");
  CheckOptions options;
  options.cycle_rule = CycleRule::Entry;  // deduplicate by clause only
  Run run(provider, options);
  std::vector<Clause> out;
  for (const auto& child : run.all_next_children(run.to_internal(c))) out.push_back(run.to_public(child.clause));
  return out;
}

RuleChoice select_rule(const Clause& c, const ModelProvider& provider,
                       const std::function<long(const Assertion&)>& last_expanded) {
  bool any_false = false;
  for (const auto& a : c) {
    if (!a.formula.is_literal()) continue;
    if (apply_literal_rules({a}, provider).true_leaf) return {Rule::True, std::nullopt};
    any_false = true;
  }
  if (any_false) return {Rule::False, std::nullopt};
  const auto principal = round_robin(
      c.size(), [&](std::size_t i) { return !c[i].formula.is_literal() && !is_successor(c[i].formula); },
      [&](std::size_t i) { return last_expanded(c[i]); });
  if (!principal) return {Rule::Next, std::nullopt};
  const Tag t = tag_of(c[*principal].formula);
  return {t == Tag::Alpha ? Rule::Alpha : t == Tag::Beta ? Rule::Beta : Rule::Gamma, principal};
}

RuleChoice select_rule(const Clause& c, const ModelProvider& provider, const std::vector<Assertion>& principals) {
  return select_rule(c, provider, [&](const Assertion& a) {
    for (std::size_t i = principals.size(); i > 0; --i) {
      if (principals[i - 1] == a) return static_cast<long>(i - 1);
    }
    return -1L;
  });
}

CycleVerdict classify_cycle(const Clause& entry) {
  const bool all_until = std::all_of(entry.begin(), entry.end(),
                                     [](const Assertion& a) { return is_until_assertion_formula(a.formula); });
  return all_until ? CycleVerdict::Failure : CycleVerdict::Success;
}

}  // namespace atlplus

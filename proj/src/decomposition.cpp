#include "atlplus/decomposition.hpp"

#include <algorithm>
#include <stdexcept>

#include "atlplus/normal_form.hpp"

namespace atlplus {

namespace {

void add_unique(DecSet& out, DecPair pair) {
  if (std::find(out.begin(), out.end(), pair) == out.end()) out.push_back(std::move(pair));
}

bool is_top(const Formula& f) { return f.op() == Op::True; }

}  // namespace

Formula conj_simplified(const Formula& a, const Formula& b) {
  if (is_top(a)) return b;
  if (is_top(b)) return a;
  return Formula::conj(a, b);
}

DecSet otimes(const DecSet& lhs, const DecSet& rhs) {
  DecSet out;
  for (const auto& x : lhs) {
    for (const auto& y : rhs) {
      add_unique(out, {conj_simplified(x.present, y.present), conj_simplified(x.future, y.future)});
    }
  }
  return out;
}

DecSet oplus(const DecSet& lhs, const DecSet& rhs) {
  DecSet out;
  for (const auto& x : lhs) {
    if (is_top(x.future)) continue;
    for (const auto& y : rhs) {
      if (is_top(y.future)) continue;
      add_unique(out, {conj_simplified(x.present, y.present), Formula::disj(x.future, y.future)});
    }
  }
  return out;
}

DecSet dec(const Formula& path) {
  if (path.is_state()) return {{path, Formula::top()}};
  switch (path.op()) {
    case Op::Next: return {{Formula::top(), path.lhs()}};
    case Op::Always: return {{path.lhs(), path}};
    case Op::Until: {
      DecSet out{{path.lhs(), path}};
      add_unique(out, {path.rhs(), Formula::top()});
      return out;
    }
    case Op::And: return otimes(dec(path.lhs()), dec(path.rhs()));
    case Op::Or: {
      const DecSet l = dec(path.lhs());
      const DecSet r = dec(path.rhs());
      DecSet out = l;
      for (const auto& p : r) add_unique(out, p);
      for (const auto& p : oplus(l, r)) add_unique(out, p);
      return out;
    }
    default: throw std::invalid_argument("dec expects an NNF ATL+ path formula: " + path.text());
  }
}

std::vector<Formula> gamma_components(const Formula& theta) {
  if (!theta.is_quantified()) throw std::invalid_argument("gamma_components expects a strategic formula");
  std::vector<Formula> out;
  for (const auto& [present, future] : dec(theta.body())) {
    Formula component = present;
    if (!is_top(future)) {
      const bool existential = theta.is_existential();
      const Formula successor = Formula::quantified(
          existential, theta.coalition(), Formula::next(Formula::quantified(existential, theta.coalition(), future)));
      component = conj_simplified(present, successor);
    }
    if (std::find(out.begin(), out.end(), component) == out.end()) out.push_back(std::move(component));
  }
  return out;
}

namespace {

bool same_set(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&](const Formula& f) { return std::find(b.begin(), b.end(), f) != b.end(); });
}

bool subset_of(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  return std::all_of(a.begin(), a.end(), [&](const Formula& f) { return std::find(b.begin(), b.end(), f) != b.end(); });
}

}  // namespace

GammaAnalysis analyze(const Formula& theta, bool subsumption) {
  if (theta.is_quantified() && theta.body().is_state()) {
    if (is_top(theta.body())) return {};
    return {{{theta.body()}}};
  }
  std::vector<std::vector<Formula>> dnf;
  for (const auto& component : gamma_components(theta)) {
    std::vector<Formula> atoms;
    for (auto& atom : top_level_conjuncts(component)) {
      if (is_top(atom)) continue;
      if (std::find(atoms.begin(), atoms.end(), atom) == atoms.end()) atoms.push_back(std::move(atom));
    }
    if (atoms.empty()) return {};  // a T component makes the disjunction valid
    dnf.push_back(std::move(atoms));
  }

  GammaAnalysis result;
  std::vector<std::size_t> pick(dnf.size(), 0);
  while (true) {
    std::vector<Formula> clause;
    for (std::size_t i = 0; i < dnf.size(); ++i) {
      const Formula& atom = dnf[i][pick[i]];
      if (std::find(clause.begin(), clause.end(), atom) == clause.end()) clause.push_back(atom);
    }
    const bool duplicate = std::any_of(result.clauses.begin(), result.clauses.end(),
                                       [&](const auto& c) { return same_set(c, clause); });
    if (!duplicate) result.clauses.push_back(std::move(clause));

    std::size_t pos = dnf.size();
    bool done = true;
    while (pos > 0) {
      --pos;
      if (++pick[pos] < dnf[pos].size()) {
        done = false;
        break;
      }
      pick[pos] = 0;
    }
    if (done) break;
  }

  if (subsumption) {
    std::vector<std::vector<Formula>> kept;
    for (std::size_t i = 0; i < result.clauses.size(); ++i) {
      bool subsumed = false;
      for (std::size_t j = 0; j < result.clauses.size() && !subsumed; ++j) {
        subsumed = j != i && result.clauses[j].size() < result.clauses[i].size() &&
                   subset_of(result.clauses[j], result.clauses[i]);
      }
      if (!subsumed) kept.push_back(result.clauses[i]);
    }
    result.clauses = std::move(kept);
  }
  return result;
}

std::set<Formula> closure(const Formula& f) {
  std::set<Formula> seen;
  std::vector<Formula> work{f, Formula::top()};
  while (!work.empty()) {
    Formula g = work.back();
    work.pop_back();
    if (!seen.insert(g).second) continue;
    std::visit(
        [&](const auto& kind) {
          using K = std::decay_t<decltype(kind)>;
          if constexpr (std::is_same_v<K, AlphaKind> || std::is_same_v<K, BetaKind>) {
            work.push_back(kind.left);
            work.push_back(kind.right);
          } else if constexpr (std::is_same_v<K, SuccessorKind>) {
            work.push_back(kind.successor);
          } else if constexpr (std::is_same_v<K, GammaKind>) {
            for (const auto& clause : analyze(g).clauses) {
              for (const auto& atom : clause) work.push_back(atom);
            }
          }
        },
        classify(g));
  }
  return seen;
}

}  // namespace atlplus

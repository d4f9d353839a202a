#pragma once

#include <set>
#include <vector>

#include "atlplus/formula.hpp"

namespace atlplus {

// A way of satisfying a path formula: `present` now, then `future` (T if
// nothing remains) from the next state on.
struct DecPair {
  Formula present;
  Formula future;
  auto operator<=>(const DecPair&) const = default;
  bool operator==(const DecPair&) const = default;
};

using DecSet = std::vector<DecPair>;  // duplicate-free, first-encounter order

// Conjunction that drops T operands.
Formula conj_simplified(const Formula& a, const Formula& b);

DecSet otimes(const DecSet& lhs, const DecSet& rhs);
DecSet oplus(const DecSet& lhs, const DecSet& rhs);
DecSet dec(const Formula& path);

// psi, or psi & Q X Q Psi, for each pair of dec(body).
std::vector<Formula> gamma_components(const Formula& theta);

// CNF over component conjuncts: read conjunctively over clauses and
// disjunctively inside a clause.  An empty clause list means theta is valid.
struct GammaAnalysis {
  std::vector<std::vector<Formula>> clauses;
};

GammaAnalysis analyze(const Formula& theta, bool subsumption = false);

// Every formula reachable by rule application from `f`, including T.
std::set<Formula> closure(const Formula& f);

}  // namespace atlplus

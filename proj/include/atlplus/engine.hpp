#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "atlplus/cgm.hpp"
#include "atlplus/formula.hpp"

namespace atlplus {

struct Assertion {
  StateKey state;
  Formula formula;

  bool operator==(const Assertion&) const = default;
  std::strong_ordering operator<=>(const Assertion&) const = default;
};

// Canonical: sorted by (state name, formula text), no duplicates.
using Clause = std::vector<Assertion>;

Clause make_clause(std::vector<Assertion> assertions);
std::string to_string(const Assertion& a);
std::string to_string(const Clause& c);

// Subsumed marks a clause awaiting (Next) that contains another such clause of
// the same expansion; it holds whenever that one does.
enum class Rule { True, False, Alpha, Beta, Gamma, Next, LeafTrue, LeafEmpty, Subsumed };
enum class Verdict { True, False, Pending };
enum class CycleVerdict { Success, Failure };

// How a back-edge is judged.  Trace follows individual obligations around
// the loop; Entry looks only at the assertions of the back-edge target.
enum class CycleRule { Trace, Entry };

std::string to_string(Rule rule);
std::string to_string(Verdict verdict);

struct BackEdge {
  std::size_t target;
  CycleVerdict cycle;
};

struct ProofNode {
  std::size_t id;  // 1-based, in order of creation
  Clause clause;
  Rule rule;
  std::optional<Assertion> principal;
  std::vector<std::size_t> children;
  std::vector<BackEdge> back_edges;
  std::optional<std::size_t> subsumed_by;
  Verdict verdict = Verdict::Pending;
};

struct ProofGraph {
  std::vector<ProofNode> nodes;  // nodes[i].id == i + 1
  std::size_t back_edge_count() const;
};

struct FailureWitness {
  std::vector<Clause> path;            // root first
  bool ends_in_empty_clause = false;   // otherwise the last clause has a back-edge
  std::optional<std::size_t> entry;    // index in path of the back-edge target
};

struct CheckOptions {
  bool early_abort = true;
  std::size_t node_budget = 1'000'000;
  bool retain_proof = false;
  bool subsumption = false;
  // Decide strategic assertions smaller than the root by separate cached runs and
  // reuse clauses proved in self-contained subproofs.  Off when the proof is retained.
  bool memoize = true;
  CycleRule cycle_rule = CycleRule::Trace;
  bool check_invariants = false;
};

struct CheckResult {
  bool verdict = false;
  std::size_t states_materialized = 0;
  std::size_t nodes_expanded = 0;
  std::size_t distinct_clauses = 0;
  std::size_t back_edges = 0;
  std::size_t max_depth = 0;
  std::size_t closure_size = 0;  // filled when invariants are checked
  std::optional<FailureWitness> failure_witness;
  std::optional<ProofGraph> proof;
  double wall_seconds = 0.0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::size_t budget)
      : std::runtime_error("node budget of " + std::to_string(budget) + " exceeded") {}
};

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

CheckResult check(const ModelProvider& provider, const StateKey& state, const Formula& formula,
                  const CheckOptions& options = {});

// Single rule applications, exposed for testing and tooling.
struct LiteralOutcome {
  bool true_leaf = false;
  Clause reduced;
};
LiteralOutcome apply_literal_rules(const Clause& c, const ModelProvider& provider);
std::pair<Clause, Clause> apply_alpha(const Clause& c, const Assertion& principal);
Clause apply_beta(const Clause& c, const Assertion& principal);
std::vector<Clause> apply_gamma(const Clause& c, const Assertion& principal, bool subsumption = false);
std::vector<Clause> build_next_expansions(const Clause& c, const ModelProvider& provider);

struct RuleChoice {
  Rule rule;
  std::optional<std::size_t> principal;  // index into the clause
};
// `last_expanded` gives the depth at which an assertion was last the principal
// on the current path, or -1 if never.
RuleChoice select_rule(const Clause& c, const ModelProvider& provider,
                       const std::function<long(const Assertion&)>& last_expanded);
// Convenience overload: principals along the current path, root first.
RuleChoice select_rule(const Clause& c, const ModelProvider& provider, const std::vector<Assertion>& principals);

// Entry-based judgement: failure iff every assertion is an until assertion.
CycleVerdict classify_cycle(const Clause& entry);

enum class ExportFormat { GraphText, Json };
std::string export_proof(const ProofGraph& graph, ExportFormat format);

// Strongly connected components of the proof graph (tree edges plus
// back-edges), each listed by node id in ascending order.
std::vector<std::vector<std::size_t>> proof_sccs(const ProofGraph& graph);
// True iff every back-edge targets the smallest-id node of its component.
bool back_edges_target_scc_roots(const ProofGraph& graph);

}  // namespace atlplus

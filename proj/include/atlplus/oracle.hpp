#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "atlplus/cgm.hpp"
#include "atlplus/formula.hpp"

namespace atlplus {

// Brute-force semantic evaluation over a finite explicit model.  Shares no
// code with the proof search.

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  std::size_t max_product_nodes = 4'000'000;
  bool force_game = false;  // evaluate single-operator bodies with the product game too
};

using Truth = std::vector<bool>;  // indexed by state index of the model

// Accepts any ATL+ state formula: negations, R and F are fine.
Truth eval_all(const ExplicitCGM& model, const Formula& f, const OracleOptions& options = {});
bool eval_state_formula(const ExplicitCGM& model, const StateKey& s, const Formula& f,
                        const OracleOptions& options = {});

enum class Shape { Next, Always, Until };

// Controllable-predecessor fixpoints.  For Next and Always only `lhs` is read.
Truth eval_vanilla(const ExplicitCGM& model, bool existential, const Coalition& coalition, Shape shape,
                   const Truth& lhs, const Truth& rhs = {});

// Product of the model with per-atom status vectors, solved as a game in
// which the coalition commits to a move before the others answer.
Truth eval_game(const ExplicitCGM& model, bool existential, const Coalition& coalition, const Formula& body,
                const OracleOptions& options = {});

// Moves of `coalition` at a state: for each coalition move, the successor
// under each answer of the other agents.
struct MoveTable {
  std::vector<std::vector<std::vector<std::size_t>>> successors;  // [state][move][answer]
};
MoveTable move_table(const ExplicitCGM& model, const Coalition& coalition);

}  // namespace atlplus

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "atlplus/engine.hpp"
#include "atlplus/generators.hpp"

namespace atlplus {

// Engine-versus-oracle comparison over generated instances.

struct Disagreement {
  std::string model;  // model file text
  StateKey state;
  std::string formula;
  bool engine;
  bool oracle;
};

struct CrosscheckReport {
  std::size_t models = 0;
  std::size_t formulas = 0;
  std::size_t instances = 0;       // (model, state, formula) triples
  std::size_t agreements = 0;
  std::size_t false_instances = 0;
  std::size_t budget_failures = 0;
  std::size_t bound_violations = 0;      // distinct clauses above 2^(|closure| * states)
  std::size_t dominance_violations = 0;  // early abort expanded more than exhaustive
  std::size_t max_nodes = 0;
  std::size_t total_nodes = 0;
  std::vector<Disagreement> disagreements;  // first few only
  double seconds = 0.0;

  bool clean() const {
    return agreements == instances && budget_failures == 0 && bound_violations == 0 && dominance_violations == 0;
  }
};

struct CrosscheckConfig {
  CheckOptions options;
  bool compare_exhaustive = false;  // rerun FALSE instances without early abort
  bool check_bounds = false;        // compute closures for the clause bound
  std::size_t workers = 1;
  std::size_t max_reported = 5;
};

// Checks every formula at every state of every model.
CrosscheckReport crosscheck_models(const std::vector<ExplicitCGM>& models,
                                   const std::function<std::vector<Formula>(int agents)>& formulas,
                                   const CrosscheckConfig& config);

// Formulas for the exhaustive universe: every enumerated formula up to
// `complete_size`, then `samples_per_size` distinct seeded random formulas of
// each larger size up to `max_size`.
struct UniverseBounds {
  std::size_t complete_size = 4;
  std::size_t max_size = 9;
  std::size_t samples_per_size = 100;
  std::uint64_t seed = 1;
};

std::vector<Formula> universe_formulas(const UniverseBounds& bounds, int propositions, int agents);

// Every reduced model within `model_bounds`, crossed with the universe formulas
// for its agent count.
CrosscheckReport crosscheck_exhaustive(const ModelBounds& model_bounds, const UniverseBounds& formula_bounds,
                                       const CrosscheckConfig& config);

// `count` random (model, formula) instances, each checked at every state.
CrosscheckReport crosscheck_seeded(std::size_t count, std::uint64_t seed, const ModelBounds& model_bounds,
                                   std::size_t max_formula_size, const CrosscheckConfig& config);

std::string summary(const CrosscheckReport& report);

}  // namespace atlplus

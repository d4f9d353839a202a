#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "atlplus/cgm.hpp"
#include "atlplus/formula.hpp"

namespace atlplus {

struct ModelBounds {
  int max_states = 2;
  int max_agents = 2;
  int max_actions = 2;
  int propositions = 2;
};

std::vector<std::string> proposition_names(int count);

// Every model within the bounds, in a fixed order.  States are s0, s1, ...;
// actions are a0, a1, ...  With `reduce`, only one model per class of
// models equal up to renaming actions, states and propositions is emitted.
void for_each_model(const ModelBounds& bounds, bool reduce, const std::function<void(const ExplicitCGM&)>& visit);

ExplicitCGM random_model(std::mt19937_64& rng, const ModelBounds& bounds);

struct FormulaBounds {
  std::size_t max_size = 9;
  int propositions = 2;
  int agents = 2;
};

// NNF ATL+ state formulas of bounded size built from the productions
// literal, &, |, <<A>>, [[A]], X, G, U and &/| under a quantifier.
// Operands of & and | are kept in strictly increasing text order.
std::vector<Formula> enumerate_formulas(const FormulaBounds& bounds,
                                        const std::function<bool(const Formula&)>& keep = {});

// A random NNF ATL+ state formula with size close to `size` (never above).
Formula random_formula(std::mt19937_64& rng, const FormulaBounds& bounds, std::size_t size);

}  // namespace atlplus

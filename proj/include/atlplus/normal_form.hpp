#pragma once

#include <cstddef>
#include <variant>

#include "atlplus/formula.hpp"

namespace atlplus {

// Negation normal form: negation only on propositions and T, no R operator.
Formula to_nnf(const Formula& f);
bool is_nnf(const Formula& f);

struct LiteralKind {};
struct AlphaKind {
  Formula left;
  Formula right;
};
struct BetaKind {
  Formula left;
  Formula right;
};
// Q X phi: a one-step obligation handled by the Next rule.
struct SuccessorKind {
  bool existential;
  Coalition coalition;
  Formula successor;
};
// Any other strategic formula.  A body that is already a state formula is
// kept as-is; Q psi is equivalent to psi.
struct GammaKind {
  bool existential;
  Coalition coalition;
  Formula body;
};

using FormulaKind = std::variant<LiteralKind, AlphaKind, BetaKind, SuccessorKind, GammaKind>;

// Expects an NNF state formula.
FormulaKind classify(const Formula& f);
bool is_gamma(const Formula& f);
bool is_successor(const Formula& f);

// Nesting depth of G operators; quantifiers and X are transparent.
std::size_t box_modal_depth(const Formula& f);

// Q Psi where Psi is built from U-rooted formulas with & and | only.
bool is_until_assertion_formula(const Formula& f);

// Path formula that is U-rooted, G-rooted, or a &/| combination of such.
bool is_self_generating(const Formula& body);

}  // namespace atlplus

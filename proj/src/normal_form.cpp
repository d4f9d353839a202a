#include "atlplus/normal_form.hpp"

#include <algorithm>
#include <stdexcept>

namespace atlplus {

namespace {

// (a R b) as (G b) | (b U (a & b)).
Formula release_expansion(const Formula& a, const Formula& b) {
  return Formula::disj(Formula::always(b), Formula::until(b, Formula::conj(a, b)));
}

Formula nnf(const Formula& f, bool negated) {
  switch (f.op()) {
    case Op::True: return negated ? Formula::bottom() : f;
    case Op::False: return negated ? Formula::top() : f;
    case Op::Prop: return negated ? Formula::neg_prop(f.name()) : f;
    case Op::NegProp: return negated ? Formula::prop(f.name()) : f;
    case Op::Not: return nnf(f.lhs(), !negated);
    case Op::And: {
      auto l = nnf(f.lhs(), negated);
      auto r = nnf(f.rhs(), negated);
      return negated ? Formula::disj(l, r) : Formula::conj(l, r);
    }
    case Op::Or: {
      auto l = nnf(f.lhs(), negated);
      auto r = nnf(f.rhs(), negated);
      return negated ? Formula::conj(l, r) : Formula::disj(l, r);
    }
    case Op::Exist:
    case Op::Univ: {
      const bool existential = (f.op() == Op::Exist) != negated;
      return Formula::quantified(existential, f.coalition(), nnf(f.body(), negated));
    }
    case Op::Next: return Formula::next(nnf(f.lhs(), negated));
    case Op::Always:
      if (negated) return Formula::until(Formula::top(), nnf(f.lhs(), true));
      return Formula::always(nnf(f.lhs(), false));
    case Op::Until: {
      auto l = nnf(f.lhs(), negated);
      auto r = nnf(f.rhs(), negated);
      return negated ? release_expansion(l, r) : Formula::until(l, r);
    }
    case Op::Release: {
      auto l = nnf(f.lhs(), negated);
      auto r = nnf(f.rhs(), negated);
      return negated ? Formula::until(l, r) : release_expansion(l, r);
    }
  }
  throw std::logic_error("to_nnf: unknown operator");
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, false); }

bool is_nnf(const Formula& f) {
  switch (f.op()) {
    case Op::Not:
    case Op::Release: return false;
    case Op::True:
    case Op::False:
    case Op::Prop:
    case Op::NegProp: return true;
    case Op::And:
    case Op::Or:
    case Op::Until: return is_nnf(f.lhs()) && is_nnf(f.rhs());
    default: return is_nnf(f.lhs());
  }
}

FormulaKind classify(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Prop:
    case Op::NegProp: return LiteralKind{};
    case Op::And:
      if (f.is_state()) return AlphaKind{f.lhs(), f.rhs()};
      break;
    case Op::Or:
      if (f.is_state()) return BetaKind{f.lhs(), f.rhs()};
      break;
    case Op::Exist:
    case Op::Univ:
      if (f.body().op() == Op::Next && f.body().lhs().is_state()) {
        return SuccessorKind{f.is_existential(), f.coalition(), f.body().lhs()};
      }
      return GammaKind{f.is_existential(), f.coalition(), f.body()};
    default: break;
  }
  throw std::invalid_argument("classify expects an NNF state formula: " + f.text());
}

bool is_gamma(const Formula& f) {
  return f.is_quantified() && std::holds_alternative<GammaKind>(classify(f));
}

bool is_successor(const Formula& f) {
  return f.is_quantified() && std::holds_alternative<SuccessorKind>(classify(f));
}

std::size_t box_modal_depth(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Prop:
    case Op::NegProp: return 0;
    case Op::And:
    case Op::Or:
    case Op::Until:
    case Op::Release: return std::max(box_modal_depth(f.lhs()), box_modal_depth(f.rhs()));
    case Op::Always: return 1 + box_modal_depth(f.lhs());
    default: return box_modal_depth(f.lhs());
  }
}

namespace {

bool is_until_formula(const Formula& body) {
  switch (body.op()) {
    case Op::Until: return true;
    case Op::And:
    case Op::Or: return is_until_formula(body.lhs()) && is_until_formula(body.rhs());
    default: return false;
  }
}

}  // namespace

bool is_until_assertion_formula(const Formula& f) { return f.is_quantified() && is_until_formula(f.body()); }

bool is_self_generating(const Formula& body) {
  switch (body.op()) {
    case Op::Until:
    case Op::Always: return true;
    case Op::And:
    case Op::Or: return is_self_generating(body.lhs()) && is_self_generating(body.rhs());
    default: return false;
  }
}

}  // namespace atlplus

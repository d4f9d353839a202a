#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace atlplus {

using AgentId = int;

// A set of agents, kept sorted and duplicate-free.
class Coalition {
 public:
  Coalition() = default;
  explicit Coalition(std::vector<AgentId> members);

  const std::vector<AgentId>& members() const noexcept { return members_; }
  bool contains(AgentId agent) const noexcept;
  bool empty() const noexcept { return members_.empty(); }
  std::string to_string() const;

  auto operator<=>(const Coalition&) const = default;

 private:
  std::vector<AgentId> members_;
};

enum class Op : std::uint8_t {
  True,
  False,
  Prop,
  NegProp,
  Not,
  And,
  Or,
  Exist,
  Univ,
  Next,
  Always,
  Until,
  Release,
};

// Immutable, shared formula tree covering both state and path formulas.
// Every node caches its canonical (fully parenthesized, re-parsable) text,
// and equality/ordering are defined on that text.
class Formula {
 public:
  static Formula top();
  static Formula bottom();
  static Formula prop(std::string name);
  static Formula neg_prop(std::string name);
  static Formula negation(Formula arg);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula exist(Coalition coalition, Formula body);
  static Formula univ(Coalition coalition, Formula body);
  static Formula quantified(bool existential, Coalition coalition, Formula body);
  static Formula next(Formula arg);
  static Formula always(Formula arg);
  static Formula until(Formula lhs, Formula rhs);
  static Formula release(Formula lhs, Formula rhs);
  static Formula eventually(Formula arg) { return until(top(), std::move(arg)); }

  Op op() const noexcept;
  const std::string& name() const noexcept;
  const Coalition& coalition() const noexcept;
  // Unary operators and quantifiers keep their operand in lhs().
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Formula& body() const { return lhs(); }

  bool is_state() const noexcept;
  bool is_path() const noexcept { return !is_state(); }
  bool is_literal() const noexcept;
  bool is_quantified() const noexcept;
  bool is_existential() const noexcept { return op() == Op::Exist; }
  bool is_temporal() const noexcept;
  std::size_t size() const noexcept;
  const std::string& text() const noexcept;
  std::size_t hash() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b) noexcept;
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Op op, std::string name, Coalition coalition, std::vector<Formula> kids);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

// Splits nested conjunctions into their leaves, left to right.
std::vector<Formula> top_level_conjuncts(const Formula& f);

}  // namespace atlplus

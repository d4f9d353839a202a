#include "atlplus/formula.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace atlplus {

Coalition::Coalition(std::vector<AgentId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool Coalition::contains(AgentId agent) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), agent);
}

std::string Coalition::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(members_[i]);
  }
  return out;
}

struct Formula::Node {
  Op op;
  std::string name;
  Coalition coalition;
  std::vector<Formula> kids;
  std::string text;
  std::size_t hash = 0;
  std::size_t size = 1;
  bool state = false;
};

namespace {

std::string render(Op op, const std::string& name, const Coalition& coalition,
                   const std::vector<Formula>& kids) {
  switch (op) {
    case Op::True: return "T";
    case Op::False: return "~T";
    case Op::Prop: return name;
    case Op::NegProp: return "~" + name;
    case Op::Not: return "~" + kids[0].text();
    case Op::And: return "(" + kids[0].text() + " & " + kids[1].text() + ")";
    case Op::Or: return "(" + kids[0].text() + " | " + kids[1].text() + ")";
    case Op::Exist: return "<<" + coalition.to_string() + ">>" + kids[0].text();
    case Op::Univ: return "[[" + coalition.to_string() + "]]" + kids[0].text();
    case Op::Next: return "X " + kids[0].text();
    case Op::Always: return "G " + kids[0].text();
    case Op::Until: return "(" + kids[0].text() + " U " + kids[1].text() + ")";
    case Op::Release: return "(" + kids[0].text() + " R " + kids[1].text() + ")";
  }
  return {};
}

std::size_t arity(Op op) {
  switch (op) {
    case Op::True:
    case Op::False:
    case Op::Prop:
    case Op::NegProp: return 0;
    case Op::Not:
    case Op::Exist:
    case Op::Univ:
    case Op::Next:
    case Op::Always: return 1;
    case Op::And:
    case Op::Or:
    case Op::Until:
    case Op::Release: return 2;
  }
  return 0;
}

}  // namespace

Formula Formula::make(Op op, std::string name, Coalition coalition, std::vector<Formula> kids) {
  if (kids.size() != arity(op)) throw std::logic_error("formula: wrong operand count");
  auto node = std::make_shared<Node>();
  node->op = op;
  node->text = render(op, name, coalition, kids);
  node->hash = std::hash<std::string>{}(node->text);
  for (const auto& k : kids) node->size += k.size();
  switch (op) {
    case Op::True:
    case Op::False:
    case Op::Prop:
    case Op::NegProp:
    case Op::Exist:
    case Op::Univ: node->state = true; break;
    case Op::Not:
    case Op::And:
    case Op::Or:
      node->state = std::all_of(kids.begin(), kids.end(), [](const Formula& k) { return k.is_state(); });
      break;
    default: node->state = false; break;
  }
  node->name = std::move(name);
  node->coalition = std::move(coalition);
  node->kids = std::move(kids);
  return Formula(std::move(node));
}

Formula Formula::top() {
  static const Formula t = make(Op::True, {}, {}, {});
  return t;
}

Formula Formula::bottom() {
  static const Formula f = make(Op::False, {}, {}, {});
  return f;
}

Formula Formula::prop(std::string name) { return make(Op::Prop, std::move(name), {}, {}); }
Formula Formula::neg_prop(std::string name) { return make(Op::NegProp, std::move(name), {}, {}); }
Formula Formula::negation(Formula arg) { return make(Op::Not, {}, {}, {std::move(arg)}); }
Formula Formula::conj(Formula lhs, Formula rhs) { return make(Op::And, {}, {}, {std::move(lhs), std::move(rhs)}); }
Formula Formula::disj(Formula lhs, Formula rhs) { return make(Op::Or, {}, {}, {std::move(lhs), std::move(rhs)}); }
Formula Formula::exist(Coalition c, Formula body) { return make(Op::Exist, {}, std::move(c), {std::move(body)}); }
Formula Formula::univ(Coalition c, Formula body) { return make(Op::Univ, {}, std::move(c), {std::move(body)}); }
Formula Formula::quantified(bool existential, Coalition c, Formula body) {
  return existential ? exist(std::move(c), std::move(body)) : univ(std::move(c), std::move(body));
}
Formula Formula::next(Formula arg) { return make(Op::Next, {}, {}, {std::move(arg)}); }
Formula Formula::always(Formula arg) { return make(Op::Always, {}, {}, {std::move(arg)}); }
Formula Formula::until(Formula lhs, Formula rhs) { return make(Op::Until, {}, {}, {std::move(lhs), std::move(rhs)}); }
Formula Formula::release(Formula lhs, Formula rhs) {
  return make(Op::Release, {}, {}, {std::move(lhs), std::move(rhs)});
}

Op Formula::op() const noexcept { return node_->op; }
const std::string& Formula::name() const noexcept { return node_->name; }
const Coalition& Formula::coalition() const noexcept { return node_->coalition; }

const Formula& Formula::lhs() const {
  if (node_->kids.empty()) throw std::logic_error("formula: no operand");
  return node_->kids[0];
}

const Formula& Formula::rhs() const {
  if (node_->kids.size() < 2) throw std::logic_error("formula: no right operand");
  return node_->kids[1];
}

bool Formula::is_state() const noexcept { return node_->state; }

bool Formula::is_literal() const noexcept {
  const Op o = op();
  return o == Op::True || o == Op::False || o == Op::Prop || o == Op::NegProp;
}

bool Formula::is_quantified() const noexcept { return op() == Op::Exist || op() == Op::Univ; }

bool Formula::is_temporal() const noexcept {
  const Op o = op();
  return o == Op::Next || o == Op::Always || o == Op::Until || o == Op::Release;
}

std::size_t Formula::size() const noexcept { return node_->size; }
const std::string& Formula::text() const noexcept { return node_->text; }
std::size_t Formula::hash() const noexcept { return node_->hash; }

bool operator==(const Formula& a, const Formula& b) noexcept {
  return a.node_ == b.node_ || (a.node_->hash == b.node_->hash && a.node_->text == b.node_->text);
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const int c = a.node_->text.compare(b.node_->text);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::vector<Formula> top_level_conjuncts(const Formula& f) {
  std::vector<Formula> out;
  std::vector<Formula> work{f};
  while (!work.empty()) {
    Formula g = work.back();
    work.pop_back();
    if (g.op() == Op::And) {
      work.push_back(g.rhs());
      work.push_back(g.lhs());
    } else {
      out.push_back(std::move(g));
    }
  }
  return out;
}

}  // namespace atlplus

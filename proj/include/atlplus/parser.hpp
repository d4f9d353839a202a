#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "atlplus/formula.hpp"

namespace atlplus {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : std::runtime_error("parse error at position " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Raised when a syntactically valid formula leaves the ATL+ fragment.
class FragmentError : public std::runtime_error {
 public:
  FragmentError(std::string subformula, const std::string& message)
      : std::runtime_error(message + ": " + subformula), subformula_(std::move(subformula)) {}
  const std::string& subformula() const noexcept { return subformula_; }

 private:
  std::string subformula_;
};

// Grammar (loosest to tightest):
//   or    := and ('|' and)*
//   and   := until ('&' until)*
//   until := unary (('U' | 'R') until)?
//   unary := '~' unary | ('X' | 'G' | 'F') unary | quant until | 'T' | ident | '(' or ')'
//   quant := '<<' agents '>>' | '[[' agents ']]'
// F is elaborated to T U _.  The result must be an ATL+ state formula.
Formula parse_formula(std::string_view text);

// Same grammar, but accepts any formula tree (used for path-formula fragments).
Formula parse_any(std::string_view text);

// Throws FragmentError unless `f` is an ATL+ state formula.
void check_fragment(const Formula& f);

}  // namespace atlplus

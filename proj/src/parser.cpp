#include "atlplus/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace atlplus {

namespace {

enum class Tok { Ident, Number, Tilde, Amp, Bar, LParen, RParen, LAngle, RAngle, LBracket, RBracket, Comma, End };

struct Token {
  Tok kind;
  std::string lexeme;
  std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    auto two = [&](char next) { return i + 1 < text.size() && text[i + 1] == next; };
    if (c == '<' && two('<')) {
      out.push_back({Tok::LAngle, "<<", i});
      i += 2;
    } else if (c == '>' && two('>')) {
      out.push_back({Tok::RAngle, ">>", i});
      i += 2;
    } else if (c == '[' && two('[')) {
      out.push_back({Tok::LBracket, "[[", i});
      i += 2;
    } else if (c == ']' && two(']')) {
      out.push_back({Tok::RBracket, "]]", i});
      i += 2;
    } else if (c == '~' || c == '!') {
      out.push_back({Tok::Tilde, "~", i++});
    } else if (c == '&') {
      out.push_back({Tok::Amp, "&", i++});
    } else if (c == '|') {
      out.push_back({Tok::Bar, "|", i++});
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", i++});
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", i++});
    } else if (c == ',') {
      out.push_back({Tok::Comma, ",", i++});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({Tok::Number, std::string(text.substr(start, i - start)), start});
    } else if (ident_start(c)) {
      const std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) ++i;
      out.push_back({Tok::Ident, std::string(text.substr(start, i - start)), start});
    } else {
      throw ParseError(i, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Formula parse() {
    Formula f = parse_or();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().lexeme + "'");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool is_keyword(const char* kw) const { return peek().kind == Tok::Ident && peek().lexeme == kw; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().pos, msg); }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      fail(std::string("expected ") + what + (peek().kind == Tok::End ? " before end of input" : ", found '" + peek().lexeme + "'"));
    }
    advance();
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (peek().kind == Tok::Bar) {
      advance();
      f = Formula::disj(f, parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_until();
    while (peek().kind == Tok::Amp) {
      advance();
      f = Formula::conj(f, parse_until());
    }
    return f;
  }

  Formula parse_until() {
    Formula f = parse_unary();
    if (is_keyword("U")) {
      advance();
      return Formula::until(f, parse_until());
    }
    if (is_keyword("R")) {
      advance();
      return Formula::release(f, parse_until());
    }
    return f;
  }

  Coalition parse_agents(Tok close, const char* closer) {
    std::vector<AgentId> agents;
    if (peek().kind != close) {
      while (true) {
        if (peek().kind != Tok::Number) fail("expected agent number");
        const auto& tok = advance();
        if (tok.lexeme.size() > 9) throw ParseError(tok.pos, "agent number too large");
        const int agent = std::stoi(tok.lexeme);
        if (agent < 1) throw ParseError(tok.pos, "agents are numbered from 1");
        agents.push_back(agent);
        if (peek().kind != Tok::Comma) break;
        advance();
      }
    }
    expect(close, closer);
    return Coalition(std::move(agents));
  }

  Formula parse_unary() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Tilde: {
        advance();
        Formula arg = parse_unary();
        if (arg.op() == Op::Prop) return Formula::neg_prop(arg.name());
        if (arg.op() == Op::True) return Formula::bottom();
        return Formula::negation(arg);
      }
      case Tok::LAngle: {
        advance();
        Coalition c = parse_agents(Tok::RAngle, "'>>'");
        return Formula::exist(std::move(c), parse_until());
      }
      case Tok::LBracket: {
        advance();
        Coalition c = parse_agents(Tok::RBracket, "']]'");
        return Formula::univ(std::move(c), parse_until());
      }
      case Tok::LParen: {
        advance();
        Formula f = parse_or();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident: {
        if (tok.lexeme == "X") {
          advance();
          return Formula::next(parse_unary());
        }
        if (tok.lexeme == "G") {
          advance();
          return Formula::always(parse_unary());
        }
        if (tok.lexeme == "F") {
          advance();
          return Formula::eventually(parse_unary());
        }
        if (tok.lexeme == "T") {
          advance();
          return Formula::top();
        }
        if (tok.lexeme == "U" || tok.lexeme == "R") fail("binary operator '" + tok.lexeme + "' without left operand");
        advance();
        return Formula::prop(tok.lexeme);
      }
      case Tok::End: fail("unexpected end of input");
      default: fail("unexpected '" + tok.lexeme + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// A path formula allowed directly under a strategic quantifier: a boolean
// combination of state formulas and temporal operators over state formulas.
void check_path(const Formula& f) {
  if (f.is_state()) {
    check_fragment(f);
    return;
  }
  switch (f.op()) {
    case Op::Not: check_path(f.lhs()); return;
    case Op::And:
    case Op::Or:
      check_path(f.lhs());
      check_path(f.rhs());
      return;
    case Op::Next:
    case Op::Always:
    case Op::Until:
    case Op::Release: {
      const bool binary = f.op() == Op::Until || f.op() == Op::Release;
      if (!f.lhs().is_state() || (binary && !f.rhs().is_state())) {
        throw FragmentError(f.text(), "temporal operator applied to a path formula");
      }
      check_fragment(f.lhs());
      if (binary) check_fragment(f.rhs());
      return;
    }
    default: throw FragmentError(f.text(), "malformed path formula");
  }
}

}  // namespace

void check_fragment(const Formula& f) {
  if (!f.is_state()) {
    throw FragmentError(f.text(), "temporal formula outside a strategic quantifier");
  }
  switch (f.op()) {
    case Op::Not: check_fragment(f.lhs()); return;
    case Op::And:
    case Op::Or:
      check_fragment(f.lhs());
      check_fragment(f.rhs());
      return;
    case Op::Exist:
    case Op::Univ: check_path(f.body()); return;
    default: return;
  }
}

Formula parse_any(std::string_view text) { return Parser(text).parse(); }

Formula parse_formula(std::string_view text) {
  Formula f = parse_any(text);
  check_fragment(f);
  return f;
}

}  // namespace atlplus

#include <gtest/gtest.h>

#include <cmath>
#include <variant>

#include "atlplus/decomposition.hpp"
#include "atlplus/generators.hpp"
#include "atlplus/normal_form.hpp"
#include "atlplus/parser.hpp"
#include "test_support.hpp"

namespace atlplus {
namespace {

using testing::nnf;
using testing::texts;

TEST(Parser, TextRoundTrips) {
  for (const char* s : {"p", "~p", "T", "(p & q)", "((p & q) | r)", "<<1>>X p", "[[1,2]](p U q)", "<<>>G ~q",
                        "<<1>>((T U q) & (T U p))", "(<<1>>G p | <<1>>(T U ~p))"}) {
    const Formula f = parse_formula(s);
    EXPECT_EQ(f.text(), s);
    EXPECT_EQ(parse_formula(f.text()), f);
  }
}

TEST(Parser, Precedence) {
  EXPECT_EQ(parse_formula("p & q | r").text(), "((p & q) | r)");
  EXPECT_EQ(parse_formula("<<1>>(p U q) & r").text(), "(<<1>>(p U q) & r)");
}

TEST(Parser, EventuallyIsElaborated) { EXPECT_EQ(parse_formula("<<1>>F p").text(), "<<1>>(T U p)"); }

TEST(Parser, RejectsNestedTemporalOperators) {
  EXPECT_THROW(parse_formula("<<1>>G G p"), FragmentError);
  EXPECT_THROW(parse_formula("<<1>>(G p U q)"), FragmentError);
  EXPECT_THROW(parse_formula("G p"), FragmentError);
  EXPECT_NO_THROW(parse_any("G p"));
}

TEST(Parser, ReportsSyntaxErrors) {
  EXPECT_THROW(parse_formula("p &"), ParseError);
  EXPECT_THROW(parse_formula("<<1>"), ParseError);
  EXPECT_THROW(parse_formula("(p"), ParseError);
}

TEST(Formula, SizeCountsNodes) {
  EXPECT_EQ(parse_formula("p").size(), 1U);
  EXPECT_EQ(parse_formula("<<1>>(p U q)").size(), 4U);
  EXPECT_EQ(parse_formula("p & q | r").size(), 5U);
}

TEST(Nnf, Examples) {
  EXPECT_EQ(nnf("~~p").text(), "p");
  EXPECT_EQ(nnf("~<<1>>G q").text(), "[[1]](T U ~q)");
  EXPECT_EQ(nnf("~<<1>>X p").text(), "[[1]]X ~p");
  EXPECT_EQ(nnf("<<1>>(p R q)").text(), "<<1>>(G q | (q U (p & q)))");
  EXPECT_EQ(nnf("~T").text(), "~T");
  EXPECT_TRUE(is_nnf(nnf("~(p & <<1>>(q U ~r))")));
}

TEST(Nnf, Idempotent) {
  for (const auto& f : enumerate_formulas({4, 2, 2})) EXPECT_EQ(to_nnf(to_nnf(f)), to_nnf(f)) << f.text();
  for (const char* s : {"~<<1,2>>(p R ~q)", "~[[1]]((p U q) & G r)", "~(<<>>X p | ~q)"}) {
    EXPECT_EQ(to_nnf(nnf(s)), nnf(s));
  }
}

TEST(Classify, Kinds) {
  EXPECT_TRUE(std::holds_alternative<AlphaKind>(classify(nnf("p & q"))));
  EXPECT_TRUE(std::holds_alternative<BetaKind>(classify(nnf("p | q"))));
  EXPECT_TRUE(std::holds_alternative<LiteralKind>(classify(nnf("~p"))));
  EXPECT_TRUE(std::holds_alternative<SuccessorKind>(classify(nnf("<<1>>X <<1>>G p"))));
  EXPECT_TRUE(std::holds_alternative<GammaKind>(classify(nnf("<<1>>(G p | G q)"))));
  EXPECT_TRUE(std::holds_alternative<GammaKind>(classify(nnf("<<1>>p"))));
  EXPECT_TRUE(is_successor(nnf("<<1>>X p")));
  EXPECT_FALSE(is_gamma(nnf("<<1>>X p")));
}

TEST(Closure, Examples) {
  const auto literal = closure(nnf("p"));
  EXPECT_EQ(texts({literal.begin(), literal.end()}), "T; p");
  const auto c = closure(nnf("<<1>>G q"));
  for (const char* s : {"T", "q", "<<1>>G q", "<<1>>X <<1>>G q"}) EXPECT_TRUE(c.count(parse_formula(s))) << s;
  EXPECT_EQ(c.size(), 4U);
}

TEST(Closure, IsAFixpointAndWithinTheBound) {
  for (const auto& f : enumerate_formulas({4, 2, 2})) {
    const auto c = closure(f);
    EXPECT_TRUE(c.count(f));
    for (const auto& g : c) {
      const auto again = closure(g);
      for (const auto& h : again) EXPECT_TRUE(c.count(h)) << f.text() << " misses " << h.text();
    }
    const double bound = std::pow(2.0, static_cast<double>(f.size() * f.size()));
    EXPECT_LE(static_cast<double>(c.size()), bound) << f.text();
  }
}

TEST(BoxModalDepth, Examples) {
  EXPECT_EQ(box_modal_depth(parse_any("p U q")), 0U);
  EXPECT_EQ(box_modal_depth(parse_any("G G p")), 2U);
  EXPECT_EQ(box_modal_depth(nnf("<<1>>(G p | G q)")), 1U);
}

TEST(BoxModalDepth, DecompositionDoesNotIncreaseIt) {
  for (const auto& f : enumerate_formulas({6, 2, 1})) {
    if (!is_gamma(f)) continue;
    const std::size_t depth = box_modal_depth(f.body());
    for (const auto& pair : dec(f.body())) {
      EXPECT_LE(box_modal_depth(pair.present), depth) << f.text();
      EXPECT_LE(box_modal_depth(pair.future), depth) << f.text();
    }
  }
}

TEST(UntilAssertions, Examples) {
  EXPECT_TRUE(is_until_assertion_formula(nnf("<<1>>(p U q)")));
  EXPECT_TRUE(is_until_assertion_formula(nnf("<<1>>((p U q) & (r U t))")));
  EXPECT_FALSE(is_until_assertion_formula(nnf("<<1>>((p U q) & G r)")));
  EXPECT_TRUE(is_self_generating(parse_any("(p U q) & G r")));
  EXPECT_FALSE(is_self_generating(parse_any("X p")));
}

}  // namespace
}  // namespace atlplus

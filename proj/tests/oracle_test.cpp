#include <gtest/gtest.h>

#include "atlplus/generators.hpp"
#include "atlplus/oracle.hpp"
#include "test_support.hpp"

namespace atlplus {
namespace {

using testing::model;
using testing::nnf;

bool at(const ExplicitCGM& m, const StateKey& s, const std::string& f) {
  return eval_state_formula(m, s, parse_formula(f));
}

std::vector<ExplicitCGM> small_models(std::size_t limit) {
  std::vector<ExplicitCGM> out;
  for_each_model({2, 2, 2, 2}, true, [&](const ExplicitCGM& m) {
    if (out.size() < limit) out.push_back(m);
  });
  return out;
}

TEST(Oracle, ExampleVerdicts) {
  const ExplicitCGM robots = model("robots");
  EXPECT_FALSE(at(robots, "q0", "<<1>> X pos2"));
  EXPECT_TRUE(at(robots, "q0", "<<1>> X (pos0 | pos1 | pos2)"));
  EXPECT_TRUE(at(robots, "q0", "<<1,2>> X pos2"));
  EXPECT_TRUE(at(robots, "q1", "T"));

  const ExplicitCGM loop = model("loop");
  EXPECT_FALSE(at(loop, "s", "<<1>>(p U q)"));
  EXPECT_TRUE(at(loop, "s", "<<1>> G ~q"));
  EXPECT_FALSE(at(loop, "s", "<<1>>(F q & F p)"));
  EXPECT_TRUE(at(loop, "s", "(<<1>>G p) | (<<1>> F ~p)"));
  EXPECT_TRUE(at(loop, "s", "<<1>>(G p | G q)"));

  EXPECT_FALSE(at(model("two_state"), "s1", "<<1>> G q"));
  EXPECT_TRUE(at(model("two_state"), "s1", "<<1>> F q"));
  EXPECT_FALSE(at(model("abc"), "A", "<<2>>((<<1>>F p) U r)"));
  EXPECT_FALSE(at(model("abc"), "A", "<<2>>((<<1>>p) U r)"));
}

TEST(Oracle, AcceptsNegationsAndRelease) {
  const ExplicitCGM loop = model("loop");
  EXPECT_TRUE(at(loop, "s", "~<<1>>(p U q)"));
  EXPECT_TRUE(at(loop, "s", "<<1>>(q R p)"));
  EXPECT_FALSE(at(loop, "s", "~T"));
}

TEST(Oracle, VanillaAgreesWithTheGame) {
  OracleOptions game;
  game.force_game = true;
  const std::vector<std::string> bodies{"X p", "G p", "p U q", "X ~q", "G (p | q)", "(p & q) U ~p"};
  for (const auto& m : small_models(400)) {
    for (int k = 0; k <= m.agent_count(); ++k) {
      const Coalition a = k == 0 ? Coalition() : Coalition({k});
      for (const bool existential : {true, false}) {
        for (const auto& body : bodies) {
          const Formula f = Formula::quantified(existential, a, parse_any(body));
          ASSERT_EQ(eval_all(m, f), eval_all(m, f, game)) << f.text() << "\n" << m.to_text();
        }
      }
    }
  }
}

TEST(Oracle, FixpointEquivalences) {
  for (const auto& m : small_models(400)) {
    for (const char* q : {"<<1>>", "[[1]]", "<<>>"}) {
      const std::string Q = q;
      auto same = [&](const std::string& a, const std::string& b) {
        EXPECT_EQ(eval_all(m, parse_formula(a)), eval_all(m, parse_formula(b))) << a << " vs " << b;
      };
      same(Q + "G p", "p & " + Q + "X " + Q + "G p");
      same(Q + "(p U q)", "q | (p & " + Q + "X " + Q + "(p U q))");
    }
  }
}

TEST(Oracle, Duality) {
  const auto formulas = enumerate_formulas({4, 2, 1});
  for (const auto& m : small_models(200)) {
    if (m.agent_count() != 1) continue;
    for (const auto& f : formulas) {
      if (f.op() != Op::Univ) continue;
      const Formula dual = Formula::exist(f.coalition(), to_nnf(Formula::negation(f.body())));
      Truth a = eval_all(m, f), b = eval_all(m, dual);
      for (std::size_t s = 0; s < a.size(); ++s) ASSERT_NE(a[s], b[s]) << f.text();
    }
  }
}

TEST(Oracle, NnfPreservesTruth) {
  const std::vector<std::string> samples{"~<<1>>G q", "~<<1>>(p U q)", "<<1>>(p R q)", "~[[1]](p R ~q)",
                                         "~<<1>>X (p & q)", "~(<<1>>G p | [[1]]F q)"};
  for (const auto& m : small_models(400)) {
    if (m.agent_count() != 1) continue;
    for (const auto& s : samples) {
      EXPECT_EQ(eval_all(m, parse_formula(s)), eval_all(m, nnf(s))) << s;
    }
  }
}

TEST(Oracle, ProductCapIsEnforced) {
  OracleOptions tiny;
  tiny.max_product_nodes = 1;
  tiny.force_game = true;
  EXPECT_THROW(eval_all(model("robots"), parse_formula("<<1>>(G pos0 | (pos1 U pos2))"), tiny), OracleError);
}

TEST(MoveTables, CountAnswers) {
  const auto table = move_table(model("robots"), Coalition({1}));
  ASSERT_EQ(table.successors.size(), 3U);
  EXPECT_EQ(table.successors[0].size(), 2U);
  EXPECT_EQ(table.successors[0][0].size(), 2U);
}

}  // namespace
}  // namespace atlplus

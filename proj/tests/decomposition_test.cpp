#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "atlplus/decomposition.hpp"
#include "atlplus/generators.hpp"
#include "atlplus/oracle.hpp"
#include "test_support.hpp"

namespace atlplus {
namespace {

using testing::nnf;

std::string show(const DecSet& d) {
  std::string out;
  for (const auto& p : d) out += "<" + p.present.text() + ", " + p.future.text() + ">";
  return out;
}

std::vector<std::set<std::string>> clause_sets(const GammaAnalysis& a) {
  std::vector<std::set<std::string>> out;
  for (const auto& c : a.clauses) {
    std::set<std::string> s;
    for (const auto& f : c) s.insert(f.text());
    out.push_back(std::move(s));
  }
  return out;
}

// Flattens nested & and | so that associativity does not matter.
std::string flat(const Formula& f) {
  if (f.op() != Op::And && f.op() != Op::Or) return f.text();
  std::vector<std::string> parts;
  std::vector<Formula> todo{f};
  while (!todo.empty()) {
    Formula g = todo.back();
    todo.pop_back();
    if (g.op() == f.op()) {
      todo.push_back(g.lhs());
      todo.push_back(g.rhs());
    } else {
      parts.push_back(flat(g));
    }
  }
  std::sort(parts.begin(), parts.end());
  std::string out = f.op() == Op::And ? "and(" : "or(";
  for (const auto& p : parts) out += p + ",";
  return out + ")";
}

std::set<std::pair<std::string, std::string>> flat_set(const DecSet& d) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& p : d) out.insert({flat(p.present), flat(p.future)});
  return out;
}

TEST(Otimes, Examples) {
  const Formula p = parse_formula("p"), q = parse_formula("q"), t = Formula::top();
  EXPECT_EQ(show(otimes({{p, t}}, {{q, t}})), "<(p & q), T>");
  EXPECT_EQ(show(otimes(dec(parse_any("G p")), dec(parse_any("G q")))), "<(p & q), (G p & G q)>");
  const DecSet gamma = dec(parse_any("p U q"));
  EXPECT_EQ(otimes(gamma, {{t, t}}), gamma);
}

TEST(Oplus, Examples) {
  const Formula p = parse_formula("p"), t = Formula::top();
  EXPECT_EQ(show(oplus(dec(parse_any("G p")), dec(parse_any("G q")))), "<(p & q), (G p | G q)>");
  EXPECT_TRUE(oplus({{p, t}}, dec(parse_any("G q"))).empty());
}

TEST(Oplus, AssociativeUpToNormalization) {
  const std::vector<DecSet> inputs{dec(parse_any("G p")), dec(parse_any("p U q")), dec(parse_any("G q | (r U p)")),
                                   dec(parse_any("X p & G q"))};
  for (const auto& a : inputs) {
    for (const auto& b : inputs) {
      for (const auto& c : inputs) {
        EXPECT_EQ(flat_set(oplus(oplus(a, b), c)), flat_set(oplus(a, oplus(b, c))));
        EXPECT_EQ(flat_set(otimes(otimes(a, b), c)), flat_set(otimes(a, otimes(b, c))));
      }
    }
  }
}

TEST(Dec, WorkedExample) {
  EXPECT_EQ(show(dec(parse_any("G p | G q"))), "<p, G p><q, G q><(p & q), (G p | G q)>");
}

TEST(Dec, Cases) {
  EXPECT_EQ(show(dec(parse_any("p & q"))), "<(p & q), T>");
  EXPECT_EQ(show(dec(parse_any("X p"))), "<T, p>");
  EXPECT_EQ(show(dec(parse_any("p U q"))), "<p, (p U q)><q, T>");
  EXPECT_EQ(show(dec(parse_any("F q & F p"))), "<T, ((T U q) & (T U p))><p, (T U q)><q, (T U p)><(q & p), T>");
}

TEST(GammaComponents, WorkedExample) {
  EXPECT_EQ(testing::texts(gamma_components(nnf("<<1>>(G p | G q)"))),
            "(p & <<1>>X <<1>>G p); (q & <<1>>X <<1>>G q); ((p & q) & <<1>>X <<1>>(G p | G q))");
  EXPECT_EQ(testing::texts(gamma_components(nnf("[[1]](G p | G q)"))),
            "(p & [[1]]X [[1]]G p); (q & [[1]]X [[1]]G q); ((p & q) & [[1]]X [[1]](G p | G q))");
}

TEST(GammaComponents, OtherCases) {
  EXPECT_EQ(testing::texts(gamma_components(nnf("<<1>>p"))), "p");
  EXPECT_EQ(testing::texts(gamma_components(nnf("<<1>>(p U q)"))), "(p & <<1>>X <<1>>(p U q)); q");
}

TEST(Analyze, WorkedExample) {
  const auto a = analyze(nnf("<<1>>(G p | G q)"));
  std::vector<std::string> rows;
  for (const auto& c : a.clauses) rows.push_back(testing::texts(c));
  const std::vector<std::string> expected{
      "p; q",
      "p; q; <<1>>X <<1>>(G p | G q)",
      "p; <<1>>X <<1>>G q",
      "p; <<1>>X <<1>>G q; q",
      "p; <<1>>X <<1>>G q; <<1>>X <<1>>(G p | G q)",
      "<<1>>X <<1>>G p; q; p",
      "<<1>>X <<1>>G p; q",
      "<<1>>X <<1>>G p; q; <<1>>X <<1>>(G p | G q)",
      "<<1>>X <<1>>G p; <<1>>X <<1>>G q; p",
      "<<1>>X <<1>>G p; <<1>>X <<1>>G q; q",
      "<<1>>X <<1>>G p; <<1>>X <<1>>G q; <<1>>X <<1>>(G p | G q)",
  };
  EXPECT_EQ(rows, expected);
}

TEST(Analyze, SmallCases) {
  using Sets = std::vector<std::set<std::string>>;
  EXPECT_EQ(clause_sets(analyze(nnf("<<1>>(p U q)"))), (Sets{{"p", "q"}, {"q", "<<1>>X <<1>>(p U q)"}}));
  EXPECT_EQ(clause_sets(analyze(nnf("<<1>>G q"))), (Sets{{"q"}, {"<<1>>X <<1>>G q"}}));
  EXPECT_EQ(clause_sets(analyze(nnf("<<1>>(p | q)"))), (Sets{{"(p | q)"}}));
}

TEST(Analyze, SubsumptionDropsSupersets) {
  const auto a = analyze(nnf("<<1>>(G p | G q)"), true);
  for (std::size_t i = 0; i < a.clauses.size(); ++i) {
    for (std::size_t j = 0; j < a.clauses.size(); ++j) {
      if (i == j) continue;
      const auto x = clause_sets(a)[i], y = clause_sets(a)[j];
      EXPECT_FALSE(std::includes(y.begin(), y.end(), x.begin(), x.end()));
    }
  }
  EXPECT_EQ(a.clauses.size(), 4U);
}

// The CNF and the disjunction of components agree on every assignment to the atoms.
TEST(Analyze, CnfIsFaithful) {
  for (const auto& theta : enumerate_formulas({6, 2, 1})) {
    if (!is_gamma(theta)) continue;
    std::vector<std::vector<Formula>> terms;
    std::map<Formula, std::size_t> atom;
    for (const auto& component : gamma_components(theta)) {
      terms.push_back(top_level_conjuncts(component));
      for (const auto& a : terms.back()) atom.emplace(a, atom.size());
    }
    const auto analysis = analyze(theta);
    for (const auto& clause : analysis.clauses) {
      ASSERT_FALSE(clause.empty());
      for (const auto& a : clause) {
        ASSERT_TRUE(atom.count(a)) << theta.text() << " " << a.text();
        EXPECT_NE(a.op(), Op::True);
      }
    }
    ASSERT_LE(atom.size(), 16U);
    for (std::uint32_t bits = 0; bits < (1U << atom.size()); ++bits) {
      auto value = [&](const Formula& a) { return a.op() == Op::True || (bits >> atom.at(a) & 1U); };
      bool dnf = false;
      for (const auto& t : terms) dnf = dnf || std::all_of(t.begin(), t.end(), value);
      bool cnf = true;
      for (const auto& c : analysis.clauses) cnf = cnf && std::any_of(c.begin(), c.end(), value);
      ASSERT_EQ(dnf, cnf) << theta.text();
    }
  }
}

Formula disjunction(const std::vector<Formula>& fs) {
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = Formula::disj(out, fs[i]);
  return out;
}

// The components rebuild the gamma formula, checked by the oracle.
TEST(GammaComponents, ReconstructionIsOracleEquivalent) {
  std::vector<ExplicitCGM> models;
  for_each_model({2, 2, 2, 2}, true, [&](const ExplicitCGM& m) {
    if (models.size() < 300) models.push_back(m);
  });
  std::map<int, std::vector<Formula>> gammas;
  for (int k = 1; k <= 2; ++k) {
    for (const auto& f : enumerate_formulas({5, 2, k})) {
      if (is_gamma(f)) gammas[k].push_back(f);
    }
  }
  for (const auto& m : models) {
    for (const auto& theta : gammas[m.agent_count()]) {
      EXPECT_EQ(eval_all(m, theta), eval_all(m, disjunction(gamma_components(theta)))) << theta.text();
    }
  }
}

TEST(Closure, FeedsTheGammaRule) {
  const auto c = closure(nnf("<<1>>(G p | G q)"));
  for (const char* s : {"p", "q", "<<1>>X <<1>>G p", "<<1>>G p", "<<1>>X <<1>>(G p | G q)"}) {
    EXPECT_TRUE(c.count(parse_formula(s))) << s;
  }
}

}  // namespace
}  // namespace atlplus

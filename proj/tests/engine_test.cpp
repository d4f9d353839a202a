#include <gtest/gtest.h>

#include <set>

#include "atlplus/engine.hpp"
#include "atlplus/generators.hpp"
#include "atlplus/oracle.hpp"
#include "test_support.hpp"

namespace atlplus {
namespace {

using testing::model;
using testing::nnf;

Assertion at(const StateKey& s, const std::string& f) { return {s, nnf(f)}; }

std::string show(const std::vector<Clause>& cs) {
  std::string out;
  for (const auto& c : cs) out += to_string(c);
  return out;
}

CheckOptions proof_options(bool early_abort = true) {
  CheckOptions o;
  o.retain_proof = true;
  o.early_abort = early_abort;
  o.check_invariants = true;
  return o;
}

TEST(Clause, IsCanonical) {
  const Clause c = make_clause({at("s2", "q"), at("s1", "p"), at("s2", "q")});
  EXPECT_EQ(to_string(c), "{s1 |- p, s2 |- q}");
}

TEST(LiteralRules, Examples) {
  const ExplicitCGM two = model("two_state");
  EXPECT_TRUE(apply_literal_rules(make_clause({at("s1", "q")}), two).true_leaf);
  const auto reduced = apply_literal_rules(make_clause({at("s2", "q")}), two);
  EXPECT_FALSE(reduced.true_leaf);
  EXPECT_TRUE(reduced.reduced.empty());
  EXPECT_TRUE(apply_literal_rules(make_clause({at("s2", "T"), at("s2", "<<1>>G q")}), two).true_leaf);
  const auto kept = apply_literal_rules(make_clause({at("s2", "q"), at("s2", "<<1>>G q")}), two);
  EXPECT_EQ(to_string(kept.reduced), "{s2 |- <<1>>G q}");
  EXPECT_TRUE(apply_literal_rules(make_clause({at("s2", "~T")}), two).reduced.empty());
}

TEST(AlphaRule, SplitsAndKeepsContext) {
  const auto [l, r] = apply_alpha(make_clause({at("s", "p & q")}), at("s", "p & q"));
  EXPECT_EQ(to_string(l), "{s |- p}");
  EXPECT_EQ(to_string(r), "{s |- q}");
  const auto [l2, r2] = apply_alpha(make_clause({at("s", "p & q"), at("t", "r")}), at("s", "p & q"));
  EXPECT_EQ(to_string(l2), "{s |- p, t |- r}");
  EXPECT_EQ(to_string(r2), "{s |- q, t |- r}");
}

TEST(BetaRule, Examples) {
  const Assertion a = at("s", "(<<1>>G p) | (<<1>>F ~p)");
  EXPECT_EQ(to_string(apply_beta(make_clause({a}), a)), "{s |- <<1>>(T U ~p), s |- <<1>>G p}");
  const Assertion dup = at("s", "p | p");
  EXPECT_EQ(to_string(apply_beta(make_clause({dup}), dup)), "{s |- p}");
}

TEST(GammaRule, Examples) {
  const Assertion box = at("s1", "<<1>>G q");
  EXPECT_EQ(show(apply_gamma(make_clause({box}), box)), "{s1 |- q}{s1 |- <<1>>X <<1>>G q}");
  const Assertion until = at("s", "<<1>>(p U q)");
  EXPECT_EQ(show(apply_gamma(make_clause({until}), until)), "{s |- p, s |- q}{s |- <<1>>X <<1>>(p U q), s |- q}");
  const Assertion state = at("s", "<<1>>(p | q)");
  EXPECT_EQ(show(apply_gamma(make_clause({state}), state)), "{s |- (p | q)}");
}

TEST(NextRule, Examples) {
  EXPECT_EQ(show(build_next_expansions(make_clause({at("s1", "<<1>>X <<1>>G q")}), model("two_state"))),
            "{s2 |- <<1>>G q}");
  EXPECT_EQ(show(build_next_expansions(make_clause({at("q0", "<<>>X pos1")}), model("robots"))),
            "{q0 |- pos1}{q1 |- pos1}{q2 |- pos1}");
  EXPECT_EQ(show(build_next_expansions(make_clause({at("A", "[[1]]X p"), at("A", "<<2>>X q")}), model("abc"))),
            "{B |- p, B |- q, C |- p, C |- q}");
  // (x0 & (x1 | x2)) | ((y0 | y2) & (y0 | y1)), worked out by hand from the transition table
  EXPECT_EQ(show(build_next_expansions(make_clause({at("q0", "<<1>>X pos1"), at("q0", "[[2]]X pos2")}),
                                       model("robots"))),
            "{q0 |- pos1, q0 |- pos2, q2 |- pos2}{q0 |- pos1, q0 |- pos2, q1 |- pos2}"
            "{q0 |- pos2, q1 |- pos1, q2 |- pos1, q2 |- pos2}{q0 |- pos2, q1 |- pos1, q1 |- pos2, q2 |- pos1}");
}

TEST(SelectRule, Priorities) {
  const ExplicitCGM loop = model("loop");
  EXPECT_EQ(select_rule(make_clause({at("s", "p"), at("s", "<<1>>G q")}), loop, std::vector<Assertion>{}).rule,
            Rule::True);
  EXPECT_EQ(select_rule(make_clause({at("s", "q"), at("s", "<<1>>G q")}), loop, std::vector<Assertion>{}).rule,
            Rule::False);
  EXPECT_EQ(select_rule(make_clause({at("s", "<<1>>X q")}), loop, std::vector<Assertion>{}).rule, Rule::Next);
  EXPECT_EQ(select_rule(make_clause({at("s", "<<1>>X q"), at("s", "p | q")}), loop, std::vector<Assertion>{}).rule,
            Rule::Beta);
}

TEST(SelectRule, RoundRobinAlternatesPrincipals) {
  const ExplicitCGM loop = model("loop");
  const Clause c = make_clause({at("s", "<<1>>G p"), at("s", "<<1>>F ~p")});
  const auto first = select_rule(c, loop, std::vector<Assertion>{});
  ASSERT_EQ(first.rule, Rule::Gamma);
  const auto second = select_rule(c, loop, std::vector<Assertion>{c[*first.principal]});
  EXPECT_NE(*second.principal, *first.principal);
  const auto third = select_rule(c, loop, std::vector<Assertion>{c[*first.principal], c[*second.principal]});
  EXPECT_EQ(*third.principal, *first.principal);
}

TEST(ClassifyCycle, Examples) {
  EXPECT_EQ(classify_cycle(make_clause({at("s", "<<1>>(p U q)")})), CycleVerdict::Failure);
  EXPECT_EQ(classify_cycle(make_clause({at("s", "<<1>>(p U q)"), at("s", "<<1>>G p")})), CycleVerdict::Success);
  EXPECT_EQ(classify_cycle(make_clause({at("s", "<<1>>G ~q")})), CycleVerdict::Success);
}

TEST(Check, TwoStateFailurePath) {
  const auto r = check(model("two_state"), "s1", parse_formula("<<1>> G q"), proof_options(false));
  EXPECT_FALSE(r.verdict);
  ASSERT_TRUE(r.proof);
  EXPECT_EQ(r.proof->nodes.size(), 8U);
  EXPECT_EQ(r.proof->back_edge_count(), 1U);
  ASSERT_TRUE(r.failure_witness);
  const auto& w = *r.failure_witness;
  EXPECT_TRUE(w.ends_in_empty_clause);
  ASSERT_EQ(w.path.size(), 5U);
  EXPECT_EQ(to_string(w.path[0]), "{s1 |- <<1>>G q}");
  EXPECT_EQ(to_string(w.path[1]), "{s1 |- <<1>>X <<1>>G q}");
  EXPECT_EQ(to_string(w.path[2]), "{s2 |- <<1>>G q}");
  EXPECT_EQ(to_string(w.path[3]), "{s2 |- q}");
  EXPECT_TRUE(w.path[4].empty());
}

TEST(Check, LoopExamples) {
  const ExplicitCGM loop = model("loop");
  const auto until = check(loop, "s", parse_formula("<<1>>(p U q)"), proof_options());
  EXPECT_FALSE(until.verdict);
  ASSERT_TRUE(until.failure_witness);
  EXPECT_FALSE(until.failure_witness->ends_in_empty_clause);
  ASSERT_TRUE(until.failure_witness->entry);
  const Clause& entry = until.failure_witness->path[*until.failure_witness->entry];
  for (const auto& a : entry) EXPECT_TRUE(is_until_assertion_formula(a.formula)) << to_string(entry);

  EXPECT_TRUE(check(loop, "s", parse_formula("<<1>> G ~q"), proof_options()).verdict);

  const auto mixed = check(loop, "s", parse_formula("(<<1>>G p) | (<<1>> F ~p)"), proof_options());
  EXPECT_TRUE(mixed.verdict);
  bool success_on_box = false;
  for (const auto& node : mixed.proof->nodes) {
    for (const auto& e : node.back_edges) {
      const auto& target = mixed.proof->nodes[e.target - 1].clause;
      for (const auto& a : target) {
        if (a.formula == nnf("<<1>>G p") && e.cycle == CycleVerdict::Success) success_on_box = true;
      }
    }
  }
  EXPECT_TRUE(success_on_box);
}

TEST(Check, EventuallyBothFailsOnACycle) {
  const auto r = check(model("loop"), "s", parse_formula("<<1>>(F q & F p)"), proof_options());
  EXPECT_FALSE(r.verdict);
  ASSERT_TRUE(r.failure_witness && r.failure_witness->entry);
  const auto& w = *r.failure_witness;
  std::set<std::string> on_cycle;
  for (std::size_t i = *w.entry; i < w.path.size(); ++i) {
    for (const auto& a : w.path[i]) on_cycle.insert(a.formula.text());
  }
  EXPECT_TRUE(on_cycle.count("<<1>>((T U q) & (T U p))"));
  EXPECT_TRUE(on_cycle.count("<<1>>(T U q)") || on_cycle.count("<<1>>X <<1>>(T U q)"));
}

TEST(Check, RobotsVerdicts) {
  const ExplicitCGM robots = model("robots");
  EXPECT_FALSE(check(robots, "q0", parse_formula("<<1>> X pos2")).verdict);
  EXPECT_TRUE(check(robots, "q0", parse_formula("<<1>> X (pos0 | pos1 | pos2)")).verdict);
  EXPECT_TRUE(check(robots, "q0", parse_formula("<<1,2>> X pos2")).verdict);
}

TEST(Check, ThreeStateBothReadings) {
  const ExplicitCGM abc = model("abc");
  for (const char* f : {"<<2>>((<<1>>F p) U r)", "<<2>>((<<1>>p) U r)"}) {
    EXPECT_FALSE(check(abc, "A", parse_formula(f), proof_options(false)).verdict) << f;
    EXPECT_FALSE(check(abc, "A", parse_formula(f)).verdict) << f;
  }
}

TEST(Check, BudgetIsAnError) {
  CheckOptions o;
  o.node_budget = 2;
  EXPECT_THROW(check(model("abc"), "A", parse_formula("<<2>>((<<1>>F p) U r)"), o), BudgetExceeded);
}

TEST(Check, RejectsUnknownStates) {
  EXPECT_THROW(check(model("loop"), "nowhere", parse_formula("p")), ModelError);
}

TEST(Check, AgreesWithTheOracleInEveryMode) {
  std::vector<ExplicitCGM> models;
  for_each_model({2, 2, 2, 2}, true, [&](const ExplicitCGM& m) {
    if (models.size() < 120) models.push_back(m);
  });
  std::map<int, std::vector<Formula>> formulas;
  for (int k = 1; k <= 2; ++k) formulas[k] = enumerate_formulas({4, 2, k});
  for (const bool memo : {true, false}) {
    for (const auto rule : {CycleRule::Trace, CycleRule::Entry}) {
      if (rule == CycleRule::Entry && memo) continue;
      CheckOptions o;
      o.memoize = memo;
      o.cycle_rule = rule;
      o.check_invariants = true;
      for (const auto& m : models) {
        for (const auto& f : formulas[m.agent_count()]) {
          const Truth truth = eval_all(m, f);
          for (std::size_t s = 0; s < m.state_count(); ++s) {
            ASSERT_EQ(check(m, m.state_name(s), f, o).verdict, truth[s]) << f.text() << "\n" << m.to_text();
          }
        }
      }
    }
  }
}

TEST(Proof, BackEdgesTargetComponentRoots) {
  const ExplicitCGM loop = model("loop");
  const ExplicitCGM abc = model("abc");
  for (const char* f : {"<<1>>(p U q)", "<<1>> G ~q", "(<<1>>G p) | (<<1>> F ~p)", "<<1>>(F q & F p)"}) {
    const auto r = check(loop, "s", parse_formula(f), proof_options(false));
    EXPECT_TRUE(back_edges_target_scc_roots(*r.proof)) << f;
  }
  const auto r = check(abc, "A", parse_formula("<<2>>((<<1>>F p) U r)"), proof_options(false));
  EXPECT_TRUE(back_edges_target_scc_roots(*r.proof));
  EXPECT_FALSE(proof_sccs(*r.proof).empty());
}

TEST(Proof, LeafVerdicts) {
  const auto r = check(model("abc"), "A", parse_formula("<<2>>((<<1>>F p) U r)"), proof_options(false));
  for (const auto& node : r.proof->nodes) {
    if (node.rule == Rule::LeafTrue) EXPECT_EQ(node.verdict, Verdict::True);
    if (node.rule == Rule::LeafEmpty) EXPECT_EQ(node.verdict, Verdict::False);
    EXPECT_EQ(node.id, static_cast<std::size_t>(&node - r.proof->nodes.data()) + 1);
  }
}

TEST(Proof, NoClauseRepeatsOnAPath) {
  const auto r = check(model("abc"), "A", parse_formula("<<2>>((<<1>>F p) U r)"), proof_options(false));
  const auto& nodes = r.proof->nodes;
  std::vector<std::size_t> parent(nodes.size() + 1, 0);
  for (const auto& n : nodes) {
    for (auto c : n.children) parent[c] = n.id;
  }
  for (const auto& n : nodes) {
    if (n.rule == Rule::LeafTrue || n.rule == Rule::LeafEmpty) continue;
    for (std::size_t up = parent[n.id]; up; up = parent[up]) {
      EXPECT_NE(nodes[up - 1].clause, n.clause) << "node " << n.id;
    }
  }
}

TEST(Export, IsDeterministic) {
  for (const auto format : {ExportFormat::GraphText, ExportFormat::Json}) {
    const auto a = check(model("abc"), "A", parse_formula("<<2>>((<<1>>F p) U r)"), proof_options(false));
    const auto b = check(model("abc"), "A", parse_formula("<<2>>((<<1>>F p) U r)"), proof_options(false));
    EXPECT_EQ(export_proof(*a.proof, format), export_proof(*b.proof, format));
  }
}

TEST(Export, JsonFields) {
  const auto r = check(model("two_state"), "s1", parse_formula("<<1>> G q"), proof_options(false));
  const std::string json = export_proof(*r.proof, ExportFormat::Json);
  for (const char* key : {"\"id\"", "\"clause\"", "\"state\"", "\"formula\"", "\"rule\"", "\"children\"",
                          "\"backEdgeTo\"", "\"verdict\""}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
  EXPECT_EQ(export_proof(*r.proof, ExportFormat::GraphText).rfind("digraph", 0), 0U);
}

TEST(Check, EarlyAbortNeverExpandsMore) {
  const ExplicitCGM abc = model("abc");
  for (const char* f : {"<<2>>((<<1>>F p) U r)", "<<2>>((<<1>>p) U r)", "<<1>>G p", "[[2]]F p"}) {
    CheckOptions early, full;
    full.early_abort = false;
    const auto a = check(abc, "A", parse_formula(f), early);
    if (a.verdict) continue;
    EXPECT_LE(a.nodes_expanded, check(abc, "A", parse_formula(f), full).nodes_expanded) << f;
  }
}

}  // namespace
}  // namespace atlplus

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "atlplus/cli.hpp"

namespace atlplus {
namespace {

struct Output {
  int status;
  std::string out;
  std::string err;
};

Output run_with(RunConfig config) {
  std::ostringstream out, err;
  const int status = run(config, out, err);
  return {status, out.str(), err.str()};
}

RunConfig check_config(const std::string& model, const std::string& state, const std::string& formula) {
  RunConfig c;
  c.mode = Mode::Check;
  c.model_path = std::string(ATLPLUS_MODELS_DIR) + "/" + model + ".cgm";
  c.state = state;
  c.formula_text = formula;
  c.timing = false;
  return c;
}

TEST(Cli, CheckTrue) {
  const auto r = run_with(check_config("robots", "q0", "<<1,2>> X pos2"));
  EXPECT_EQ(r.status, exit_status::kTrue);
  EXPECT_EQ(r.out.rfind("TRUE\n", 0), 0U);
  EXPECT_NE(r.out.find("nodes_expanded: "), std::string::npos);
  EXPECT_NE(r.out.find("states_materialized: "), std::string::npos);
  EXPECT_EQ(r.out.find("wall_time_ms"), std::string::npos);
}

TEST(Cli, CheckFalsePrintsTheWitness) {
  auto config = check_config("two_state", "s1", "<<1>> G q");
  config.timing = true;
  const auto r = run_with(config);
  EXPECT_EQ(r.status, exit_status::kFalse);
  EXPECT_EQ(r.out.rfind("FALSE\n", 0), 0U);
  EXPECT_NE(r.out.find("witness_length: 5\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("wall_time_ms: "), std::string::npos);
}

TEST(Cli, OutputIsKeyValueLines) {
  const auto r = run_with(check_config("abc", "A", "<<2>>((<<1>>F p) U r)"));
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "FALSE");
  while (std::getline(lines, line)) EXPECT_NE(line.find(": "), std::string::npos) << line;
}

TEST(Cli, DeterministicStdout) {
  auto config = check_config("abc", "A", "<<2>>((<<1>>F p) U r)");
  config.retain_proof = true;
  EXPECT_EQ(run_with(config).out, run_with(config).out);
}

TEST(Cli, WritesProofFiles) {
  auto config = check_config("two_state", "s1", "<<1>> G q");
  config.proof_path = ::testing::TempDir() + "proof.json";
  config.export_format = ExportFormat::Json;
  EXPECT_EQ(run_with(config).status, exit_status::kFalse);
  std::ifstream in(config.proof_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  EXPECT_NE(buffer.str().find("\"backEdgeTo\""), std::string::npos);
  std::remove(config.proof_path.c_str());
}

TEST(Cli, Oracle) {
  auto config = check_config("loop", "s", "<<1>>(p U q)");
  config.mode = Mode::Oracle;
  const auto r = run_with(config);
  EXPECT_EQ(r.status, exit_status::kFalse);
  EXPECT_EQ(r.out, "FALSE\n");
}

TEST(Cli, Decompose) {
  RunConfig config;
  config.mode = Mode::Decompose;
  config.formula_text = "<<1>> (G p | G q)";
  const auto r = run_with(config);
  EXPECT_EQ(r.status, exit_status::kTrue);
  EXPECT_NE(r.out.find("component_0: (p & <<1>>X <<1>>G p)\n"), std::string::npos);
  EXPECT_NE(r.out.find("component_1: (q & <<1>>X <<1>>G q)\n"), std::string::npos);
  EXPECT_NE(r.out.find("component_2: ((p & q) & <<1>>X <<1>>(G p | G q))\n"), std::string::npos);
  EXPECT_EQ(r.out.find("component_3"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_with(check_config("loop", "s", "<<1>>(p U")).status, exit_status::kUsage);
  EXPECT_EQ(run_with(check_config("loop", "nowhere", "p")).status, exit_status::kUsage);
  EXPECT_EQ(run_with(check_config("loop", "s", "G p")).status, exit_status::kUsage);
  auto missing = check_config("loop", "s", "p");
  missing.model_path = "/nonexistent.cgm";
  const auto r = run_with(missing);
  EXPECT_EQ(r.status, exit_status::kUsage);
  EXPECT_FALSE(r.err.empty());
  RunConfig crosscheck;
  crosscheck.mode = Mode::Crosscheck;
  EXPECT_EQ(run_with(crosscheck).status, exit_status::kUsage);
}

TEST(Cli, BudgetExit) {
  auto config = check_config("abc", "A", "<<2>>((<<1>>F p) U r)");
  config.node_budget = 3;
  const auto r = run_with(config);
  EXPECT_EQ(r.status, exit_status::kBudget);
  EXPECT_NE(r.err.find("budget"), std::string::npos);
}

TEST(Cli, SeededCrosscheck) {
  RunConfig config;
  config.mode = Mode::Crosscheck;
  config.seeded = 50;
  config.timing = false;
  const auto r = run_with(config);
  EXPECT_EQ(r.status, exit_status::kTrue);
  EXPECT_EQ(r.out.rfind("AGREE\n", 0), 0U);
  EXPECT_EQ(r.out, run_with(config).out);
}

}  // namespace
}  // namespace atlplus

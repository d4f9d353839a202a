#include <iostream>

#include "CLI11.hpp"
#include "atlplus/cli.hpp"

int main(int argc, char** argv) {
  using namespace atlplus;
  RunConfig config;
  CLI::App app{"On-the-fly ATL+ model checker"};
  app.require_subcommand(1);

  auto add_search_flags = [&](CLI::App* cmd) {
    cmd->add_option("--node-budget", config.node_budget, "Abort after this many proof nodes");
    cmd->add_flag("--subsumption", config.subsumption, "Drop subsumed clauses in gamma analyses");
    cmd->add_option("--cycle-rule", config.cycle_rule, "Back-edge judgement: trace or entry")
        ->transform(CLI::CheckedTransformer(std::map<std::string, CycleRule>{{"trace", CycleRule::Trace},
                                                                             {"entry", CycleRule::Entry}}));
    cmd->add_flag("--no-memo", [&](std::int64_t) { config.memoize = false; },
                  "Decide every assertion inside one proof, without lemmas or reuse");
    cmd->add_flag("--no-timing", [&](std::int64_t) { config.timing = false; }, "Omit wall-clock figures");
  };

  auto* check = app.add_subcommand("check", "Build a proof for <formula> at <state>");
  check->add_option("model", config.model_path, "Model file")->required()->check(CLI::ExistingFile);
  check->add_option("state", config.state, "State name")->required();
  check->add_option("formula", config.formula_text, "Formula text");
  check->add_option("--formula-file", config.formula_path, "Read the formula from a file");
  check->add_flag("--retain-proof", config.retain_proof, "Keep the proof graph and report its size");
  check->add_option("--proof", config.proof_path, "Write the proof graph to this file");
  check->add_option("--format", config.export_format, "Proof export format: dot or json")
      ->transform(CLI::CheckedTransformer(std::map<std::string, ExportFormat>{{"dot", ExportFormat::GraphText},
                                                                              {"json", ExportFormat::Json}}));
  check->add_flag("--exhaustive", [&](std::int64_t) { config.early_abort = false; },
                  "Expand every branch instead of stopping at the first failure");
  add_search_flags(check);

  auto* oracle = app.add_subcommand("oracle", "Evaluate <formula> at <state> semantically");
  oracle->add_option("model", config.model_path, "Model file")->required()->check(CLI::ExistingFile);
  oracle->add_option("state", config.state, "State name")->required();
  oracle->add_option("formula", config.formula_text, "Formula text");
  oracle->add_option("--formula-file", config.formula_path, "Read the formula from a file");

  auto* crosscheck = app.add_subcommand("crosscheck", "Compare the checker with the oracle on generated instances");
  crosscheck->add_flag("--exhaustive", config.exhaustive, "All small models and formulas");
  crosscheck->add_option("--seeded", config.seeded, "Number of random instances");
  crosscheck->add_option("--seed", config.seed, "Random seed");
  crosscheck->add_option("--workers", config.workers, "Worker threads");
  crosscheck->add_option("--max-size", config.max_formula_size, "Largest formula size");
  crosscheck->add_option("--complete-size", config.complete_size,
                         "Exhaustive mode: every formula up to this size, samples above it");
  crosscheck->add_option("--samples-per-size", config.samples_per_size, "Exhaustive mode: sampled formulas per larger size");
  add_search_flags(crosscheck);

  auto* decompose = app.add_subcommand("decompose", "Print dec pairs, components and the CNF analysis");
  decompose->add_option("formula", config.formula_text, "Formula text")->required();
  decompose->add_flag("--subsumption", config.subsumption, "Drop subsumed clauses");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_status::kUsage;
  }

  if (check->parsed()) config.mode = Mode::Check;
  else if (oracle->parsed()) config.mode = Mode::Oracle;
  else if (crosscheck->parsed()) config.mode = Mode::Crosscheck;
  else config.mode = Mode::Decompose;
  return run(config, std::cout, std::cerr);
}

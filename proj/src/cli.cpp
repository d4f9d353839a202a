#include "atlplus/cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "atlplus/crosscheck.hpp"
#include "atlplus/decomposition.hpp"
#include "atlplus/normal_form.hpp"
#include "atlplus/oracle.hpp"
#include "atlplus/parser.hpp"

namespace atlplus {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Formula load_formula(const RunConfig& config) {
  if (!config.formula_path.empty()) return parse_formula(read_file(config.formula_path));
  if (config.formula_text.empty()) throw UsageError("no formula given");
  return parse_formula(config.formula_text);
}

void print_witness(const FailureWitness& w, std::ostream& out) {
  out << "witness_length: " << w.path.size() << '\n';
  out << "witness_end: " << (w.ends_in_empty_clause ? "empty_clause" : "back_edge") << '\n';
  if (w.entry) out << "witness_entry: " << *w.entry << '\n';
  for (std::size_t i = 0; i < w.path.size(); ++i) out << "witness_" << i << ": " << to_string(w.path[i]) << '\n';
}

int run_check(const RunConfig& config, std::ostream& out) {
  if (config.state.empty()) throw UsageError("a state name is required");
  const ExplicitCGM model = load_explicit_file(config.model_path);
  const Formula formula = load_formula(config);
  CheckOptions options;
  options.early_abort = config.early_abort;
  options.node_budget = config.node_budget;
  options.subsumption = config.subsumption;
  options.memoize = config.memoize;
  options.cycle_rule = config.cycle_rule;
  options.retain_proof = config.retain_proof || !config.proof_path.empty();
  const CheckResult result = check(model, config.state, formula, options);

  out << (result.verdict ? "TRUE" : "FALSE") << '\n';
  out << "nodes_expanded: " << result.nodes_expanded << '\n';
  out << "distinct_clauses: " << result.distinct_clauses << '\n';
  out << "states_materialized: " << result.states_materialized << '\n';
  out << "back_edges: " << result.back_edges << '\n';
  out << "max_depth: " << result.max_depth << '\n';
  if (config.timing) out << "wall_time_ms: " << std::fixed << std::setprecision(3) << result.wall_seconds * 1000 << '\n';
  if (result.proof) {
    out << "proof_vertices: " << result.proof->nodes.size() << '\n';
    out << "proof_back_edges: " << result.proof->back_edge_count() << '\n';
  }
  if (result.failure_witness) print_witness(*result.failure_witness, out);
  if (!config.proof_path.empty()) {
    std::ofstream file(config.proof_path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + config.proof_path + "'");
    file << export_proof(*result.proof, config.export_format);
  }
  return result.verdict ? exit_status::kTrue : exit_status::kFalse;
}

int run_oracle(const RunConfig& config, std::ostream& out) {
  if (config.state.empty()) throw UsageError("a state name is required");
  const ExplicitCGM model = load_explicit_file(config.model_path);
  const bool verdict = eval_state_formula(model, config.state, load_formula(config));
  out << (verdict ? "TRUE" : "FALSE") << '\n';
  return verdict ? exit_status::kTrue : exit_status::kFalse;
}

int run_decompose(const RunConfig& config, std::ostream& out) {
  const Formula theta = to_nnf(load_formula(config));
  if (!is_gamma(theta)) throw UsageError("not a strategic formula with a temporal body: " + theta.text());
  out << "formula: " << theta.text() << '\n';
  const auto pairs = dec(theta.body());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out << "dec_" << i << ": <" << pairs[i].present.text() << ", " << pairs[i].future.text() << ">\n";
  }
  const auto components = gamma_components(theta);
  for (std::size_t i = 0; i < components.size(); ++i) out << "component_" << i << ": " << components[i].text() << '\n';
  const auto analysis = analyze(theta, config.subsumption);
  for (std::size_t i = 0; i < analysis.clauses.size(); ++i) {
    out << "clause_" << i << ": [";
    for (std::size_t j = 0; j < analysis.clauses[i].size(); ++j) out << (j ? ", " : "") << analysis.clauses[i][j].text();
    out << "]\n";
  }
  return exit_status::kTrue;
}

int run_crosscheck(const RunConfig& config, std::ostream& out) {
  if (config.exhaustive == (config.seeded > 0)) throw UsageError("choose exactly one of --exhaustive and --seeded N");
  CrosscheckConfig cc;
  cc.options.node_budget = config.node_budget;
  cc.options.subsumption = config.subsumption;
  cc.options.cycle_rule = config.cycle_rule;
  cc.options.early_abort = config.early_abort;
  cc.options.memoize = config.memoize;
  cc.workers = config.workers;
  cc.compare_exhaustive = config.early_abort;
  UniverseBounds universe;
  universe.complete_size = config.complete_size;
  universe.max_size = config.max_formula_size ? config.max_formula_size : 9;
  universe.samples_per_size = config.samples_per_size;
  universe.seed = config.seed;
  const CrosscheckReport report =
      config.exhaustive ? crosscheck_exhaustive({2, 2, 2, 2}, universe, cc)
                        : crosscheck_seeded(config.seeded, config.seed, {4, 2, 3, 2},
                                            config.max_formula_size ? config.max_formula_size : 13, cc);
  out << (report.clean() ? "AGREE" : "DISAGREE") << '\n';
  if (config.exhaustive) {
    out << "universe: all formulas up to size " << universe.complete_size;
    if (universe.max_size > universe.complete_size) {
      out << ", " << universe.samples_per_size << " sampled per size up to " << universe.max_size;
    }
    out << '\n';
  }
  out << summary(report);
  if (config.timing) out << "wall_time_s: " << std::fixed << std::setprecision(1) << report.seconds << '\n';
  return report.clean() ? exit_status::kTrue : exit_status::kFalse;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.mode) {
      case Mode::Check: return run_check(config, out);
      case Mode::Oracle: return run_oracle(config, out);
      case Mode::Decompose: return run_decompose(config, out);
      case Mode::Crosscheck: return run_crosscheck(config, out);
    }
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return exit_status::kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_status::kUsage;
  }
  return exit_status::kUsage;
}

}  // namespace atlplus

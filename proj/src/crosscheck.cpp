#include "atlplus/crosscheck.hpp"

#include <chrono>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "atlplus/decomposition.hpp"
#include "atlplus/normal_form.hpp"
#include "atlplus/oracle.hpp"

namespace atlplus {

namespace {

void merge(CrosscheckReport& into, const CrosscheckReport& part, std::size_t max_reported) {
  into.models += part.models;
  into.instances += part.instances;
  into.agreements += part.agreements;
  into.false_instances += part.false_instances;
  into.budget_failures += part.budget_failures;
  into.bound_violations += part.bound_violations;
  into.dominance_violations += part.dominance_violations;
  into.max_nodes = std::max(into.max_nodes, part.max_nodes);
  into.total_nodes += part.total_nodes;
  for (const auto& d : part.disagreements) {
    if (into.disagreements.size() < max_reported) into.disagreements.push_back(d);
  }
}

class Checker {
 public:
  explicit Checker(const CrosscheckConfig& config) : config_(config) {}

  void run(const ExplicitCGM& model, const std::vector<Formula>& formulas, CrosscheckReport& report) {
    ++report.models;
    for (const auto& f : formulas) {
      const Truth truth = eval_all(model, f);
      for (std::size_t s = 0; s < model.state_count(); ++s) {
        ++report.instances;
        const StateKey& state = model.state_name(s);
        CheckResult result;
        try {
          result = check(model, state, f, config_.options);
        } catch (const BudgetExceeded&) {
          ++report.budget_failures;
          continue;
        }
        report.max_nodes = std::max(report.max_nodes, result.nodes_expanded);
        report.total_nodes += result.nodes_expanded;
        if (result.verdict == truth[s]) {
          ++report.agreements;
        } else if (report.disagreements.size() < config_.max_reported) {
          report.disagreements.push_back({model.to_text(), state, f.text(), result.verdict, truth[s]});
        }
        if (!result.verdict) {
          ++report.false_instances;
          if (config_.compare_exhaustive) {
            CheckOptions full = config_.options;
            full.early_abort = false;
            try {
              if (check(model, state, f, full).nodes_expanded < result.nodes_expanded) ++report.dominance_violations;
            } catch (const BudgetExceeded&) {
              // exhaustive mode ran out of budget: it expanded more, which is consistent
            }
          }
        }
        if (config_.check_bounds) {
          const std::size_t exponent = closure_size(f) * result.states_materialized;
          if (exponent < 63 && result.distinct_clauses > (std::size_t{1} << exponent)) ++report.bound_violations;
        }
      }
    }
  }

 private:
  std::size_t closure_size(const Formula& f) {
    auto it = closures_.find(f);
    if (it != closures_.end()) return it->second;
    return closures_.emplace(f, closure(to_nnf(f)).size()).first->second;
  }

  const CrosscheckConfig& config_;
  std::map<Formula, std::size_t> closures_;
};

}  // namespace

CrosscheckReport crosscheck_models(const std::vector<ExplicitCGM>& models,
                                   const std::function<std::vector<Formula>(int agents)>& formulas,
                                   const CrosscheckConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  std::map<int, std::vector<Formula>> by_agents;
  for (const auto& m : models) {
    if (!by_agents.count(m.agent_count())) by_agents.emplace(m.agent_count(), formulas(m.agent_count()));
  }

  const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, models.size()));
  std::vector<CrosscheckReport> parts(workers);
  auto work = [&](std::size_t w) {
    Checker checker(config);
    for (std::size_t i = w; i < models.size(); i += workers) {
      checker.run(models[i], by_agents.at(models[i].agent_count()), parts[w]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }

  CrosscheckReport report;
  for (const auto& [agents, fs] : by_agents) report.formulas += fs.size();
  for (const auto& part : parts) merge(report, part, config.max_reported);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<Formula> universe_formulas(const UniverseBounds& bounds, int propositions, int agents) {
  std::vector<Formula> out = enumerate_formulas({bounds.complete_size, propositions, agents});
  if (bounds.max_size <= bounds.complete_size) return out;
  std::set<Formula> seen(out.begin(), out.end());
  std::mt19937_64 rng(bounds.seed + static_cast<std::uint64_t>(agents));
  const FormulaBounds fb{bounds.max_size, propositions, agents};
  for (std::size_t size = bounds.complete_size + 1; size <= bounds.max_size; ++size) {
    std::size_t found = 0;
    for (std::size_t attempt = 0; found < bounds.samples_per_size && attempt < 100 * bounds.samples_per_size; ++attempt) {
      Formula f = random_formula(rng, fb, size);
      if (f.size() != size || !seen.insert(f).second) continue;
      out.push_back(std::move(f));
      ++found;
    }
  }
  return out;
}

CrosscheckReport crosscheck_exhaustive(const ModelBounds& model_bounds, const UniverseBounds& formula_bounds,
                                       const CrosscheckConfig& config) {
  std::vector<ExplicitCGM> models;
  for_each_model(model_bounds, true, [&](const ExplicitCGM& m) { models.push_back(m); });
  return crosscheck_models(
      models, [&](int agents) { return universe_formulas(formula_bounds, model_bounds.propositions, agents); },
      config);
}

CrosscheckReport crosscheck_seeded(std::size_t count, std::uint64_t seed, const ModelBounds& model_bounds,
                                   std::size_t max_formula_size, const CrosscheckConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  CrosscheckReport report;
  Checker checker(config);
  for (std::size_t i = 0; i < count; ++i) {
    const ExplicitCGM model = random_model(rng, model_bounds);
    const std::size_t size = std::uniform_int_distribution<std::size_t>(1, max_formula_size)(rng);
    const Formula f = random_formula(rng, {max_formula_size, model_bounds.propositions, model.agent_count()}, size);
    CrosscheckReport part;
    checker.run(model, {f}, part);
    merge(report, part, config.max_reported);
    ++report.formulas;
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string summary(const CrosscheckReport& report) {
  std::ostringstream out;
  out << "models: " << report.models << '\n'
      << "formulas: " << report.formulas << '\n'
      << "instances: " << report.instances << '\n'
      << "agreements: " << report.agreements << '\n'
      << "false_instances: " << report.false_instances << '\n'
      << "budget_failures: " << report.budget_failures << '\n'
      << "bound_violations: " << report.bound_violations << '\n'
      << "dominance_violations: " << report.dominance_violations << '\n'
      << "max_nodes: " << report.max_nodes << '\n'
      << "total_nodes: " << report.total_nodes << '\n';
  for (const auto& d : report.disagreements) {
    out << "disagreement: state " << d.state << " formula " << d.formula << " engine "
        << (d.engine ? "TRUE" : "FALSE") << " oracle " << (d.oracle ? "TRUE" : "FALSE") << '\n';
    std::istringstream model(d.model);
    for (std::string line; std::getline(model, line);) out << "  " << line << '\n';
  }
  return out.str();
}

}  // namespace atlplus

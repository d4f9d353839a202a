#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "atlplus/engine.hpp"

namespace atlplus {

enum class Mode { Check, Oracle, Crosscheck, Decompose };

struct RunConfig {
  Mode mode = Mode::Check;
  std::string model_path;
  std::string formula_text;
  std::string formula_path;
  std::string state;

  bool retain_proof = false;
  std::string proof_path;  // written when non-empty
  ExportFormat export_format = ExportFormat::GraphText;
  bool early_abort = true;
  std::size_t node_budget = 1'000'000;
  bool subsumption = false;
  bool memoize = true;
  CycleRule cycle_rule = CycleRule::Trace;
  bool timing = true;

  bool exhaustive = false;
  std::size_t seeded = 0;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::size_t max_formula_size = 0;  // 0: mode default
  std::size_t complete_size = 4;     // exhaustive mode: enumerate every formula up to this size
  std::size_t samples_per_size = 100;
};

namespace exit_status {
inline constexpr int kTrue = 0;
inline constexpr int kFalse = 1;
inline constexpr int kUsage = 2;
inline constexpr int kBudget = 3;
}  // namespace exit_status

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace atlplus

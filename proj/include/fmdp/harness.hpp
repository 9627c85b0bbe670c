#pragma once

// Experiment configs, seed batches and CSV output.
//
//   [environment]
//   spec = jao:delta=0.25,eps=0.1,copies=2,H=6
//
//   [agent]
//   kind = f_ucbvi            # f_ucbvi | f_euler | l1_baseline
//   reward_mode = known       # known | unknown
//   delta = 0.1
//   variance_convention = unbiased
//
//   [run]
//   episodes = 1000
//   seeds = 0 1 2             # blanks or commas
//   output = results

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fmdp/estimation.hpp"
#include "fmdp/learner.hpp"
#include "fmdp/structured_text.hpp"

namespace fmdp {

struct ExperimentConfig {
  std::string environment;
  AgentKind agent = AgentKind::f_ucbvi;
  bool reward_known = true;
  double delta = 0.1;
  VarianceConvention variance_convention = VarianceConvention::unbiased;
  std::size_t episodes = 1000;
  std::vector<std::uint64_t> seeds{0};
  std::string output = "results";
};

struct ConfigParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<TextDiagnostic> diagnostics;

  bool ok() const { return config.has_value(); }
};

/// Validates everything it can and reports all problems with line numbers.
ConfigParseResult parse_config(std::string_view text);
/// Throws ConfigError carrying every diagnostic, one per line.
ExperimentConfig parse_config_or_throw(std::string_view text);

std::string format_diagnostics(const std::vector<TextDiagnostic>& diagnostics);

struct RunOptions {
  std::size_t jobs = 1;
  /// Replaces config.output when set.
  std::optional<std::filesystem::path> output;
  /// Added to every seed (FACTORED_RL_SEED_OFFSET).
  std::int64_t seed_offset = 0;
};

struct ExperimentReport {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> seed_files;
  std::filesystem::path summary_file;
  std::vector<std::uint64_t> seeds;
  std::vector<double> final_cumulative_regret;
};

/// Runs every seed, writes seed_<seed>.csv per seed and summary.csv.
/// Throws IoError when the output cannot be written and ConsistencyError on
/// an invariant violation.
ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

AgentConfig agent_config_for(const ExperimentConfig& config, std::uint64_t seed);

std::string regret_curve_csv(const RegretCurve& curve);
std::string summary_csv(const std::vector<const RegretCurve*>& curves);

/// Type-7 (linear interpolation) sample quantile; `values` need not be sorted.
double quantile(std::vector<double> values, double q);

/// Reads FACTORED_RL_SEED_OFFSET; 0 when unset. Throws ConfigError when it is
/// not an integer.
std::int64_t seed_offset_from_environment();

}  // namespace fmdp

// fmdp: run regret experiments and property suites on factored MDPs.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fmdp/environments.hpp"
#include "fmdp/errors.hpp"
#include "fmdp/harness.hpp"
#include "fmdp/model_io.hpp"
#include "fmdp/suites.hpp"

#ifndef FMDP_VERSION
#define FMDP_VERSION "0.0.0"
#endif

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kIoError = 2, kInvariantError = 3 };

int run_command(const std::string& config_path, std::size_t jobs, const std::string& out) {
  std::string text;
  try {
    text = fmdp::read_text_file(config_path);
  } catch (const fmdp::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  }
  const auto parsed = fmdp::parse_config(text);
  if (!parsed.ok()) {
    std::cerr << config_path << ":\n" << fmdp::format_diagnostics(parsed.diagnostics);
    return kConfigError;
  }
  try {
    fmdp::RunOptions options;
    options.jobs = jobs;
    if (!out.empty()) options.output = out;
    options.seed_offset = fmdp::seed_offset_from_environment();
    const auto report = fmdp::run_experiment(*parsed.config, options);
    for (std::size_t i = 0; i < report.seeds.size(); ++i) {
      std::cout << "seed " << report.seeds[i] << " cumulative_regret "
                << fmdp::format_double(report.final_cumulative_regret[i]) << " -> "
                << report.seed_files[i].string() << "\n";
    }
    std::cout << "summary -> " << report.summary_file.string() << "\n";
    return kOk;
  } catch (const fmdp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const fmdp::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const fmdp::Error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariantError;
  }
}

int suite_command(const std::string& name, std::size_t jobs) {
  try {
    fmdp::SuiteOptions options;
    options.jobs = jobs;
    const auto report = fmdp::run_suite(name, options);
    std::cout << fmdp::format_report(report);
    return report.passed() ? kOk : kInvariantError;
  } catch (const fmdp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimistic learning on factored MDPs: regret experiments and property suites."};
  app.set_version_flag("--version", std::string("fmdp ") + FMDP_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(
      "Exit codes: 0 success, 1 config error, 2 I/O error, 3 invariant violation or failed check.\n"
      "FACTORED_RL_SEED_OFFSET=<int> shifts every seed of `run`.\n\n"
      "Environment spec grammar (`name:key=value,key=value`):\n" +
      fmdp::environment_grammar());

  std::size_t jobs = 1;
  std::string out;
  app.add_option("--jobs", jobs, "Parallel worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Output directory (overrides [run] output)");

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  std::string config_path;
  run->add_option("config", config_path, "Config file")->required();

  auto* suite = app.add_subcommand("suite", "Run a property suite (invariants, optimism, "
                                            "lowerbound, oracle, regret)");
  std::string suite_name;
  suite->add_option("name", suite_name, "Suite name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  if (*run) return run_command(config_path, jobs, out);
  return suite_command(suite_name, jobs);
}

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "fmdp/errors.hpp"
#include "fmdp/harness.hpp"
#include "fmdp/model_io.hpp"

using namespace fmdp;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fmdp_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(ParseConfig, Defaults) {
  const auto config = parse_config_or_throw("[environment]\nspec = chain\n");
  EXPECT_EQ(config.environment, "chain");
  EXPECT_EQ(config.agent, AgentKind::f_ucbvi);
  EXPECT_TRUE(config.reward_known);
  EXPECT_EQ(config.delta, 0.1);
  EXPECT_EQ(config.variance_convention, VarianceConvention::unbiased);
  EXPECT_EQ(config.episodes, 1000u);
  EXPECT_EQ(config.seeds, (std::vector<std::uint64_t>{0}));
  EXPECT_EQ(config.output, "results");
}

TEST(ParseConfig, FullConfig) {
  const auto config = parse_config_or_throw(
      "# experiment\n"
      "[environment]\nspec = mab_like:eps=0.2,H=3\n"
      "[agent]\nkind = f_euler\nreward_mode = unknown\ndelta = 0.05\nvariance_convention = biased\n"
      "[run]\nepisodes = 25\nseeds = 3, 1 2\noutput = out/x\n");
  EXPECT_EQ(config.agent, AgentKind::f_euler);
  EXPECT_FALSE(config.reward_known);
  EXPECT_EQ(config.delta, 0.05);
  EXPECT_EQ(config.variance_convention, VarianceConvention::biased);
  EXPECT_EQ(config.episodes, 25u);
  EXPECT_EQ(config.seeds, (std::vector<std::uint64_t>{3, 1, 2}));
  EXPECT_EQ(config.output, "out/x");
}

TEST(ParseConfig, UnknownAgentKindIsOneDiagnosticNamingTheKinds) {
  const auto result = parse_config("[environment]\nspec = chain\n[agent]\nkind = ucb2\n");
  EXPECT_FALSE(result.ok());
  ASSERT_EQ(result.diagnostics.size(), 1u);
  EXPECT_EQ(result.diagnostics[0].line, 4u);
  for (const auto& name : agent_kind_names()) {
    EXPECT_NE(result.diagnostics[0].message.find(name), std::string::npos);
  }
}

TEST(ParseConfig, CollectsEveryProblemWithLineNumbers) {
  const auto result = parse_config(
      "[environment]\n"
      "spec = jao:delta=0.9\n"
      "[agent]\n"
      "delta = 1.5\n"
      "colour = red\n"
      "[run]\n"
      "seeds = 1 2 1\n"
      "episodes = -3\n"
      "[extra]\n");
  EXPECT_FALSE(result.ok());
  std::vector<std::size_t> lines;
  for (const auto& d : result.diagnostics) lines.push_back(d.line);
  EXPECT_EQ(lines, (std::vector<std::size_t>{2, 4, 5, 7, 8, 9}));
  const auto text = format_diagnostics(result.diagnostics);
  EXPECT_NE(text.find("line 7: duplicate seed 1"), std::string::npos);
}

TEST(ParseConfig, MissingEnvironment) {
  const auto result = parse_config("[run]\nepisodes = 3\n");
  EXPECT_FALSE(result.ok());
  ASSERT_EQ(result.diagnostics.size(), 1u);
  EXPECT_NE(result.diagnostics[0].message.find("environment"), std::string::npos);
  EXPECT_THROW(parse_config_or_throw("[run]\nepisodes = 3\n"), ConfigError);
}

TEST(Quantile, TypeSeven) {
  EXPECT_EQ(quantile({3.0, 1.0, 2.0, 4.0}, 0.5), 2.5);
  EXPECT_EQ(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.25), 2.0);
  EXPECT_DOUBLE_EQ(quantile({1.0, 2.0, 3.0, 4.0}, 0.25), 1.75);
  EXPECT_EQ(quantile({7.0}, 0.75), 7.0);
  EXPECT_THROW(quantile({}, 0.5), ParameterError);
}

TEST(Csv, RegretCurveFormat) {
  RegretCurve curve;
  curve.records.push_back({0, 0, 1.0, 0.5, 0.5, 0.5});
  curve.records.push_back({1, 0, 1.0, 1.0, 0.0, 0.5});
  const auto csv = regret_curve_csv(curve);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "episode,instantaneous_regret,cumulative_regret,v_star,v_pi");
  EXPECT_NE(csv.find("\n1,"), std::string::npos);
  EXPECT_NE(csv.find("\n2,"), std::string::npos);
  const auto summary = summary_csv({&curve, &curve});
  EXPECT_EQ(summary.substr(0, summary.find('\n')), "episode,mean,median,q25,q75,iqr");
}

TEST(RunExperiment, WritesOneFilePerSeedPlusSummary) {
  auto config = parse_config_or_throw(
      "[environment]\nspec = mab_like:eps=0.2,H=3\n[run]\nepisodes = 20\nseeds = 0 1 2 3 4 5 6 7 8 9\n");
  const auto dir = scratch_dir("ten");
  RunOptions options;
  options.output = dir;
  options.jobs = 4;
  const auto report = run_experiment(config, options);
  EXPECT_EQ(report.seed_files.size(), 10u);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 11u);
  const auto summary = read_text_file(report.summary_file.string());
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 21);
  const auto seed_csv = read_text_file(report.seed_files[3].string());
  EXPECT_EQ(std::count(seed_csv.begin(), seed_csv.end(), '\n'), 21);
  fs::remove_all(dir);
}

TEST(RunExperiment, ByteIdenticalAcrossRunsAndJobCounts) {
  auto config = parse_config_or_throw(
      "[environment]\nspec = benchmark\n[agent]\nkind = f_euler\nreward_mode = unknown\n"
      "[run]\nepisodes = 15\nseeds = 4 5 6\n");
  const auto a = scratch_dir("a");
  const auto b = scratch_dir("b");
  RunOptions options;
  options.output = a;
  options.jobs = 1;
  const auto ra = run_experiment(config, options);
  options.output = b;
  options.jobs = 3;
  const auto rb = run_experiment(config, options);
  for (std::size_t i = 0; i < ra.seed_files.size(); ++i) {
    EXPECT_EQ(read_text_file(ra.seed_files[i].string()), read_text_file(rb.seed_files[i].string()));
  }
  EXPECT_EQ(read_text_file(ra.summary_file.string()), read_text_file(rb.summary_file.string()));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(RunExperiment, SeedOffsetShiftsSeeds) {
  auto config = parse_config_or_throw("[environment]\nspec = chain\n[run]\nepisodes = 2\nseeds = 1 2\n");
  const auto dir = scratch_dir("offset");
  RunOptions options;
  options.output = dir;
  options.seed_offset = 100;
  const auto report = run_experiment(config, options);
  EXPECT_EQ(report.seeds, (std::vector<std::uint64_t>{101, 102}));
  EXPECT_TRUE(fs::exists(dir / "seed_101.csv"));
  fs::remove_all(dir);
}

TEST(RunExperiment, UnwritableOutputIsAnIoError) {
  auto config = parse_config_or_throw("[environment]\nspec = chain\n[run]\nepisodes = 2\n");
  const auto dir = scratch_dir("blocked");
  write_text_file(dir.string(), "not a directory");
  RunOptions options;
  options.output = dir / "sub";
  EXPECT_THROW(run_experiment(config, options), IoError);
  fs::remove_all(dir);
}

TEST(SeedOffset, FromEnvironment) {
  ::unsetenv("FACTORED_RL_SEED_OFFSET");
  EXPECT_EQ(seed_offset_from_environment(), 0);
  ::setenv("FACTORED_RL_SEED_OFFSET", "-4", 1);
  EXPECT_EQ(seed_offset_from_environment(), -4);
  ::setenv("FACTORED_RL_SEED_OFFSET", "four", 1);
  EXPECT_THROW(seed_offset_from_environment(), ConfigError);
  ::unsetenv("FACTORED_RL_SEED_OFFSET");
}

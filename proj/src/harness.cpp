#include "fmdp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "fmdp/environments.hpp"
#include "fmdp/errors.hpp"
#include "fmdp/model_io.hpp"

namespace fmdp {

namespace {

using Keys = std::vector<std::string_view>;

const std::vector<std::pair<std::string_view, Keys>>& known_sections() {
  static const std::vector<std::pair<std::string_view, Keys>> sections{
      {"environment", {"spec"}},
      {"agent", {"kind", "reward_mode", "delta", "variance_convention"}},
      {"run", {"episodes", "seeds", "output"}},
  };
  return sections;
}

const Keys* keys_of(std::string_view section) {
  for (const auto& [name, keys] : known_sections()) {
    if (name == section) return &keys;
  }
  return nullptr;
}

}  // namespace

ConfigParseResult parse_config(std::string_view text) {
  ConfigParseResult result;
  auto& diag = result.diagnostics;
  const auto doc = parse_structured_text(text, diag);
  ExperimentConfig config;
  bool have_environment = false;

  for (const auto& section : doc.sections) {
    const auto* keys = keys_of(section.name);
    if (!keys) {
      diag.push_back({section.line, "unknown section [" + section.name +
                                        "] (valid: environment, agent, run)"});
      continue;
    }
    for (const auto& entry : section.entries) {
      if (std::find(keys->begin(), keys->end(), entry.key) == keys->end()) {
        diag.push_back({entry.line, "unknown key '" + entry.key + "' in [" + section.name + "]"});
      }
    }
  }

  auto entry_of = [&](std::string_view section, std::string_view key) -> const TextEntry* {
    const auto* s = doc.find(section);
    return s ? s->find(key) : nullptr;
  };

  if (const auto* e = entry_of("environment", "spec")) {
    try {
      environment_from_spec(e->value);
      config.environment = e->value;
      have_environment = true;
    } catch (const Error& err) {
      diag.push_back({e->line, err.what()});
    }
  } else {
    const auto* s = doc.find("environment");
    diag.push_back({s ? s->line : 0, "missing [environment] spec"});
  }

  if (const auto* e = entry_of("agent", "kind")) {
    try {
      config.agent = agent_kind_from_string(e->value);
    } catch (const ConfigError& err) {
      diag.push_back({e->line, err.what()});
    }
  }
  if (const auto* e = entry_of("agent", "reward_mode")) {
    if (e->value == "known") {
      config.reward_known = true;
    } else if (e->value == "unknown") {
      config.reward_known = false;
    } else {
      diag.push_back({e->line, "reward_mode must be 'known' or 'unknown'"});
    }
  }
  if (const auto* e = entry_of("agent", "delta")) {
    const auto value = parse_double(e->value);
    if (!value || !(*value > 0.0 && *value < 1.0)) {
      diag.push_back({e->line, "delta must be a number in (0, 1)"});
    } else {
      config.delta = *value;
    }
  }
  if (const auto* e = entry_of("agent", "variance_convention")) {
    try {
      config.variance_convention = variance_convention_from_string(e->value);
    } catch (const ConfigError& err) {
      diag.push_back({e->line, err.what()});
    }
  }
  if (const auto* e = entry_of("run", "episodes")) {
    const auto value = parse_uint(e->value);
    if (!value || *value == 0) {
      diag.push_back({e->line, "episodes must be a positive integer"});
    } else {
      config.episodes = static_cast<std::size_t>(*value);
    }
  }
  if (const auto* e = entry_of("run", "seeds")) {
    std::vector<std::uint64_t> seeds;
    std::set<std::uint64_t> seen;
    bool valid = true;
    std::string normalized(e->value);
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    for (auto token : split_whitespace(normalized)) {
      const auto seed = parse_uint(token);
      if (!seed) {
        diag.push_back({e->line, "seed '" + std::string(token) + "' is not a non-negative integer"});
        valid = false;
      } else if (!seen.insert(*seed).second) {
        diag.push_back({e->line, "duplicate seed " + std::to_string(*seed)});
        valid = false;
      } else {
        seeds.push_back(*seed);
      }
    }
    if (valid && seeds.empty()) {
      diag.push_back({e->line, "seeds must list at least one seed"});
      valid = false;
    }
    if (valid) config.seeds = std::move(seeds);
  }
  if (const auto* e = entry_of("run", "output")) {
    if (e->value.empty()) {
      diag.push_back({e->line, "output must not be empty"});
    } else {
      config.output = e->value;
    }
  }

  if (diag.empty() && have_environment) result.config = std::move(config);
  std::stable_sort(diag.begin(), diag.end(),
                   [](const TextDiagnostic& a, const TextDiagnostic& b) { return a.line < b.line; });
  return result;
}

std::string format_diagnostics(const std::vector<TextDiagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    out += "line " + std::to_string(d.line) + ": " + d.message + "\n";
  }
  return out;
}

ExperimentConfig parse_config_or_throw(std::string_view text) {
  auto result = parse_config(text);
  if (!result.ok()) throw ConfigError(format_diagnostics(result.diagnostics));
  return std::move(*result.config);
}

AgentConfig agent_config_for(const ExperimentConfig& config, std::uint64_t seed) {
  auto agent = make_agent(config.agent, config.reward_known);
  agent.delta = config.delta;
  agent.episodes = config.episodes;
  agent.seed = seed;
  agent.variance_convention = config.variance_convention;
  return agent;
}

std::string regret_curve_csv(const RegretCurve& curve) {
  std::string out = "episode,instantaneous_regret,cumulative_regret,v_star,v_pi\n";
  for (const auto& r : curve.records) {
    out += std::to_string(r.episode + 1);
    out += ',';
    out += format_double(r.regret);
    out += ',';
    out += format_double(r.cumulative);
    out += ',';
    out += format_double(r.v_star);
    out += ',';
    out += format_double(r.v_pi);
    out += '\n';
  }
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ParameterError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::string summary_csv(const std::vector<const RegretCurve*>& curves) {
  std::string out = "episode,mean,median,q25,q75,iqr\n";
  if (curves.empty()) return out;
  const auto K = curves.front()->records.size();
  std::vector<double> column(curves.size());
  for (std::size_t k = 0; k < K; ++k) {
    double sum = 0.0;
    for (std::size_t r = 0; r < curves.size(); ++r) {
      column[r] = curves[r]->records.at(k).cumulative;
      sum += column[r];
    }
    const double q25 = quantile(column, 0.25);
    const double q75 = quantile(column, 0.75);
    out += std::to_string(k + 1) + ',' + format_double(sum / static_cast<double>(curves.size())) +
           ',' + format_double(quantile(column, 0.5)) + ',' + format_double(q25) + ',' +
           format_double(q75) + ',' + format_double(q75 - q25) + '\n';
  }
  return out;
}

std::int64_t seed_offset_from_environment() {
  const char* raw = std::getenv("FACTORED_RL_SEED_OFFSET");
  if (!raw || trim(raw).empty()) return 0;
  const auto value = parse_int(trim(raw));
  if (!value) {
    throw ConfigError("FACTORED_RL_SEED_OFFSET must be an integer, got '" + std::string(raw) + "'");
  }
  return *value;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const auto env = environment_from_spec(config.environment);
  ExperimentReport report;
  report.directory = options.output ? *options.output : std::filesystem::path(config.output);
  for (auto seed : config.seeds) {
    report.seeds.push_back(seed + static_cast<std::uint64_t>(options.seed_offset));
  }

  std::error_code ec;
  std::filesystem::create_directories(report.directory, ec);
  if (ec || !std::filesystem::is_directory(report.directory)) {
    throw IoError("cannot create output directory '" + report.directory.string() + "'");
  }

  const auto n = report.seeds.size();
  std::vector<RegretCurve> curves(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        curves[i] = run_episodes(env, agent_config_for(config, report.seeds[i])).curve;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const auto jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<const RegretCurve*> views;
  for (std::size_t i = 0; i < n; ++i) {
    const auto path = report.directory / ("seed_" + std::to_string(report.seeds[i]) + ".csv");
    write_text_file(path.string(), regret_curve_csv(curves[i]));
    report.seed_files.push_back(path);
    report.final_cumulative_regret.push_back(curves[i].total());
    views.push_back(&curves[i]);
  }
  report.summary_file = report.directory / "summary.csv";
  write_text_file(report.summary_file.string(), summary_csv(views));
  return report;
}

}  // namespace fmdp

#pragma once

// Episodic optimistic learner: plan with optimistic value iteration, act
// greedily for H steps, update the counters, and record exact regret.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fmdp/bonuses.hpp"
#include "fmdp/environments.hpp"
#include "fmdp/estimation.hpp"
#include "fmdp/planner.hpp"

namespace fmdp {

enum class AgentKind { f_ucbvi, f_euler, l1_baseline };

std::string to_string(AgentKind kind);
/// Throws ConfigError naming the valid kinds.
AgentKind agent_kind_from_string(std::string_view text);
std::vector<std::string> agent_kind_names();

struct AgentConfig {
  AgentKind kind = AgentKind::f_ucbvi;
  BonusKind bonus_kind = BonusKind::hoeffding;
  bool reward_known = true;
  bool track_lcb = false;
  /// Reward counters are only touched in unknown-reward mode.
  bool track_rewards = false;
  VarianceConvention variance_convention = VarianceConvention::unbiased;
  double delta = 0.1;
  std::size_t episodes = 1000;
  std::uint64_t seed = 0;
};

/// F-UCBVI: Hoeffding bonuses, no LCB. F-EULER: Bernstein bonuses with LCB.
/// L1 baseline: L1-concentration transition bonus.
AgentConfig make_agent(AgentKind kind, bool reward_known);
AgentConfig make_agent(std::string_view kind, bool reward_known);

struct RegretRecord {
  std::size_t episode = 0;
  std::size_t initial_state = 0;
  double v_star = 0.0;
  double v_pi = 0.0;
  double regret = 0.0;
  double cumulative = 0.0;
};

struct RegretCurve {
  std::vector<RegretRecord> records;

  double total() const { return records.empty() ? 0.0 : records.back().cumulative; }
  /// Mean instantaneous regret over episodes [first, last).
  double mean_regret(std::size_t first, std::size_t last) const;
};

struct RunResult {
  RegretCurve curve;
  EstimatorState estimates;
  DeterministicPolicy final_policy;
  LogFactor log_factor;
};

/// Called once per episode with the bounds the episode's policy came from.
using EpisodeObserver = std::function<void(std::size_t episode, const ValueBounds& bounds)>;

/// Runs config.episodes episodes. The environment is switched to the
/// config's reward mode first. Throws ConsistencyError if an instantaneous
/// regret falls below -1e-9.
RunResult run_episodes(const Environment& env, const AgentConfig& config,
                       const EpisodeObserver& observer = {});

}  // namespace fmdp

#include "fmdp/learner.hpp"

#include "fmdp/errors.hpp"

namespace fmdp {

std::string to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::f_ucbvi:
      return "f_ucbvi";
    case AgentKind::f_euler:
      return "f_euler";
    case AgentKind::l1_baseline:
      return "l1_baseline";
  }
  return "f_ucbvi";
}

std::vector<std::string> agent_kind_names() { return {"f_ucbvi", "f_euler", "l1_baseline"}; }

AgentKind agent_kind_from_string(std::string_view text) {
  if (text == "f_ucbvi") return AgentKind::f_ucbvi;
  if (text == "f_euler") return AgentKind::f_euler;
  if (text == "l1_baseline") return AgentKind::l1_baseline;
  throw ConfigError("unknown agent kind '" + std::string(text) +
                    "' (valid: f_ucbvi, f_euler, l1_baseline)");
}

AgentConfig make_agent(AgentKind kind, bool reward_known) {
  AgentConfig config;
  config.kind = kind;
  config.reward_known = reward_known;
  config.track_rewards = !reward_known;
  switch (kind) {
    case AgentKind::f_ucbvi:
      config.bonus_kind = BonusKind::hoeffding;
      break;
    case AgentKind::f_euler:
      config.bonus_kind = BonusKind::bernstein;
      config.track_lcb = true;
      break;
    case AgentKind::l1_baseline:
      config.bonus_kind = BonusKind::l1_baseline;
      break;
  }
  return config;
}

AgentConfig make_agent(std::string_view kind, bool reward_known) {
  return make_agent(agent_kind_from_string(kind), reward_known);
}

double RegretCurve::mean_regret(std::size_t first, std::size_t last) const {
  last = std::min(last, records.size());
  if (first >= last) return 0.0;
  double sum = 0.0;
  for (std::size_t k = first; k < last; ++k) sum += records[k].regret;
  return sum / static_cast<double>(last - first);
}

RunResult run_episodes(const Environment& base_env, const AgentConfig& config,
                       const EpisodeObserver& observer) {
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    throw ParameterError("agent: delta must lie in (0, 1)");
  }
  if (config.episodes == 0) throw ParameterError("agent: at least one episode required");
  const auto env_for_run = with_reward_mode(base_env, config.reward_known);
  const auto& model = *env_for_run.model;
  const auto H = model.horizon();

  EpisodicEnv env(env_for_run, config.seed);
  const auto optimal = exact_value_iteration(model);
  const auto L = log_factor(model.num_transition_components(), model.num_reward_components(),
                            model.num_states(), model.num_pairs(),
                            static_cast<std::uint64_t>(config.episodes) * H, config.delta);
  PlannerOptions options{config.bonus_kind, config.reward_known, config.track_lcb, L.value};

  RunResult result{RegretCurve{}, EstimatorState(model, config.variance_convention),
                   DeterministicPolicy(H, model.num_states()), L};
  auto& estimates = result.estimates;
  result.curve.records.reserve(config.episodes);
  double cumulative = 0.0;

  for (std::size_t k = 0; k < config.episodes; ++k) {
    const auto bounds = vi_optimism(model, estimates, options);
    if (observer) observer(k, bounds);
    const auto s1 = env.reset();
    const auto policy_values = evaluate_policy(model, bounds.policy);

    RegretRecord record;
    record.episode = k;
    record.initial_state = s1;
    record.v_star = optimal.values[0][s1];
    record.v_pi = policy_values[0][s1];
    record.regret = record.v_star - record.v_pi;
    if (record.regret < -1e-9) {
      throw ConsistencyError("negative regret " + std::to_string(record.regret) + " in episode " +
                             std::to_string(k));
    }
    cumulative += record.regret;
    record.cumulative = cumulative;
    result.curve.records.push_back(record);

    auto state = s1;
    for (std::size_t t = 0; t < H; ++t) {
      const auto action = bounds.policy.action(t, state);
      const auto pair = model.pair_index(state, action);
      const auto outcome = env.step(action);
      const auto next = model.state_space().tuple_of(outcome.next_state);
      for (std::size_t i = 0; i < model.num_transition_components(); ++i) {
        estimates.record_transition(i, model.transition_cell(i, pair), next[i]);
      }
      if (config.track_rewards && !config.reward_known) {
        for (std::size_t j = 0; j < model.num_reward_components(); ++j) {
          estimates.record_reward(j, model.reward_cell(j, pair), outcome.rewards[j]);
        }
      }
      state = outcome.next_state;
    }
    if (k + 1 == config.episodes) result.final_policy = bounds.policy;
  }
  return result;
}

}  // namespace fmdp

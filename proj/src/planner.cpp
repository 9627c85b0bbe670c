#include "fmdp/planner.hpp"

#include <algorithm>

#include "fmdp/errors.hpp"

namespace fmdp {

StochasticPolicy::StochasticPolicy(std::size_t horizon, std::size_t num_states,
                                   std::size_t num_actions)
    : horizon_(horizon),
      num_states_(num_states),
      num_actions_(num_actions),
      probs_(horizon * num_states * num_actions, 0.0) {}

StochasticPolicy StochasticPolicy::uniform(std::size_t horizon, std::size_t num_states,
                                           std::size_t num_actions) {
  StochasticPolicy policy(horizon, num_states, num_actions);
  std::fill(policy.probs_.begin(), policy.probs_.end(), 1.0 / static_cast<double>(num_actions));
  return policy;
}

ValueBounds vi_optimism(const FactoredModel& model, const EstimatorState& estimates,
                        const PlannerOptions& options) {
  const auto H = model.horizon();
  const auto S = model.num_states();
  const auto A = model.num_actions();
  const auto m = model.num_transition_components();
  const bool track_lcb = options.track_lcb || options.bonus == BonusKind::bernstein;

  ValueBounds bounds{ValueTable(H + 1, std::vector<double>(S, 0.0)),
                     ValueTable(H + 1, std::vector<double>(S, 0.0)),
                     DeterministicPolicy(H, S)};
  BonusContext ctx{&model, &estimates, static_cast<double>(H), options.L, options.reward_known,
                   {}, {}};
  std::vector<std::span<const double>> rows(m);
  std::vector<double> means(A);
  std::vector<double> bonus(A);

  for (std::size_t t = H; t-- > 0;) {
    const auto& ucb_next = bounds.ucb[t + 1];
    const auto& lcb_next = bounds.lcb[t + 1];
    ctx.ucb_next = ucb_next;
    ctx.lcb_next = lcb_next;
    const double cap = static_cast<double>(H - t);
    for (std::size_t s = 0; s < S; ++s) {
      std::size_t best_action = 0;
      double best_q = 0.0;
      for (std::size_t a = 0; a < A; ++a) {
        const auto pair = model.pair_index(s, a);
        for (std::size_t i = 0; i < m; ++i) {
          rows[i] = estimates.empirical_transition(i, model.transition_cell(i, pair));
        }
        means[a] = options.reward_known ? model.expected_reward(pair)
                                        : estimates.empirical_total_reward(model, pair);
        bonus[a] = transition_bonus(options.bonus, ctx, pair);
        if (!options.reward_known) bonus[a] += reward_bonus(options.bonus, ctx, pair);
        const double q = std::min(cap, means[a] + expect_product(rows, ucb_next) + bonus[a]);
        if (a == 0 || q > best_q) {
          best_q = q;
          best_action = a;
        }
      }
      bounds.policy.set(t, s, best_action);
      bounds.ucb[t][s] = best_q;
      if (track_lcb) {
        const auto pair = model.pair_index(s, best_action);
        for (std::size_t i = 0; i < m; ++i) {
          rows[i] = estimates.empirical_transition(i, model.transition_cell(i, pair));
        }
        bounds.lcb[t][s] = std::max(
            0.0, means[best_action] + expect_product(rows, lcb_next) - bonus[best_action]);
      }
    }
  }
  return bounds;
}

std::vector<double> action_values(const FactoredModel& model, std::size_t state,
                                  const std::vector<double>& next_values) {
  std::vector<double> q(model.num_actions());
  for (std::size_t a = 0; a < q.size(); ++a) {
    const auto pair = model.pair_index(state, a);
    q[a] = model.expected_reward(pair) + model.expected_next_value(pair, next_values);
  }
  return q;
}

OptimalSolution exact_value_iteration(const FactoredModel& model, Objective objective) {
  const auto H = model.horizon();
  const auto S = model.num_states();
  OptimalSolution solution{ValueTable(H + 1, std::vector<double>(S, 0.0)),
                           DeterministicPolicy(H, S)};
  for (std::size_t t = H; t-- > 0;) {
    for (std::size_t s = 0; s < S; ++s) {
      const auto q = action_values(model, s, solution.values[t + 1]);
      std::size_t best = 0;
      for (std::size_t a = 1; a < q.size(); ++a) {
        const bool better = objective == Objective::maximize ? q[a] > q[best] : q[a] < q[best];
        if (better) best = a;
      }
      solution.values[t][s] = q[best];
      solution.policy.set(t, s, best);
    }
  }
  return solution;
}

ValueTable evaluate_policy(const FactoredModel& model, const DeterministicPolicy& policy) {
  const auto H = model.horizon();
  const auto S = model.num_states();
  if (policy.horizon() != H || policy.num_states() != S) {
    throw StructuralError("policy shape does not match the model");
  }
  ValueTable values(H + 1, std::vector<double>(S, 0.0));
  for (std::size_t t = H; t-- > 0;) {
    for (std::size_t s = 0; s < S; ++s) {
      const auto pair = model.pair_index(s, policy.action(t, s));
      values[t][s] = model.expected_reward(pair) + model.expected_next_value(pair, values[t + 1]);
    }
  }
  return values;
}

ValueTable evaluate_policy(const FactoredModel& model, const StochasticPolicy& policy) {
  const auto H = model.horizon();
  const auto S = model.num_states();
  if (policy.horizon() != H || policy.num_states() != S ||
      policy.num_actions() != model.num_actions()) {
    throw StructuralError("policy shape does not match the model");
  }
  ValueTable values(H + 1, std::vector<double>(S, 0.0));
  for (std::size_t t = H; t-- > 0;) {
    for (std::size_t s = 0; s < S; ++s) {
      const auto q = action_values(model, s, values[t + 1]);
      double v = 0.0;
      for (std::size_t a = 0; a < q.size(); ++a) v += policy.probability(t, s, a) * q[a];
      values[t][s] = v;
    }
  }
  return values;
}

}  // namespace fmdp

#pragma once

// Finite-horizon dynamic programming: optimistic value iteration on empirical
// estimates, and exact optimal / policy values on a known model.
//
// Steps are 0-based here: index t holds the quantity the 1-based notation
// writes with subscript h = t + 1, and index H holds the terminal zeros.

#include <cstddef>
#include <vector>

#include "fmdp/bonuses.hpp"
#include "fmdp/estimation.hpp"
#include "fmdp/factored_model.hpp"

namespace fmdp {

using ValueTable = std::vector<std::vector<double>>;

class DeterministicPolicy {
 public:
  DeterministicPolicy() = default;
  DeterministicPolicy(std::size_t horizon, std::size_t num_states)
      : horizon_(horizon), num_states_(num_states), actions_(horizon * num_states, 0) {}

  std::size_t horizon() const { return horizon_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t action(std::size_t step, std::size_t state) const {
    return actions_.at(step * num_states_ + state);
  }
  void set(std::size_t step, std::size_t state, std::size_t action) {
    actions_.at(step * num_states_ + state) = action;
  }

  bool operator==(const DeterministicPolicy&) const = default;

 private:
  std::size_t horizon_ = 0;
  std::size_t num_states_ = 0;
  std::vector<std::size_t> actions_;
};

/// pi(a | s, step) table, used for the uniform-random reference policy.
class StochasticPolicy {
 public:
  StochasticPolicy(std::size_t horizon, std::size_t num_states, std::size_t num_actions);
  static StochasticPolicy uniform(std::size_t horizon, std::size_t num_states,
                                  std::size_t num_actions);

  std::size_t horizon() const { return horizon_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  double probability(std::size_t step, std::size_t state, std::size_t action) const {
    return probs_.at((step * num_states_ + state) * num_actions_ + action);
  }
  void set(std::size_t step, std::size_t state, std::size_t action, double p) {
    probs_.at((step * num_states_ + state) * num_actions_ + action) = p;
  }

 private:
  std::size_t horizon_;
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> probs_;
};

struct ValueBounds {
  ValueTable ucb;
  ValueTable lcb;
  DeterministicPolicy policy;
};

struct PlannerOptions {
  BonusKind bonus = BonusKind::hoeffding;
  /// Use the model's true R and no reward bonus.
  bool reward_known = true;
  /// Maintain the lower bound. The Bernstein bonus always needs it.
  bool track_lcb = false;
  double L = 1.0;
};

/// Optimistic backward induction on the estimates:
///   Q-bar_h(x) = min{H - h + 1, R(x) + <P-hat(x), V-bar_{h+1}> + b(x) + beta(x)}
/// with a greedy policy (lowest action index on ties) and
///   V-under_h(s) = max{0, R(x) + <P-hat(x), V-under_{h+1}> - b(x) - beta(x)}
/// evaluated at the greedy action. `model` supplies the structure, and the
/// true R in known-reward mode; its transition tables are not read.
ValueBounds vi_optimism(const FactoredModel& model, const EstimatorState& estimates,
                        const PlannerOptions& options);

struct OptimalSolution {
  ValueTable values;
  DeterministicPolicy policy;
};

enum class Objective { maximize, minimize };

/// Exact V* (or the worst achievable value) on the true model, lowest action
/// index on ties.
OptimalSolution exact_value_iteration(const FactoredModel& model,
                                      Objective objective = Objective::maximize);

/// Exact V^pi on the true model.
ValueTable evaluate_policy(const FactoredModel& model, const DeterministicPolicy& policy);
ValueTable evaluate_policy(const FactoredModel& model, const StochasticPolicy& policy);

/// Q^pi_t(s, .) from V^pi_{t+1}: R(x) + <P(x), V_{t+1}>.
std::vector<double> action_values(const FactoredModel& model, std::size_t state,
                                  const std::vector<double>& next_values);

}  // namespace fmdp

#pragma once

// Episodic environments on top of a FactoredModel: initial-state rules, the
// reset/step interaction loop, and builders for the benchmark and lower-bound
// instances.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fmdp/factored_model.hpp"
#include "fmdp/random.hpp"

namespace fmdp {

class InitialStateRule {
 public:
  enum class Mode { fixed, uniform_over_list, custom };

  static InitialStateRule fixed(std::size_t state);
  static InitialStateRule uniform_over(std::vector<std::size_t> states);
  static InitialStateRule custom(std::vector<std::size_t> states, std::vector<double> probs);

  Mode mode() const { return mode_; }
  std::span<const std::size_t> states() const { return states_; }
  std::span<const double> probabilities() const { return probs_; }

  std::size_t draw(Rng& rng) const;
  /// Throws StructuralError if a state is outside [0, num_states).
  void validate(std::size_t num_states) const;

 private:
  InitialStateRule(Mode mode, std::vector<std::size_t> states, std::vector<double> probs);

  Mode mode_ = Mode::fixed;
  std::vector<std::size_t> states_;
  std::vector<double> probs_;
};

/// An immutable model plus how episodes start. Cheap to copy; the model is
/// shared read-only between runs.
struct Environment {
  std::string name;
  std::shared_ptr<const FactoredModel> model;
  InitialStateRule initial = InitialStateRule::fixed(0);
};

Environment make_environment(std::string name, FactoredModel model, InitialStateRule initial);

/// Same environment with the trivial (m = 1) factorization.
Environment flatten(const Environment& env);
Environment with_reward_mode(const Environment& env, bool reward_known);

struct EpisodeState {
  std::size_t current_state = 0;
  /// 1-based; H + 1 once the episode is complete.
  std::size_t step_index = 1;
  std::size_t episode_index = 0;
};

struct StepOutcome {
  /// Component rewards r_1..r_l in unknown-reward mode; the single value
  /// R(x) in known-reward mode.
  std::vector<double> rewards;
  double total_reward = 0.0;
  std::size_t next_state = 0;
};

/// Runtime interaction loop. Initial states, transitions and rewards use
/// separate random streams derived from one seed.
class EpisodicEnv {
 public:
  EpisodicEnv(Environment env, std::uint64_t seed);

  const Environment& environment() const { return env_; }
  const FactoredModel& model() const { return *env_.model; }
  const EpisodeState& state() const { return state_; }
  Tuple state_tuple() const { return model().state_space().tuple_of(state_.current_state); }

  /// Draws s_1 and sets the step index to 1.
  std::size_t reset();
  /// Throws EpisodeCompleteError once H steps were taken.
  StepOutcome step(std::size_t action);
  StepOutcome step(std::span<const std::size_t> action_tuple);

 private:
  Environment env_;
  EpisodeState state_;
  bool started_ = false;
  Rng initial_rng_;
  Rng transition_rng_;
  Rng reward_rng_;
};

// ---------------------------------------------------------------------------
// Builders. Lower-bound constructions use the component values
//   0 = negative value s_-,   1 = positive value s_+,   >= 2 = start values.

/// MAB-like FMDP: from a start value the bandit component moves to s_+ with
/// probability base (+ epsilon for the special action) or to s_-, then stays
/// there for the remaining H - 1 steps; reward 1 per step at s_+. An extra
/// static state component selects one of `copies` independent bandits, each
/// with its own special action (copy c uses action c % A). Episodes start at
/// a uniformly chosen copy.
///
/// With `degenerate` set the state never moves and the per-step reward mean
/// itself is base (+ epsilon for the special action): the reward-only
/// constructions, which reduce to a bandit over the reward scope.
struct MabLikeParams {
  std::size_t state_size = 3;
  std::vector<std::size_t> action_sizes{2};
  std::size_t copies = 1;
  double epsilon = 0.1;
  double base = 0.5;
  std::size_t horizon = 5;
  bool degenerate = false;
};

Environment make_mab_like_fmdp(const MabLikeParams& params);

/// Special action of copy `copy` in make_mab_like_fmdp / make_jao_episodic.
std::size_t special_action_of_copy(std::size_t copy, std::size_t num_actions);

/// Influence-loop FMDP s[1] -> s[2] -> ... -> s[u] -> s[1]. Component 1 copies
/// s[u] when it is s_+ or s_-, otherwise reaches s_+ with probability base
/// (+ epsilon for the special action of the start value v, which is
/// (v - 2) % A). Components 2..u copy the sign of their predecessor. Reward is
/// 1 when any loop component is positive. Episodes start with s[u] uniform over
/// its start values and every other loop component at s_-.
struct LoopParams {
  std::size_t loop_length = 2;
  /// Sizes of loop components 1..u; the last must be >= 3, the others >= 2.
  std::vector<std::size_t> component_sizes{2, 3};
  std::vector<std::size_t> action_sizes{2};
  double epsilon = 0.1;
  double base = 0.5;
  std::size_t horizon = 5;
};

Environment make_loop_fmdp(const LoopParams& params);

/// Episodic JAO MDP as an m = 1 FMDP with 2 * copies states: state 2c is s_0
/// and 2c + 1 is s_1 of copy c. s_1 -> s_0 with probability delta; s_0 -> s_1
/// with probability delta, or delta + epsilon for the copy's special action.
/// Reward 1 at every s_1. Episodes start at s_0 of a uniformly chosen copy.
struct JaoParams {
  double delta = 0.25;
  double epsilon = 0.1;
  std::size_t copies = 1;
  std::size_t num_actions = 2;
  std::size_t horizon = 4;
};

Environment make_jao_episodic(const JaoParams& params);

/// Closed-form V_1^*(s_0) of the episodic JAO MDP.
double jao_optimal_value(double delta, double epsilon, std::size_t horizon);
/// Closed-form P(s_H = s_1) from s_0 when every action moves with probability delta.
double jao_uniform_last_state_probability(double delta, std::size_t horizon);

struct RandomFmdpParams {
  std::vector<std::size_t> state_sizes{3, 3};
  std::vector<std::size_t> action_sizes{4};
  std::vector<ScopeIndexSet> transition_scopes;
  std::vector<ScopeIndexSet> reward_scopes;
  std::size_t horizon = 5;
  RewardKind reward_kind = RewardKind::bernoulli;
  bool reward_known = true;
};

/// Transition rows from a symmetric Dirichlet(1); reward means uniform in [0, 1/l].
FactoredModel make_random_fmdp(const RandomFmdpParams& params, Rng& rng);

/// Fixed benchmark: m = 2, S_i = 3, two binary action components (A = 4),
/// H = 5. Component i moves with (s[i], a[i]) and reward j is drawn on the
/// same scope, so X[Z_i] = 6 against SA = 36. s_1 = (0, 0).
Environment make_benchmark_fmdp(std::uint64_t instance_seed = 2021, std::size_t horizon = 5);

/// Deterministic two-state chain: action 0 stays, action 1 switches state,
/// reward 1 at state 1. Episodes start at state 0.
Environment make_chain(std::size_t horizon = 2);

/// Builds an environment from `name:key=value,...`. Every environment accepts
/// `flatten=1` to use the trivial factorization. Throws ConfigError.
Environment environment_from_spec(std::string_view spec);

/// Help text listing the registered environments and their keys.
std::string environment_grammar();

/// Names accepted by environment_from_spec.
std::vector<std::string> environment_names();

}  // namespace fmdp

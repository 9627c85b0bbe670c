#include "fmdp/environments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "fmdp/errors.hpp"
#include "fmdp/structured_text.hpp"

namespace fmdp {

// ---------------------------------------------------------------------------
// InitialStateRule

InitialStateRule::InitialStateRule(Mode mode, std::vector<std::size_t> states,
                                   std::vector<double> probs)
    : mode_(mode), states_(std::move(states)), probs_(std::move(probs)) {
  if (states_.empty()) throw StructuralError("initial-state rule needs at least one state");
  if (probs_.size() != states_.size()) {
    throw StructuralError("initial-state rule: one probability per state required");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw StructuralError("initial-state probabilities must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw StructuralError("initial-state distribution is not normalized");
  }
}

InitialStateRule InitialStateRule::fixed(std::size_t state) {
  return InitialStateRule(Mode::fixed, {state}, {1.0});
}

InitialStateRule InitialStateRule::uniform_over(std::vector<std::size_t> states) {
  const auto count = states.size();
  std::vector<double> probs(count, count == 0 ? 0.0 : 1.0 / static_cast<double>(count));
  return InitialStateRule(Mode::uniform_over_list, std::move(states), std::move(probs));
}

InitialStateRule InitialStateRule::custom(std::vector<std::size_t> states,
                                          std::vector<double> probs) {
  return InitialStateRule(Mode::custom, std::move(states), std::move(probs));
}

std::size_t InitialStateRule::draw(Rng& rng) const {
  switch (mode_) {
    case Mode::fixed:
      return states_.front();
    case Mode::uniform_over_list:
      return states_[rng.below(states_.size())];
    case Mode::custom:
      return states_[rng.categorical(probs_)];
  }
  return states_.front();
}

void InitialStateRule::validate(std::size_t num_states) const {
  for (auto s : states_) {
    if (s >= num_states) throw StructuralError("initial state outside the state space");
  }
}

// ---------------------------------------------------------------------------
// Environment

Environment make_environment(std::string name, FactoredModel model, InitialStateRule initial) {
  initial.validate(model.num_states());
  return Environment{std::move(name), std::make_shared<const FactoredModel>(std::move(model)),
                     std::move(initial)};
}

Environment flatten(const Environment& env) {
  // Flat state indices are unchanged by flattening, so the rule carries over.
  return Environment{env.name, std::make_shared<const FactoredModel>(flatten(*env.model)),
                     env.initial};
}

Environment with_reward_mode(const Environment& env, bool reward_known) {
  if (env.model->reward_known() == reward_known) return env;
  return Environment{env.name,
                     std::make_shared<const FactoredModel>(env.model->with_reward_known(reward_known)),
                     env.initial};
}

EpisodicEnv::EpisodicEnv(Environment env, std::uint64_t seed)
    : env_(std::move(env)),
      initial_rng_(derive_seed(seed, 0)),
      transition_rng_(derive_seed(seed, 1)),
      reward_rng_(derive_seed(seed, 2)) {
  if (!env_.model) throw StructuralError("environment has no model");
  env_.initial.validate(env_.model->num_states());
}

std::size_t EpisodicEnv::reset() {
  if (started_) ++state_.episode_index;
  started_ = true;
  state_.current_state = env_.initial.draw(initial_rng_);
  state_.step_index = 1;
  return state_.current_state;
}

StepOutcome EpisodicEnv::step(std::size_t action) {
  const auto& m = model();
  if (!started_) throw EpisodeCompleteError("step called before reset");
  if (state_.step_index > m.horizon()) {
    throw EpisodeCompleteError("episode complete after " + std::to_string(m.horizon()) +
                               " steps; call reset");
  }
  if (action >= m.num_actions()) throw StructuralError("action index out of range");
  const auto pair = m.pair_index(state_.current_state, action);
  StepOutcome outcome;
  if (m.reward_known()) {
    outcome.total_reward = m.expected_reward(pair);
    outcome.rewards = {outcome.total_reward};
  } else {
    outcome.rewards = m.sample_reward(pair, reward_rng_);
    outcome.total_reward = std::accumulate(outcome.rewards.begin(), outcome.rewards.end(), 0.0);
  }
  outcome.next_state = m.sample_next_state(pair, transition_rng_);
  state_.current_state = outcome.next_state;
  ++state_.step_index;
  return outcome;
}

StepOutcome EpisodicEnv::step(std::span<const std::size_t> action_tuple) {
  return step(model().action_space().index_of(action_tuple));
}

// ---------------------------------------------------------------------------
// Builders

namespace {

using RowFiller = std::function<void(std::span<const std::size_t> scope_tuple, std::span<double> row)>;

TransitionComponent build_transition(const FactoredSpace& pair_space, ScopeIndexSet scope,
                                     std::size_t width, const RowFiller& fill) {
  const auto space = scope.project(pair_space);
  TransitionComponent t{std::move(scope), std::vector<double>(space.total() * width, 0.0)};
  Tuple tuple(space.num_components());
  for (std::size_t cell = 0; cell < space.total(); ++cell) {
    space.decode(cell, tuple);
    fill(tuple, std::span<double>(t.rows).subspan(cell * width, width));
  }
  return t;
}

RewardComponent build_reward(const FactoredSpace& pair_space, ScopeIndexSet scope, RewardKind kind,
                             const std::function<double(std::span<const std::size_t>)>& mean) {
  const auto space = scope.project(pair_space);
  RewardComponent r{std::move(scope), kind, std::vector<double>(space.total(), 0.0)};
  Tuple tuple(space.num_components());
  for (std::size_t cell = 0; cell < space.total(); ++cell) {
    space.decode(cell, tuple);
    r.means[cell] = mean(tuple);
  }
  return r;
}

std::vector<std::size_t> iota_from(std::size_t first, std::size_t count) {
  std::vector<std::size_t> out(count);
  std::iota(out.begin(), out.end(), first);
  return out;
}

FactoredSpace pair_space_of(const std::vector<std::size_t>& states,
                            const std::vector<std::size_t>& actions) {
  auto sizes = states;
  sizes.insert(sizes.end(), actions.begin(), actions.end());
  return FactoredSpace(std::move(sizes));
}

void require(bool condition, const std::string& message) {
  if (!condition) throw StructuralError(message);
}

void check_probability(double p, const std::string& what) {
  require(p >= 0.0 && p <= 1.0, what + " must lie in [0, 1]");
}

void fill_sign_row(std::span<double> row, double positive) {
  std::fill(row.begin(), row.end(), 0.0);
  row[1] = positive;
  row[0] = 1.0 - positive;
}

}  // namespace

std::size_t special_action_of_copy(std::size_t copy, std::size_t num_actions) {
  return copy % num_actions;
}

Environment make_mab_like_fmdp(const MabLikeParams& p) {
  require(!p.action_sizes.empty(), "mab_like: at least one action component");
  const FactoredSpace actions(p.action_sizes);
  const auto A = actions.total();
  require(p.copies >= 1, "mab_like: copies must be >= 1");
  require(p.horizon >= (p.degenerate ? 1 : 2), "mab_like: H must be >= 2");
  require(p.degenerate ? p.state_size >= 2 : p.state_size >= 3, "mab_like: S must be >= 3");
  require(p.epsilon >= 0.0, "mab_like: epsilon must be >= 0");
  check_probability(p.base, "mab_like: base");
  check_probability(p.base + p.epsilon, "mab_like: base + epsilon");

  const bool has_copy = p.copies > 1;
  std::vector<std::size_t> state_sizes{p.state_size};
  if (has_copy) state_sizes.push_back(p.copies);
  const auto m = state_sizes.size();
  const auto pair_space = pair_space_of(state_sizes, p.action_sizes);
  const auto action_indices = iota_from(m, p.action_sizes.size());

  // Scope tuples list the bandit value, the copy (if any), then the actions.
  const auto copy_and_action = [&](std::span<const std::size_t> t, std::size_t offset) {
    const std::size_t copy = has_copy ? t[offset] : 0;
    const std::size_t action = actions.index_of(t.subspan(offset + (has_copy ? 1 : 0)));
    return std::pair{copy, action};
  };

  std::vector<TransitionComponent> transitions;
  std::vector<RewardComponent> rewards;
  const auto identity = [](std::span<const std::size_t> t, std::span<double> row) {
    std::fill(row.begin(), row.end(), 0.0);
    row[t[0]] = 1.0;
  };
  if (!p.degenerate) {
    std::vector<std::size_t> scope{0};
    if (has_copy) scope.push_back(1);
    scope.insert(scope.end(), action_indices.begin(), action_indices.end());
    transitions.push_back(build_transition(
        pair_space, ScopeIndexSet(scope), p.state_size,
        [&](std::span<const std::size_t> t, std::span<double> row) {
          if (t[0] < 2) {
            std::fill(row.begin(), row.end(), 0.0);
            row[t[0]] = 1.0;
            return;
          }
          const auto [copy, action] = copy_and_action(t, 1);
          const bool special = action == special_action_of_copy(copy, A);
          fill_sign_row(row, p.base + (special ? p.epsilon : 0.0));
        }));
    rewards.push_back(build_reward(pair_space, ScopeIndexSet({0}), RewardKind::deterministic,
                                   [](std::span<const std::size_t> t) { return t[0] == 1 ? 1.0 : 0.0; }));
  } else {
    transitions.push_back(build_transition(pair_space, ScopeIndexSet({0}), p.state_size, identity));
    std::vector<std::size_t> scope;
    if (has_copy) scope.push_back(1);
    scope.insert(scope.end(), action_indices.begin(), action_indices.end());
    rewards.push_back(build_reward(pair_space, ScopeIndexSet(scope), RewardKind::bernoulli,
                                   [&](std::span<const std::size_t> t) {
                                     const auto [copy, action] = copy_and_action(t, 0);
                                     const bool special = action == special_action_of_copy(copy, A);
                                     return p.base + (special ? p.epsilon : 0.0);
                                   }));
  }
  if (has_copy) {
    transitions.push_back(build_transition(pair_space, ScopeIndexSet({1}), p.copies, identity));
  }

  const std::size_t start_value = p.degenerate ? 0 : 2;
  std::vector<std::size_t> starts;
  const FactoredSpace states(state_sizes);
  for (std::size_t c = 0; c < p.copies; ++c) {
    Tuple s{start_value};
    if (has_copy) s.push_back(c);
    starts.push_back(states.index_of(s));
  }
  FactoredModel model(state_sizes, p.action_sizes, std::move(transitions), std::move(rewards),
                      p.horizon, !p.degenerate);
  return make_environment(p.degenerate ? "mab_like_degenerate" : "mab_like", std::move(model),
                          InitialStateRule::uniform_over(std::move(starts)));
}

Environment make_loop_fmdp(const LoopParams& p) {
  const auto u = p.loop_length;
  require(u >= 1, "loop: loop length must be >= 1");
  require(p.component_sizes.size() == u, "loop: one size per loop component required");
  require(p.component_sizes.back() >= 3, "loop: the last loop component needs S_u >= 3");
  for (std::size_t i = 0; i + 1 < u; ++i) {
    require(p.component_sizes[i] >= 2, "loop: loop components need S_i >= 2");
  }
  require(p.horizon >= 2, "loop: H must be >= 2");
  require(!p.action_sizes.empty(), "loop: at least one action component");
  require(p.epsilon >= 0.0, "loop: epsilon must be >= 0");
  check_probability(p.base, "loop: base");
  check_probability(p.base + p.epsilon, "loop: base + epsilon");

  const FactoredSpace actions(p.action_sizes);
  const auto A = actions.total();
  const auto pair_space = pair_space_of(p.component_sizes, p.action_sizes);
  const auto action_indices = iota_from(u, p.action_sizes.size());

  std::vector<TransitionComponent> transitions;
  {
    std::vector<std::size_t> scope{u - 1};
    scope.insert(scope.end(), action_indices.begin(), action_indices.end());
    transitions.push_back(build_transition(
        pair_space, ScopeIndexSet(scope), p.component_sizes[0],
        [&](std::span<const std::size_t> t, std::span<double> row) {
          const auto driver = t[0];
          if (driver < 2) {
            std::fill(row.begin(), row.end(), 0.0);
            row[driver] = 1.0;
            return;
          }
          const auto action = actions.index_of(t.subspan(1));
          const bool special = action == (driver - 2) % A;
          fill_sign_row(row, p.base + (special ? p.epsilon : 0.0));
        }));
  }
  for (std::size_t i = 1; i < u; ++i) {
    transitions.push_back(build_transition(
        pair_space, ScopeIndexSet({i - 1}), p.component_sizes[i],
        [](std::span<const std::size_t> t, std::span<double> row) {
          std::fill(row.begin(), row.end(), 0.0);
          row[t[0] == 1 ? 1 : 0] = 1.0;
        }));
  }
  std::vector<RewardComponent> rewards;
  rewards.push_back(build_reward(pair_space, ScopeIndexSet(iota_from(0, u)),
                                 RewardKind::deterministic, [](std::span<const std::size_t> t) {
                                   return std::find(t.begin(), t.end(), 1) != t.end() ? 1.0 : 0.0;
                                 }));

  const FactoredSpace states(p.component_sizes);
  std::vector<std::size_t> starts;
  for (std::size_t v = 2; v < p.component_sizes.back(); ++v) {
    Tuple s(u, 0);
    s.back() = v;
    starts.push_back(states.index_of(s));
  }
  FactoredModel model(p.component_sizes, p.action_sizes, std::move(transitions),
                      std::move(rewards), p.horizon, true);
  return make_environment("loop", std::move(model), InitialStateRule::uniform_over(std::move(starts)));
}

Environment make_jao_episodic(const JaoParams& p) {
  if (!(p.delta > 0.0 && p.delta < 0.5)) throw ParameterError("jao: delta must lie in (0, 1/2)");
  if (!(p.epsilon >= 0.0 && p.epsilon <= 1.0 - 2.0 * p.delta)) {
    throw ParameterError("jao: epsilon must lie in [0, 1 - 2 delta]");
  }
  if (p.copies < 1 || p.num_actions < 1 || p.horizon < 1) {
    throw ParameterError("jao: copies, actions and H must be >= 1");
  }
  const auto S = 2 * p.copies;
  const auto pair_space = pair_space_of({S}, {p.num_actions});
  std::vector<TransitionComponent> transitions;
  transitions.push_back(build_transition(
      pair_space, ScopeIndexSet({0, 1}), S,
      [&](std::span<const std::size_t> t, std::span<double> row) {
        std::fill(row.begin(), row.end(), 0.0);
        const auto copy = t[0] / 2;
        const auto s0 = 2 * copy;
        const auto s1 = s0 + 1;
        if (t[0] == s1) {
          row[s0] = p.delta;
          row[s1] = 1.0 - p.delta;
        } else {
          const bool special = t[1] == special_action_of_copy(copy, p.num_actions);
          const double move = p.delta + (special ? p.epsilon : 0.0);
          row[s1] = move;
          row[s0] = 1.0 - move;
        }
      }));
  std::vector<RewardComponent> rewards;
  rewards.push_back(build_reward(pair_space, ScopeIndexSet({0}), RewardKind::deterministic,
                                 [](std::span<const std::size_t> t) { return t[0] % 2 == 1 ? 1.0 : 0.0; }));
  std::vector<std::size_t> starts;
  for (std::size_t c = 0; c < p.copies; ++c) starts.push_back(2 * c);
  FactoredModel model({S}, {p.num_actions}, std::move(transitions), std::move(rewards), p.horizon,
                      true);
  return make_environment("jao", std::move(model), InitialStateRule::uniform_over(std::move(starts)));
}

double jao_optimal_value(double delta, double epsilon, std::size_t horizon) {
  const double move = delta + epsilon;
  const double total = 2.0 * delta + epsilon;
  const double H = static_cast<double>(horizon);
  return move / total * H -
         move / (total * total) * (1.0 - std::pow(1.0 - total, H));
}

double jao_uniform_last_state_probability(double delta, std::size_t horizon) {
  return 0.5 - 0.5 * std::pow(1.0 - 2.0 * delta, static_cast<double>(horizon) - 1.0);
}

FactoredModel make_random_fmdp(const RandomFmdpParams& p, Rng& rng) {
  const auto m = p.state_sizes.size();
  const auto l = p.reward_scopes.size();
  if (p.transition_scopes.size() != m) {
    throw StructuralError("random: one transition scope per state component required");
  }
  if (l == 0) throw StructuralError("random: at least one reward scope required");
  const auto pair_space = pair_space_of(p.state_sizes, p.action_sizes);
  std::vector<TransitionComponent> transitions;
  for (std::size_t i = 0; i < m; ++i) {
    transitions.push_back(build_transition(
        pair_space, p.transition_scopes[i], p.state_sizes[i],
        [&](std::span<const std::size_t>, std::span<double> row) {
          // Dirichlet(1,...,1) via normalized unit exponentials.
          double sum = 0.0;
          for (auto& value : row) {
            value = -std::log(1.0 - rng.uniform());
            sum += value;
          }
          for (auto& value : row) value /= sum;
        }));
  }
  const double cap = 1.0 / static_cast<double>(l);
  std::vector<RewardComponent> rewards;
  for (std::size_t j = 0; j < l; ++j) {
    rewards.push_back(build_reward(pair_space, p.reward_scopes[j], p.reward_kind,
                                   [&](std::span<const std::size_t>) { return cap * rng.uniform(); }));
  }
  return FactoredModel(p.state_sizes, p.action_sizes, std::move(transitions), std::move(rewards),
                       p.horizon, p.reward_known);
}

Environment make_benchmark_fmdp(std::uint64_t instance_seed, std::size_t horizon) {
  RandomFmdpParams params;
  params.state_sizes = {3, 3};
  params.action_sizes = {2, 2};
  params.transition_scopes = {ScopeIndexSet({0, 2}), ScopeIndexSet({1, 3})};
  params.reward_scopes = {ScopeIndexSet({0, 2}), ScopeIndexSet({1, 3})};
  params.horizon = horizon;
  Rng rng(derive_seed(instance_seed, 0xbe9c));
  return make_environment("benchmark", make_random_fmdp(params, rng), InitialStateRule::fixed(0));
}

Environment make_chain(std::size_t horizon) {
  const auto pair_space = pair_space_of({2}, {2});
  std::vector<TransitionComponent> transitions;
  transitions.push_back(build_transition(pair_space, ScopeIndexSet({0, 1}), 2,
                                         [](std::span<const std::size_t> t, std::span<double> row) {
                                           row[0] = row[1] = 0.0;
                                           row[t[1] == 0 ? t[0] : 1 - t[0]] = 1.0;
                                         }));
  std::vector<RewardComponent> rewards;
  rewards.push_back(build_reward(pair_space, ScopeIndexSet({0}), RewardKind::deterministic,
                                 [](std::span<const std::size_t> t) { return t[0] == 1 ? 1.0 : 0.0; }));
  FactoredModel model({2}, {2}, std::move(transitions), std::move(rewards), horizon, true);
  return make_environment("chain", std::move(model), InitialStateRule::fixed(0));
}

// ---------------------------------------------------------------------------
// Registry

namespace {

class SpecArgs {
 public:
  SpecArgs(std::string name, std::map<std::string, std::string> values)
      : name_(std::move(name)), values_(std::move(values)) {}

  void allow(std::vector<std::string> keys) {
    keys.push_back("flatten");
    for (const auto& [key, value] : values_) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        std::string valid;
        for (const auto& k : keys) valid += (valid.empty() ? "" : ", ") + k;
        throw ConfigError("environment '" + name_ + "': unknown key '" + key + "' (valid: " +
                          valid + ")");
      }
    }
  }

  double real(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const auto value = parse_double(it->second);
    if (!value) throw ConfigError("environment '" + name_ + "': " + key + " must be a number");
    return *value;
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const auto value = parse_uint(it->second);
    if (!value) {
      throw ConfigError("environment '" + name_ + "': " + key + " must be a nonnegative integer");
    }
    return static_cast<std::size_t>(*value);
  }

  bool flag(const std::string& key) const { return count(key, 0) != 0; }

 private:
  std::string name_;
  std::map<std::string, std::string> values_;
};

Environment build_named(const std::string& name, SpecArgs& args) {
  if (name == "mab_like") {
    args.allow({"S", "A", "copies", "eps", "base", "H", "degenerate"});
    MabLikeParams p;
    p.state_size = args.count("S", 3);
    p.action_sizes = {args.count("A", 2)};
    p.copies = args.count("copies", 1);
    p.epsilon = args.real("eps", 0.1);
    p.base = args.real("base", 0.5);
    p.horizon = args.count("H", 5);
    p.degenerate = args.flag("degenerate");
    return make_mab_like_fmdp(p);
  }
  if (name == "loop") {
    args.allow({"u", "S", "Su", "A", "eps", "base", "H"});
    LoopParams p;
    p.loop_length = args.count("u", 2);
    const auto S = args.count("S", 2);
    p.component_sizes.assign(p.loop_length, S);
    if (!p.component_sizes.empty()) p.component_sizes.back() = args.count("Su", std::max<std::size_t>(3, S));
    p.action_sizes = {args.count("A", 2)};
    p.epsilon = args.real("eps", 0.1);
    p.base = args.real("base", 0.5);
    p.horizon = args.count("H", 5);
    return make_loop_fmdp(p);
  }
  if (name == "jao") {
    args.allow({"delta", "eps", "copies", "A", "H"});
    JaoParams p;
    p.delta = args.real("delta", 0.25);
    p.epsilon = args.real("eps", 0.1);
    p.copies = args.count("copies", 1);
    p.num_actions = args.count("A", 2);
    p.horizon = args.count("H", 4);
    return make_jao_episodic(p);
  }
  if (name == "random") {
    args.allow({"m", "S", "A", "H", "l", "extra", "seed"});
    const auto m = args.count("m", 2);
    const auto S = args.count("S", 3);
    const auto extra = args.count("extra", 0);
    const auto l = args.count("l", 1);
    if (m == 0 || l == 0) throw ConfigError("environment 'random': m and l must be >= 1");
    if (extra >= m) throw ConfigError("environment 'random': extra must be < m");
    RandomFmdpParams p;
    p.state_sizes.assign(m, S);
    p.action_sizes = {args.count("A", 4)};
    p.horizon = args.count("H", 5);
    // Component i depends on itself, the next `extra` components cyclically, and the action.
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<std::size_t> scope;
      for (std::size_t k = 0; k <= extra; ++k) scope.push_back((i + k) % m);
      std::sort(scope.begin(), scope.end());
      scope.push_back(m);
      p.transition_scopes.emplace_back(scope);
    }
    for (std::size_t j = 0; j < l; ++j) p.reward_scopes.emplace_back(std::vector<std::size_t>{j % m, m});
    Rng rng(derive_seed(args.count("seed", 1), 0x7a3d));
    return make_environment("random", make_random_fmdp(p, rng), InitialStateRule::fixed(0));
  }
  if (name == "benchmark") {
    args.allow({"seed", "H"});
    return make_benchmark_fmdp(args.count("seed", 2021), args.count("H", 5));
  }
  if (name == "chain") {
    args.allow({"H"});
    return make_chain(args.count("H", 2));
  }
  std::string valid;
  for (const auto& n : environment_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError("unknown environment '" + name + "' (valid: " + valid + ")");
}

}  // namespace

std::vector<std::string> environment_names() {
  return {"benchmark", "chain", "jao", "loop", "mab_like", "random"};
}

Environment environment_from_spec(std::string_view spec) {
  spec = trim(spec);
  const auto colon = spec.find(':');
  const std::string name(trim(spec.substr(0, colon)));
  std::map<std::string, std::string> values;
  if (colon != std::string_view::npos) {
    for (auto part : split(spec.substr(colon + 1), ',')) {
      part = trim(part);
      if (part.empty()) continue;
      const auto eq = part.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("environment spec: expected key=value, got '" + std::string(part) + "'");
      }
      std::string key(trim(part.substr(0, eq)));
      if (values.count(key) != 0) throw ConfigError("environment spec: duplicate key '" + key + "'");
      values.emplace(std::move(key), std::string(trim(part.substr(eq + 1))));
    }
  }
  SpecArgs args(name, values);
  Environment env;
  try {
    env = build_named(name, args);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("environment '" + std::string(spec) + "': " + e.what());
  }
  if (args.flag("flatten")) env = flatten(env);
  env.name = std::string(spec);
  return env;
}

std::string environment_grammar() {
  return
      "Environment spec: name[:key=value[,key=value...]]  (every name also takes flatten=0|1)\n"
      "  benchmark  seed=2021 H=5                     m=2, S_i=3, A=2x2 fixed random FMDP\n"
      "  chain      H=2                                deterministic two-state chain\n"
      "  jao        delta=0.25 eps=0.1 copies=1 A=2 H=4 episodic JAO MDP\n"
      "  loop       u=2 S=2 Su=max(3,S) A=2 eps=0.1 base=0.5 H=5\n"
      "                                                influence-loop lower-bound FMDP\n"
      "  mab_like   S=3 A=2 copies=1 eps=0.1 base=0.5 H=5 degenerate=0\n"
      "                                                MAB-like lower-bound FMDP\n"
      "  random     m=2 S=3 A=4 H=5 l=1 extra=0 seed=1 Dirichlet(1) random FMDP\n"
      "Example: mab_like:S=3,A=4,eps=0.1,H=5,copies=2\n";
}

}  // namespace fmdp

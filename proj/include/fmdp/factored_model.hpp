#pragma once

// Factored MDP structure: factored spaces, scopes, per-component transition
// tables and reward components.
//
// Layout conventions used throughout the library:
//  * flat indices are row-major with component 0 as the most significant digit;
//  * a state-action pair x = (s, a) has the m state components first and the
//    action components after them, so its flat index is s * A + a;
//  * a scope is a strictly ascending list of 0-based state-action component
//    indices, and the cells of a scope are numbered row-major as well.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fmdp/random.hpp"

namespace fmdp {

using Tuple = std::vector<std::size_t>;

class FactoredSpace {
 public:
  FactoredSpace() = default;
  explicit FactoredSpace(std::vector<std::size_t> sizes);

  std::size_t num_components() const { return sizes_.size(); }
  std::size_t component_size(std::size_t i) const { return sizes_.at(i); }
  std::span<const std::size_t> sizes() const { return sizes_; }
  std::size_t total() const { return total_; }

  std::size_t index_of(std::span<const std::size_t> tuple) const;
  Tuple tuple_of(std::size_t index) const;
  void decode(std::size_t index, std::span<std::size_t> out) const;

  bool operator==(const FactoredSpace&) const = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

class ScopeIndexSet {
 public:
  ScopeIndexSet() = default;
  /// Throws StructuralError unless `indices` is strictly ascending.
  explicit ScopeIndexSet(std::vector<std::size_t> indices);

  std::span<const std::size_t> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(std::size_t index) const;

  /// Throws StructuralError if some index is >= n.
  void validate_within(std::size_t n) const;

  /// Sub-space X[I] of a factored space.
  FactoredSpace project(const FactoredSpace& space) const;

  bool operator==(const ScopeIndexSet&) const = default;

 private:
  std::vector<std::size_t> indices_;
};

/// x[I]: the components of x at the scope indices, in ascending order.
Tuple scope_project(std::span<const std::size_t> x, const ScopeIndexSet& scope);

struct TransitionComponent {
  ScopeIndexSet scope;
  /// One probability row over S_i per scope cell, rows stored back to back.
  std::vector<double> rows;
};

enum class RewardKind { bernoulli, deterministic };

std::string to_string(RewardKind kind);
RewardKind reward_kind_from_string(const std::string& text);

/// Component reward r_i with values in [0, 1/l]. A Bernoulli component takes
/// the value 1/l with probability mean * l and 0 otherwise.
struct RewardComponent {
  ScopeIndexSet scope;
  RewardKind kind = RewardKind::bernoulli;
  std::vector<double> means;
};

class FactoredModel {
 public:
  FactoredModel(std::vector<std::size_t> state_sizes, std::vector<std::size_t> action_sizes,
                std::vector<TransitionComponent> transitions,
                std::vector<RewardComponent> rewards, std::size_t horizon, bool reward_known);

  const FactoredSpace& state_space() const { return state_space_; }
  const FactoredSpace& action_space() const { return action_space_; }
  const FactoredSpace& state_action_space() const { return pair_space_; }

  std::size_t num_states() const { return state_space_.total(); }
  std::size_t num_actions() const { return action_space_.total(); }
  std::size_t num_pairs() const { return pair_space_.total(); }
  /// m
  std::size_t num_transition_components() const { return transitions_.size(); }
  /// l
  std::size_t num_reward_components() const { return rewards_.size(); }
  std::size_t horizon() const { return horizon_; }
  bool reward_known() const { return reward_known_; }

  /// Copy of this model with a different reward mode.
  FactoredModel with_reward_known(bool known) const;
  FactoredModel with_horizon(std::size_t horizon) const;

  const TransitionComponent& transition(std::size_t i) const { return transitions_.at(i); }
  const RewardComponent& reward(std::size_t j) const { return rewards_.at(j); }
  const FactoredSpace& transition_scope_space(std::size_t i) const {
    return transition_scope_spaces_.at(i);
  }
  const FactoredSpace& reward_scope_space(std::size_t j) const {
    return reward_scope_spaces_.at(j);
  }

  std::size_t pair_index(std::size_t state, std::size_t action) const {
    return state * num_actions() + action;
  }

  /// Flat scope cell of x[Z_i] for transition component i.
  std::size_t transition_cell(std::size_t i, std::size_t pair) const {
    return transition_cells_[pair * transitions_.size() + i];
  }
  std::size_t reward_cell(std::size_t j, std::size_t pair) const {
    return reward_cells_[pair * rewards_.size() + j];
  }

  /// P_i(. | cell)
  std::span<const double> transition_row(std::size_t i, std::size_t cell) const;
  /// P_i(. | x[Z_i])
  std::span<const double> component_row(std::size_t i, std::size_t pair) const {
    return transition_row(i, transition_cell(i, pair));
  }
  /// The m component rows at x, in component order.
  std::vector<std::span<const double>> component_rows(std::size_t pair) const;

  /// R(x) = sum_j R_j(x[Z_j^r]).
  double expected_reward(std::size_t pair) const;
  /// Upper end 1/l of each component reward range.
  double component_reward_cap() const { return 1.0 / static_cast<double>(rewards_.size()); }

  /// P(. | x) materialized over the full state space.
  std::vector<double> product_transition(std::size_t pair) const;
  std::vector<double> product_transition(std::span<const std::size_t> x) const;

  /// <P(x), V> without materializing P(x).
  double expected_next_value(std::size_t pair, std::span<const double> values) const;

  /// Each component drawn independently from P_i(. | x[Z_i]).
  std::size_t sample_next_state(std::size_t pair, Rng& rng) const;
  Tuple sample_next_state(std::span<const std::size_t> x, Rng& rng) const;

  /// Component rewards r_1..r_l. Throws ModeError in known-reward mode.
  std::vector<double> sample_reward(std::size_t pair, Rng& rng) const;
  std::vector<double> sample_reward(std::span<const std::size_t> x, Rng& rng) const;

 private:
  void validate() const;
  void build_cell_tables();

  FactoredSpace state_space_;
  FactoredSpace action_space_;
  FactoredSpace pair_space_;
  std::vector<TransitionComponent> transitions_;
  std::vector<RewardComponent> rewards_;
  std::vector<FactoredSpace> transition_scope_spaces_;
  std::vector<FactoredSpace> reward_scope_spaces_;
  std::vector<std::size_t> transition_cells_;
  std::vector<std::size_t> reward_cells_;
  std::size_t horizon_ = 1;
  bool reward_known_ = true;
};

/// Same dynamics as `model` with a single state component and a single action
/// component (the trivial factorization, i.e. a nonfactored MDP).
FactoredModel flatten(const FactoredModel& model);

// ---------------------------------------------------------------------------
// Product-distribution algebra over component distributions. The component
// sizes are the lengths of the rows; `values` is laid out row-major over them.

/// E_{prod_i P_i}[V].
double expect_product(std::span<const std::span<const double>> rows,
                      std::span<const double> values);

/// E_{P_{-i}}[V]: expectation over every component except `i`, as a vector
/// over S_i. With a single component this is V itself.
std::vector<double> expect_over_complement(std::span<const std::span<const double>> rows,
                                           std::span<const double> values, std::size_t i);

/// prod_i P_i materialized over the full product space.
std::vector<double> product_distribution(std::span<const std::span<const double>> rows);

/// Var_P(f) computed in two passes around the mean. An all-zero P (an
/// unvisited empirical row) gives 0.
double weighted_variance(std::span<const double> probs, std::span<const double> values);

}  // namespace fmdp

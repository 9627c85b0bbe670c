#pragma once

// Visit counters and empirical estimates kept by the learner: component
// transition frequencies and component reward running statistics.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fmdp/factored_model.hpp"

namespace fmdp {

/// Divisor used for the sample variance of reward components.
enum class VarianceConvention {
  unbiased,  ///< M2 / (n - 1), 0 for n < 2
  biased,    ///< M2 / n, 0 for n < 1
};

std::string to_string(VarianceConvention convention);
VarianceConvention variance_convention_from_string(std::string_view text);

/// Counters of one transition component over its scope cells.
class TransitionCounters {
 public:
  TransitionCounters() = default;
  TransitionCounters(std::size_t cells, std::size_t width);

  std::size_t cells() const { return cells_; }
  std::size_t width() const { return width_; }

  void record(std::size_t cell, std::size_t next_value);

  /// N_i(cell)
  std::uint64_t visits(std::size_t cell) const { return visits_.at(cell); }
  /// N_i(cell, .)
  std::span<const std::uint64_t> successors(std::size_t cell) const {
    return std::span<const std::uint64_t>(successors_).subspan(cell * width_, width_);
  }
  /// successor counts / max{1, N}; all zeros for an unvisited cell.
  std::span<const double> estimate(std::size_t cell) const {
    return std::span<const double>(estimates_).subspan(cell * width_, width_);
  }

  void restore(std::vector<std::uint64_t> visits, std::vector<std::uint64_t> successors);

 private:
  void refresh(std::size_t cell);

  std::size_t cells_ = 0;
  std::size_t width_ = 0;
  std::vector<std::uint64_t> visits_;
  std::vector<std::uint64_t> successors_;
  std::vector<double> estimates_;
};

/// Welford accumulator for one reward scope cell.
struct RewardStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double value) {
    ++count;
    const double delta = value - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (value - mean);
  }

  double variance(VarianceConvention convention) const;
};

class RewardCounters {
 public:
  RewardCounters() = default;
  RewardCounters(std::size_t cells, double upper);

  std::size_t cells() const { return stats_.size(); }
  double upper() const { return upper_; }

  /// Throws DataError unless 0 <= value <= 1/l.
  void record(std::size_t cell, double value);
  const RewardStats& stats(std::size_t cell) const { return stats_.at(cell); }
  void restore(std::vector<RewardStats> stats);

 private:
  std::vector<RewardStats> stats_;
  double upper_ = 1.0;
};

/// All counters of one learning run, shaped after a model's factored structure.
class EstimatorState {
 public:
  explicit EstimatorState(const FactoredModel& model,
                          VarianceConvention convention = VarianceConvention::unbiased);

  std::size_t num_transition_components() const { return transitions_.size(); }
  std::size_t num_reward_components() const { return rewards_.size(); }
  VarianceConvention variance_convention() const { return convention_; }

  const TransitionCounters& transition_counters(std::size_t i) const { return transitions_.at(i); }
  const RewardCounters& reward_counters(std::size_t j) const { return rewards_.at(j); }

  void record_transition(std::size_t i, std::size_t cell, std::size_t next_value);
  /// Replaces component i's counters wholesale. Throws StructuralError on a
  /// shape mismatch or when successor counts do not sum to the visits.
  void restore_transition_counts(std::size_t i, std::vector<std::uint64_t> visits,
                                 std::vector<std::uint64_t> successors) {
    transitions_.at(i).restore(std::move(visits), std::move(successors));
  }
  void record_transition(std::size_t i, std::span<const std::size_t> scope_tuple,
                         std::size_t next_value);
  void record_reward(std::size_t j, std::size_t cell, double value);
  void record_reward(std::size_t j, std::span<const std::size_t> scope_tuple, double value);

  /// P-hat_i(. | cell); the zero vector when the cell was never visited.
  std::span<const double> empirical_transition(std::size_t i, std::size_t cell) const {
    return transitions_[i].estimate(cell);
  }
  std::span<const double> empirical_transition(std::size_t i,
                                               std::span<const std::size_t> scope_tuple) const;

  /// R-hat_j(cell); 0 when unvisited.
  double empirical_reward_mean(std::size_t j, std::size_t cell) const {
    return rewards_[j].stats(cell).mean;
  }
  double empirical_reward_mean(std::size_t j, std::span<const std::size_t> scope_tuple) const;
  double reward_variance(std::size_t j, std::size_t cell) const {
    return rewards_[j].stats(cell).variance(convention_);
  }
  /// R-hat(x) = sum_j R-hat_j(x[Z_j^r]) for a flat state-action index of `model`.
  double empirical_total_reward(const FactoredModel& model, std::size_t pair) const;

  std::uint64_t transition_visits(std::size_t i, std::size_t cell) const {
    return transitions_[i].visits(cell);
  }
  std::uint64_t reward_visits(std::size_t j, std::size_t cell) const {
    return rewards_[j].stats(cell).count;
  }

  /// Checkpoint in the same structured-text format as model files.
  std::string to_text() const;
  /// Restores counters saved by to_text(); the structure must match `model`.
  static EstimatorState from_text(const FactoredModel& model, std::string_view text);

 private:
  std::vector<FactoredSpace> transition_scopes_;
  std::vector<FactoredSpace> reward_scopes_;
  std::vector<TransitionCounters> transitions_;
  std::vector<RewardCounters> rewards_;
  VarianceConvention convention_;
};

}  // namespace fmdp

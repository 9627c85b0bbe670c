#include "fmdp/estimation.hpp"

#include <sstream>

#include "fmdp/errors.hpp"
#include "fmdp/structured_text.hpp"

namespace fmdp {

std::string to_string(VarianceConvention convention) {
  return convention == VarianceConvention::unbiased ? "unbiased" : "biased";
}

VarianceConvention variance_convention_from_string(std::string_view text) {
  if (text == "unbiased") return VarianceConvention::unbiased;
  if (text == "biased") return VarianceConvention::biased;
  throw ConfigError("unknown variance convention '" + std::string(text) +
                    "' (valid: unbiased, biased)");
}

// ---------------------------------------------------------------------------

TransitionCounters::TransitionCounters(std::size_t cells, std::size_t width)
    : cells_(cells),
      width_(width),
      visits_(cells, 0),
      successors_(cells * width, 0),
      estimates_(cells * width, 0.0) {}

void TransitionCounters::record(std::size_t cell, std::size_t next_value) {
  if (cell >= cells_ || next_value >= width_) {
    throw StructuralError("transition counter index out of range");
  }
  ++visits_[cell];
  ++successors_[cell * width_ + next_value];
  refresh(cell);
}

void TransitionCounters::refresh(std::size_t cell) {
  const double denom = static_cast<double>(std::max<std::uint64_t>(1, visits_[cell]));
  for (std::size_t k = 0; k < width_; ++k) {
    estimates_[cell * width_ + k] = static_cast<double>(successors_[cell * width_ + k]) / denom;
  }
}

void TransitionCounters::restore(std::vector<std::uint64_t> visits,
                                 std::vector<std::uint64_t> successors) {
  if (visits.size() != cells_ || successors.size() != cells_ * width_) {
    throw StructuralError("transition counter checkpoint has the wrong shape");
  }
  for (std::size_t c = 0; c < cells_; ++c) {
    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < width_; ++k) sum += successors[c * width_ + k];
    if (sum != visits[c]) {
      throw StructuralError("transition counter checkpoint: successor counts do not sum to visits");
    }
  }
  visits_ = std::move(visits);
  successors_ = std::move(successors);
  for (std::size_t c = 0; c < cells_; ++c) refresh(c);
}

double RewardStats::variance(VarianceConvention convention) const {
  if (convention == VarianceConvention::unbiased) {
    return count < 2 ? 0.0 : m2 / static_cast<double>(count - 1);
  }
  return count < 1 ? 0.0 : m2 / static_cast<double>(count);
}

RewardCounters::RewardCounters(std::size_t cells, double upper) : stats_(cells), upper_(upper) {}

void RewardCounters::record(std::size_t cell, double value) {
  constexpr double kSlack = 1e-12;
  if (!(value >= -kSlack && value <= upper_ + kSlack)) {
    throw DataError("observed reward " + format_double(value) + " outside [0, " +
                    format_double(upper_) + "]");
  }
  stats_.at(cell).add(value);
}

void RewardCounters::restore(std::vector<RewardStats> stats) {
  if (stats.size() != stats_.size()) {
    throw StructuralError("reward counter checkpoint has the wrong shape");
  }
  stats_ = std::move(stats);
}

// ---------------------------------------------------------------------------

EstimatorState::EstimatorState(const FactoredModel& model, VarianceConvention convention)
    : convention_(convention) {
  for (std::size_t i = 0; i < model.num_transition_components(); ++i) {
    transition_scopes_.push_back(model.transition_scope_space(i));
    transitions_.emplace_back(model.transition_scope_space(i).total(),
                              model.state_space().component_size(i));
  }
  for (std::size_t j = 0; j < model.num_reward_components(); ++j) {
    reward_scopes_.push_back(model.reward_scope_space(j));
    rewards_.emplace_back(model.reward_scope_space(j).total(), model.component_reward_cap());
  }
}

void EstimatorState::record_transition(std::size_t i, std::size_t cell, std::size_t next_value) {
  transitions_.at(i).record(cell, next_value);
}

void EstimatorState::record_transition(std::size_t i, std::span<const std::size_t> scope_tuple,
                                       std::size_t next_value) {
  record_transition(i, transition_scopes_.at(i).index_of(scope_tuple), next_value);
}

void EstimatorState::record_reward(std::size_t j, std::size_t cell, double value) {
  rewards_.at(j).record(cell, value);
}

void EstimatorState::record_reward(std::size_t j, std::span<const std::size_t> scope_tuple,
                                   double value) {
  record_reward(j, reward_scopes_.at(j).index_of(scope_tuple), value);
}

std::span<const double> EstimatorState::empirical_transition(
    std::size_t i, std::span<const std::size_t> scope_tuple) const {
  return empirical_transition(i, transition_scopes_.at(i).index_of(scope_tuple));
}

double EstimatorState::empirical_reward_mean(std::size_t j,
                                             std::span<const std::size_t> scope_tuple) const {
  return empirical_reward_mean(j, reward_scopes_.at(j).index_of(scope_tuple));
}

double EstimatorState::empirical_total_reward(const FactoredModel& model, std::size_t pair) const {
  double total = 0.0;
  for (std::size_t j = 0; j < rewards_.size(); ++j) {
    total += rewards_[j].stats(model.reward_cell(j, pair)).mean;
  }
  return total;
}

namespace {

template <typename T>
std::string join_values(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ' ';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

const std::string& require(const TextSection& section, std::string_view key) {
  const auto* entry = section.find(key);
  if (entry == nullptr) {
    throw StructuralError("[" + section.name + "] is missing '" + std::string(key) + "'");
  }
  return entry->value;
}

}  // namespace

std::string EstimatorState::to_text() const {
  std::ostringstream out;
  out << "[estimator]\n";
  out << "format = fmdp-estimator-1\n";
  out << "transition_components = " << transitions_.size() << "\n";
  out << "reward_components = " << rewards_.size() << "\n";
  out << "variance_convention = " << to_string(convention_) << "\n";
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    std::vector<std::uint64_t> visits(t.cells());
    std::vector<std::uint64_t> successors;
    for (std::size_t c = 0; c < t.cells(); ++c) {
      visits[c] = t.visits(c);
      const auto row = t.successors(c);
      successors.insert(successors.end(), row.begin(), row.end());
    }
    out << "\n[transition_counts." << i << "]\n";
    out << "visits = " << join_values(visits) << "\n";
    out << "successors = " << join_values(successors) << "\n";
  }
  for (std::size_t j = 0; j < rewards_.size(); ++j) {
    const auto& r = rewards_[j];
    std::vector<std::uint64_t> counts;
    std::vector<double> means;
    std::vector<double> m2s;
    for (std::size_t c = 0; c < r.cells(); ++c) {
      counts.push_back(r.stats(c).count);
      means.push_back(r.stats(c).mean);
      m2s.push_back(r.stats(c).m2);
    }
    out << "\n[reward_stats." << j << "]\n";
    out << "counts = " << join_values(counts) << "\n";
    out << "means = " << join_values(means) << "\n";
    out << "m2 = " << join_values(m2s) << "\n";
  }
  return out.str();
}

EstimatorState EstimatorState::from_text(const FactoredModel& model, std::string_view text) {
  const auto doc = parse_structured_text(text);
  const auto* header = doc.find("estimator");
  if (header == nullptr) throw StructuralError("missing [estimator] section");
  if (require(*header, "format") != "fmdp-estimator-1") {
    throw StructuralError("unsupported estimator format");
  }
  EstimatorState state(model,
                       variance_convention_from_string(require(*header, "variance_convention")));
  const auto m = parse_uint(require(*header, "transition_components"));
  const auto l = parse_uint(require(*header, "reward_components"));
  if (!m || !l || *m != state.transitions_.size() || *l != state.rewards_.size()) {
    throw StructuralError("estimator checkpoint does not match the model structure");
  }
  for (std::size_t i = 0; i < state.transitions_.size(); ++i) {
    const auto* section = doc.find("transition_counts." + std::to_string(i));
    if (section == nullptr) throw StructuralError("missing transition_counts section");
    state.transitions_[i].restore(parse_uint_list(require(*section, "visits"), "visits"),
                                  parse_uint_list(require(*section, "successors"), "successors"));
  }
  for (std::size_t j = 0; j < state.rewards_.size(); ++j) {
    const auto* section = doc.find("reward_stats." + std::to_string(j));
    if (section == nullptr) throw StructuralError("missing reward_stats section");
    const auto counts = parse_uint_list(require(*section, "counts"), "counts");
    const auto means = parse_double_list(require(*section, "means"), "means");
    const auto m2s = parse_double_list(require(*section, "m2"), "m2");
    if (counts.size() != means.size() || counts.size() != m2s.size()) {
      throw StructuralError("reward_stats lists differ in length");
    }
    std::vector<RewardStats> stats(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c) stats[c] = {counts[c], means[c], m2s[c]};
    state.rewards_[j].restore(std::move(stats));
  }
  return state;
}

}  // namespace fmdp

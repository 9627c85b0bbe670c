#include "fmdp/factored_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fmdp/errors.hpp"

namespace fmdp {

namespace {

constexpr double kRowTolerance = 1e-12;
constexpr double kRewardTolerance = 1e-12;

std::string describe(std::span<const std::size_t> values) {
  std::string out = "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(values[i]);
  }
  return out + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// FactoredSpace

FactoredSpace::FactoredSpace(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  strides_.assign(sizes_.size(), 1);
  total_ = 1;
  for (std::size_t i = sizes_.size(); i-- > 0;) {
    if (sizes_[i] == 0) throw StructuralError("factored space component sizes must be >= 1");
    strides_[i] = total_;
    total_ *= sizes_[i];
  }
}

std::size_t FactoredSpace::index_of(std::span<const std::size_t> tuple) const {
  if (tuple.size() != sizes_.size()) {
    throw StructuralError("tuple " + describe(tuple) + " has " + std::to_string(tuple.size()) +
                          " components, space has " + std::to_string(sizes_.size()));
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] >= sizes_[i]) {
      throw StructuralError("tuple " + describe(tuple) + " out of range at component " +
                            std::to_string(i));
    }
    index += tuple[i] * strides_[i];
  }
  return index;
}

Tuple FactoredSpace::tuple_of(std::size_t index) const {
  Tuple tuple(sizes_.size());
  decode(index, tuple);
  return tuple;
}

void FactoredSpace::decode(std::size_t index, std::span<std::size_t> out) const {
  if (index >= total_) throw StructuralError("flat index out of range");
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    out[i] = index / strides_[i];
    index %= strides_[i];
  }
}

// ---------------------------------------------------------------------------
// ScopeIndexSet

ScopeIndexSet::ScopeIndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  for (std::size_t k = 1; k < indices_.size(); ++k) {
    if (indices_[k] <= indices_[k - 1]) {
      throw StructuralError("scope indices must be strictly ascending: " + describe(indices_));
    }
  }
}

bool ScopeIndexSet::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

void ScopeIndexSet::validate_within(std::size_t n) const {
  if (!indices_.empty() && indices_.back() >= n) {
    throw StructuralError("scope " + describe(indices_) + " exceeds " + std::to_string(n) +
                          " components");
  }
}

FactoredSpace ScopeIndexSet::project(const FactoredSpace& space) const {
  validate_within(space.num_components());
  std::vector<std::size_t> sizes;
  sizes.reserve(indices_.size());
  for (auto index : indices_) sizes.push_back(space.component_size(index));
  return FactoredSpace(std::move(sizes));
}

Tuple scope_project(std::span<const std::size_t> x, const ScopeIndexSet& scope) {
  scope.validate_within(x.size());
  Tuple out;
  out.reserve(scope.size());
  for (auto index : scope.indices()) out.push_back(x[index]);
  return out;
}

std::string to_string(RewardKind kind) {
  return kind == RewardKind::bernoulli ? "bernoulli" : "deterministic";
}

RewardKind reward_kind_from_string(const std::string& text) {
  if (text == "bernoulli") return RewardKind::bernoulli;
  if (text == "deterministic") return RewardKind::deterministic;
  throw StructuralError("unknown reward kind '" + text + "'");
}

// ---------------------------------------------------------------------------
// FactoredModel

FactoredModel::FactoredModel(std::vector<std::size_t> state_sizes,
                             std::vector<std::size_t> action_sizes,
                             std::vector<TransitionComponent> transitions,
                             std::vector<RewardComponent> rewards, std::size_t horizon,
                             bool reward_known)
    : state_space_(state_sizes),
      action_space_(action_sizes),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)),
      horizon_(horizon),
      reward_known_(reward_known) {
  std::vector<std::size_t> pair_sizes = state_sizes;
  pair_sizes.insert(pair_sizes.end(), action_sizes.begin(), action_sizes.end());
  pair_space_ = FactoredSpace(std::move(pair_sizes));
  validate();
  for (const auto& t : transitions_) transition_scope_spaces_.push_back(t.scope.project(pair_space_));
  for (const auto& r : rewards_) reward_scope_spaces_.push_back(r.scope.project(pair_space_));
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto cells = transition_scope_spaces_[i].total();
    const auto width = state_space_.component_size(i);
    if (transitions_[i].rows.size() != cells * width) {
      throw StructuralError("transition component " + std::to_string(i) + " has " +
                            std::to_string(transitions_[i].rows.size()) + " entries, expected " +
                            std::to_string(cells * width));
    }
    for (std::size_t c = 0; c < cells; ++c) {
      double sum = 0.0;
      for (std::size_t k = 0; k < width; ++k) {
        const double p = transitions_[i].rows[c * width + k];
        if (!(p >= 0.0)) {
          throw StructuralError("negative transition probability in component " +
                                std::to_string(i));
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowTolerance) {
        throw StructuralError("transition row " + std::to_string(c) + " of component " +
                              std::to_string(i) + " sums to " + std::to_string(sum));
      }
    }
  }
  const double cap = component_reward_cap();
  for (std::size_t j = 0; j < rewards_.size(); ++j) {
    const auto cells = reward_scope_spaces_[j].total();
    if (rewards_[j].means.size() != cells) {
      throw StructuralError("reward component " + std::to_string(j) + " has " +
                            std::to_string(rewards_[j].means.size()) + " means, expected " +
                            std::to_string(cells));
    }
    for (double mean : rewards_[j].means) {
      if (!(mean >= -kRewardTolerance && mean <= cap + kRewardTolerance)) {
        throw StructuralError("reward mean outside [0, 1/l] in component " + std::to_string(j));
      }
    }
  }
  build_cell_tables();
}

void FactoredModel::validate() const {
  const auto m = state_space_.num_components();
  if (m == 0) throw StructuralError("at least one state component is required");
  for (auto size : state_space_.sizes()) {
    if (size < 2) throw StructuralError("state component sizes must be >= 2");
  }
  if (action_space_.num_components() == 0) {
    throw StructuralError("at least one action component is required");
  }
  if (transitions_.size() != m) {
    throw StructuralError("expected one transition component per state component");
  }
  if (rewards_.empty()) throw StructuralError("at least one reward component is required");
  if (horizon_ == 0) throw StructuralError("horizon must be >= 1");
  for (const auto& t : transitions_) t.scope.validate_within(pair_space_.num_components());
  for (const auto& r : rewards_) r.scope.validate_within(pair_space_.num_components());
}

void FactoredModel::build_cell_tables() {
  const auto n = pair_space_.num_components();
  const auto m = transitions_.size();
  const auto l = rewards_.size();
  transition_cells_.resize(num_pairs() * m);
  reward_cells_.resize(num_pairs() * l);
  Tuple x(n);
  Tuple sub;
  for (std::size_t pair = 0; pair < num_pairs(); ++pair) {
    pair_space_.decode(pair, x);
    for (std::size_t i = 0; i < m; ++i) {
      sub = scope_project(x, transitions_[i].scope);
      transition_cells_[pair * m + i] = transition_scope_spaces_[i].index_of(sub);
    }
    for (std::size_t j = 0; j < l; ++j) {
      sub = scope_project(x, rewards_[j].scope);
      reward_cells_[pair * l + j] = reward_scope_spaces_[j].index_of(sub);
    }
  }
}

FactoredModel FactoredModel::with_reward_known(bool known) const {
  FactoredModel copy = *this;
  copy.reward_known_ = known;
  return copy;
}

FactoredModel FactoredModel::with_horizon(std::size_t horizon) const {
  if (horizon == 0) throw StructuralError("horizon must be >= 1");
  FactoredModel copy = *this;
  copy.horizon_ = horizon;
  return copy;
}

std::span<const double> FactoredModel::transition_row(std::size_t i, std::size_t cell) const {
  const auto width = state_space_.component_size(i);
  return std::span<const double>(transitions_.at(i).rows).subspan(cell * width, width);
}

std::vector<std::span<const double>> FactoredModel::component_rows(std::size_t pair) const {
  std::vector<std::span<const double>> rows;
  rows.reserve(transitions_.size());
  for (std::size_t i = 0; i < transitions_.size(); ++i) rows.push_back(component_row(i, pair));
  return rows;
}

double FactoredModel::expected_reward(std::size_t pair) const {
  double total = 0.0;
  for (std::size_t j = 0; j < rewards_.size(); ++j) {
    total += rewards_[j].means[reward_cell(j, pair)];
  }
  return total;
}

std::vector<double> FactoredModel::product_transition(std::size_t pair) const {
  const auto rows = component_rows(pair);
  return product_distribution(rows);
}

std::vector<double> FactoredModel::product_transition(std::span<const std::size_t> x) const {
  return product_transition(pair_space_.index_of(x));
}

double FactoredModel::expected_next_value(std::size_t pair, std::span<const double> values) const {
  const auto rows = component_rows(pair);
  return expect_product(rows, values);
}

std::size_t FactoredModel::sample_next_state(std::size_t pair, Rng& rng) const {
  std::size_t next = 0;
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    next = next * state_space_.component_size(i) + rng.categorical(component_row(i, pair));
  }
  return next;
}

Tuple FactoredModel::sample_next_state(std::span<const std::size_t> x, Rng& rng) const {
  return state_space_.tuple_of(sample_next_state(pair_space_.index_of(x), rng));
}

std::vector<double> FactoredModel::sample_reward(std::size_t pair, Rng& rng) const {
  if (reward_known_) throw ModeError("sample_reward is unavailable in known-reward mode");
  const double cap = component_reward_cap();
  std::vector<double> out(rewards_.size());
  for (std::size_t j = 0; j < rewards_.size(); ++j) {
    const double mean = rewards_[j].means[reward_cell(j, pair)];
    if (rewards_[j].kind == RewardKind::deterministic) {
      out[j] = mean;
    } else {
      out[j] = rng.uniform() < mean / cap ? cap : 0.0;
    }
  }
  return out;
}

std::vector<double> FactoredModel::sample_reward(std::span<const std::size_t> x, Rng& rng) const {
  return sample_reward(pair_space_.index_of(x), rng);
}

FactoredModel flatten(const FactoredModel& model) {
  const auto S = model.num_states();
  const auto A = model.num_actions();
  TransitionComponent transition{ScopeIndexSet({0, 1}), {}};
  transition.rows.reserve(model.num_pairs() * S);
  for (std::size_t pair = 0; pair < model.num_pairs(); ++pair) {
    const auto row = model.product_transition(pair);
    transition.rows.insert(transition.rows.end(), row.begin(), row.end());
  }
  std::vector<RewardComponent> rewards;
  for (std::size_t j = 0; j < model.num_reward_components(); ++j) {
    RewardComponent reward{ScopeIndexSet({0, 1}), model.reward(j).kind, {}};
    reward.means.reserve(model.num_pairs());
    for (std::size_t pair = 0; pair < model.num_pairs(); ++pair) {
      reward.means.push_back(model.reward(j).means[model.reward_cell(j, pair)]);
    }
    rewards.push_back(std::move(reward));
  }
  return FactoredModel({S}, {A}, {std::move(transition)}, std::move(rewards), model.horizon(),
                       model.reward_known());
}

// ---------------------------------------------------------------------------
// Product-distribution algebra

namespace {

// values viewed as (outer, inner); contracts the inner axis with `row`.
void contract_back(std::span<const double> values, std::span<const double> row,
                   std::vector<double>& out) {
  const auto inner = row.size();
  const auto outer = values.size() / inner;
  out.assign(outer, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    double acc = 0.0;
    const double* v = values.data() + o * inner;
    for (std::size_t k = 0; k < inner; ++k) acc += row[k] * v[k];
    out[o] = acc;
  }
}

// values viewed as (front, rest); contracts the front axis with `row`.
void contract_front(std::span<const double> values, std::span<const double> row,
                    std::vector<double>& out) {
  const auto front = row.size();
  const auto rest = values.size() / front;
  out.assign(rest, 0.0);
  for (std::size_t k = 0; k < front; ++k) {
    const double p = row[k];
    if (p == 0.0) continue;
    const double* v = values.data() + k * rest;
    for (std::size_t r = 0; r < rest; ++r) out[r] += p * v[r];
  }
}

std::size_t product_size(std::span<const std::span<const double>> rows) {
  std::size_t total = 1;
  for (const auto& row : rows) total *= row.size();
  return total;
}

}  // namespace

double expect_product(std::span<const std::span<const double>> rows,
                      std::span<const double> values) {
  if (values.size() != product_size(rows)) {
    throw StructuralError("value vector length does not match the product space");
  }
  if (rows.empty()) return values.empty() ? 0.0 : values[0];
  std::vector<double> current(values.begin(), values.end());
  std::vector<double> next;
  for (std::size_t i = rows.size(); i-- > 0;) {
    contract_back(current, rows[i], next);
    current.swap(next);
  }
  return current[0];
}

std::vector<double> expect_over_complement(std::span<const std::span<const double>> rows,
                                           std::span<const double> values, std::size_t i) {
  if (i >= rows.size()) throw StructuralError("component index out of range");
  if (values.size() != product_size(rows)) {
    throw StructuralError("value vector length does not match the product space");
  }
  std::vector<double> current(values.begin(), values.end());
  std::vector<double> next;
  for (std::size_t j = rows.size(); j-- > i + 1;) {
    contract_back(current, rows[j], next);
    current.swap(next);
  }
  for (std::size_t j = 0; j < i; ++j) {
    contract_front(current, rows[j], next);
    current.swap(next);
  }
  return current;
}

std::vector<double> product_distribution(std::span<const std::span<const double>> rows) {
  std::vector<double> out{1.0};
  std::vector<double> next;
  for (const auto& row : rows) {
    next.assign(out.size() * row.size(), 0.0);
    for (std::size_t a = 0; a < out.size(); ++a) {
      for (std::size_t k = 0; k < row.size(); ++k) next[a * row.size() + k] = out[a] * row[k];
    }
    out.swap(next);
  }
  return out;
}

double weighted_variance(std::span<const double> probs, std::span<const double> values) {
  if (probs.size() != values.size()) throw StructuralError("variance: size mismatch");
  double mean = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) mean += probs[k] * values[k];
  double var = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double d = values[k] - mean;
    var += probs[k] * d * d;
  }
  return std::max(0.0, var);
}

}  // namespace fmdp

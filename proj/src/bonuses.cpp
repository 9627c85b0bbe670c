#include "fmdp/bonuses.hpp"

#include <cmath>
#include <vector>

#include "fmdp/errors.hpp"

namespace fmdp {

namespace {

double clamped(std::uint64_t count) {
  return static_cast<double>(count == 0 ? 1 : count);
}

double cross_component_sum(std::span<const std::uint64_t> counts,
                           std::span<const std::size_t> sizes) {
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t j = i + 1; j < counts.size(); ++j) {
      total += std::sqrt(static_cast<double>(sizes[i]) * static_cast<double>(sizes[j]) /
                         (clamped(counts[i]) * clamped(counts[j])));
    }
  }
  return total;
}

void check_sizes(std::span<const std::uint64_t> counts, std::span<const std::size_t> sizes) {
  if (counts.size() != sizes.size()) throw StructuralError("bonus: counts and sizes differ in length");
}

}  // namespace

std::string to_string(BonusKind kind) {
  switch (kind) {
    case BonusKind::hoeffding:
      return "hoeffding";
    case BonusKind::bernstein:
      return "bernstein";
    case BonusKind::l1_baseline:
      return "l1_baseline";
  }
  return "hoeffding";
}

BonusKind bonus_kind_from_string(std::string_view text) {
  if (text == "hoeffding") return BonusKind::hoeffding;
  if (text == "bernstein") return BonusKind::bernstein;
  if (text == "l1_baseline") return BonusKind::l1_baseline;
  throw ConfigError("unknown bonus kind '" + std::string(text) +
                    "' (valid: hoeffding, bernstein, l1_baseline)");
}

LogFactor log_factor(std::size_t m, std::size_t l, std::size_t S, std::size_t X, std::uint64_t T,
                     double delta) {
  if (m == 0 || l == 0 || S == 0 || X == 0 || T == 0) {
    throw ParameterError("log factor: m, l, S, X and T must be positive");
  }
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("log factor: delta must lie in (0, 1]");
  // Accumulate in log space; the product can overflow for large spaces.
  const double value = std::log(16.0) + std::log(static_cast<double>(m)) +
                       std::log(static_cast<double>(l)) + std::log(static_cast<double>(S)) +
                       std::log(static_cast<double>(X)) + std::log(static_cast<double>(T)) -
                       std::log(delta);
  return LogFactor{value, m, l, S, X, T, delta};
}

double hoeffding_transition_bonus(std::span<const std::uint64_t> counts,
                                  std::span<const std::size_t> sizes, double horizon, double L) {
  check_sizes(counts, sizes);
  double component = 0.0;
  for (auto n : counts) component += horizon * std::sqrt(L / (2.0 * clamped(n)));
  return component + 2.0 * horizon * L * cross_component_sum(counts, sizes);
}

double hoeffding_reward_bonus(std::span<const std::uint64_t> counts, double L) {
  double total = 0.0;
  for (auto n : counts) total += std::sqrt(L / (2.0 * clamped(n)));
  return total;
}

double component_variance_term(std::span<const std::span<const double>> rows,
                               std::span<const double> values, std::size_t i, double L) {
  const auto marginal = expect_over_complement(rows, values, i);
  return 2.0 * std::sqrt(L) * std::sqrt(weighted_variance(rows[i], marginal));
}

double product_l2_norm(std::span<const std::span<const double>> rows,
                       std::span<const double> values) {
  std::vector<double> squared(values.size());
  for (std::size_t s = 0; s < values.size(); ++s) squared[s] = values[s] * values[s];
  return std::sqrt(std::max(0.0, expect_product(rows, squared)));
}

double bernstein_transition_bonus(std::span<const std::uint64_t> counts,
                                  std::span<const std::size_t> sizes, double horizon, double L,
                                  std::span<const std::span<const double>> rows,
                                  std::span<const double> ucb_next,
                                  std::span<const double> lcb_next) {
  check_sizes(counts, sizes);
  if (rows.size() != counts.size()) throw StructuralError("bonus: one row per component required");
  if (ucb_next.size() != lcb_next.size()) throw StructuralError("bonus: value vectors differ in length");
  std::vector<double> gap(ucb_next.size());
  for (std::size_t s = 0; s < gap.size(); ++s) {
    gap[s] = ucb_next[s] - lcb_next[s];
    if (gap[s] < -1e-9) {
      throw ConsistencyError("upper bound below lower bound at state " + std::to_string(s));
    }
  }
  const double gap_norm = std::sqrt(2.0 * L) * product_l2_norm(rows, gap);
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double root = std::sqrt(clamped(counts[i]));
    total += component_variance_term(rows, ucb_next, i, L) / root;
    total += gap_norm / root;
    total += 5.0 * horizon * L / clamped(counts[i]);
  }
  return total + 11.0 * horizon * L * cross_component_sum(counts, sizes);
}

double bernstein_reward_bonus(std::span<const std::uint64_t> counts,
                              std::span<const double> variances, double L) {
  if (counts.size() != variances.size()) {
    throw StructuralError("bonus: counts and variances differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double n = clamped(counts[i]);
    total += std::sqrt(4.0 * std::max(0.0, variances[i]) * L / n) + 14.0 * L / (3.0 * n);
  }
  return total;
}

double l1_baseline_transition_bonus(std::span<const std::uint64_t> counts,
                                    std::span<const std::size_t> sizes, double horizon, double L) {
  check_sizes(counts, sizes);
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    total += horizon * std::sqrt(2.0 * static_cast<double>(sizes[i]) * L / clamped(counts[i]));
  }
  return total;
}

// ---------------------------------------------------------------------------

double transition_bonus(BonusKind kind, const BonusContext& ctx, std::size_t pair) {
  const auto& model = *ctx.model;
  const auto& est = *ctx.estimates;
  const auto m = model.num_transition_components();
  std::vector<std::uint64_t> counts(m);
  for (std::size_t i = 0; i < m; ++i) {
    counts[i] = est.transition_visits(i, model.transition_cell(i, pair));
  }
  const auto sizes = model.state_space().sizes();
  switch (kind) {
    case BonusKind::hoeffding:
      return hoeffding_transition_bonus(counts, sizes, ctx.horizon, ctx.L);
    case BonusKind::l1_baseline:
      return l1_baseline_transition_bonus(counts, sizes, ctx.horizon, ctx.L);
    case BonusKind::bernstein: {
      std::vector<std::span<const double>> rows(m);
      for (std::size_t i = 0; i < m; ++i) {
        rows[i] = est.empirical_transition(i, model.transition_cell(i, pair));
      }
      return bernstein_transition_bonus(counts, sizes, ctx.horizon, ctx.L, rows, ctx.ucb_next,
                                        ctx.lcb_next);
    }
  }
  return 0.0;
}

double reward_bonus(BonusKind kind, const BonusContext& ctx, std::size_t pair) {
  if (ctx.reward_known) throw ModeError("reward bonus is not used when rewards are known");
  const auto& model = *ctx.model;
  const auto& est = *ctx.estimates;
  const auto l = model.num_reward_components();
  std::vector<std::uint64_t> counts(l);
  for (std::size_t j = 0; j < l; ++j) counts[j] = est.reward_visits(j, model.reward_cell(j, pair));
  if (kind != BonusKind::bernstein) return hoeffding_reward_bonus(counts, ctx.L);
  std::vector<double> variances(l);
  for (std::size_t j = 0; j < l; ++j) variances[j] = est.reward_variance(j, model.reward_cell(j, pair));
  return bernstein_reward_bonus(counts, variances, ctx.L);
}

}  // namespace fmdp

#pragma once

// Log factor and exploration bonuses.
//
// Every count passed to these functions is read through max{1, N}, so an
// unvisited cell behaves like a cell visited once.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "fmdp/estimation.hpp"
#include "fmdp/factored_model.hpp"

namespace fmdp {

enum class BonusKind { hoeffding, bernstein, l1_baseline };

std::string to_string(BonusKind kind);
BonusKind bonus_kind_from_string(std::string_view text);

struct LogFactor {
  double value = 0.0;
  std::size_t m = 1;
  std::size_t l = 1;
  std::size_t S = 1;
  std::size_t X = 1;
  std::uint64_t T = 1;
  double delta = 1.0;
};

/// L = ln(16 m l S X T / delta). Requires positive sizes and 0 < delta <= 1.
LogFactor log_factor(std::size_t m, std::size_t l, std::size_t S, std::size_t X, std::uint64_t T,
                     double delta);

// ---------------------------------------------------------------------------
// Count-level formulas. `counts[i]` is N_i(x) (or n_i(x) for rewards) and
// `sizes[i]` is S_i.

/// sum_i H sqrt(L / (2 N_i)) + sum_{i<j} 2 H L sqrt(S_i S_j / (N_i N_j))
double hoeffding_transition_bonus(std::span<const std::uint64_t> counts,
                                  std::span<const std::size_t> sizes, double horizon, double L);

/// sum_i sqrt(L / (2 n_i))
double hoeffding_reward_bonus(std::span<const std::uint64_t> counts, double L);

/// g_i(P, V) = 2 sqrt(L) sqrt(Var_{P_i} E_{P_{-i}}[V])
double component_variance_term(std::span<const std::span<const double>> rows,
                               std::span<const double> values, std::size_t i, double L);

/// ||X||_{2,P} = sqrt(E_P[X^2]) for P the product of `rows`.
double product_l2_norm(std::span<const std::span<const double>> rows,
                       std::span<const double> values);

/// sum_i g_i(P-hat, V-bar_{h+1}) / sqrt(N_i)
///   + sum_i sqrt(2L) ||V-bar_{h+1} - V-under_{h+1}||_{2,P-hat} / sqrt(N_i)
///   + sum_{i<j} 11 H L sqrt(S_i S_j / (N_i N_j)) + sum_i 5 H L / N_i
/// Throws ConsistencyError if ucb_next < lcb_next somewhere.
double bernstein_transition_bonus(std::span<const std::uint64_t> counts,
                                  std::span<const std::size_t> sizes, double horizon, double L,
                                  std::span<const std::span<const double>> rows,
                                  std::span<const double> ucb_next,
                                  std::span<const double> lcb_next);

/// sum_i sqrt(4 Var_i L / n_i) + sum_i 14 L / (3 n_i)
double bernstein_reward_bonus(std::span<const std::uint64_t> counts,
                              std::span<const double> variances, double L);

/// sum_i H sqrt(2 S_i L / N_i), the L1-concentration bonus.
double l1_baseline_transition_bonus(std::span<const std::uint64_t> counts,
                                    std::span<const std::size_t> sizes, double horizon, double L);

// ---------------------------------------------------------------------------
// Model-level evaluation at a state-action pair.

struct BonusContext {
  const FactoredModel* model = nullptr;
  const EstimatorState* estimates = nullptr;
  double horizon = 1.0;
  double L = 1.0;
  bool reward_known = true;
  /// V-bar_{h+1} and V-under_{h+1}; read by the Bernstein transition bonus only.
  std::span<const double> ucb_next;
  std::span<const double> lcb_next;
};

double transition_bonus(BonusKind kind, const BonusContext& ctx, std::size_t pair);
/// Throws ModeError in known-reward mode. The L1 baseline uses the Hoeffding
/// reward bonus.
double reward_bonus(BonusKind kind, const BonusContext& ctx, std::size_t pair);

}  // namespace fmdp

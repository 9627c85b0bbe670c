#pragma once

// Executable property checks, grouped into named suites for the CLI and
// shared with the acceptance test.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fmdp/learner.hpp"

namespace fmdp {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const;
};

struct SuiteOptions {
  std::size_t jobs = 1;
};

/// invariants, optimism, lowerbound, oracle, regret.
std::vector<std::string> suite_names();
/// Throws ConfigError on an unknown suite name.
SuiteReport run_suite(std::string_view name, const SuiteOptions& options = {});

/// One line per check: `PASS <suite>/<check> <detail>` or `FAIL ...`.
std::string format_report(const SuiteReport& report);

// Individual checks.

/// <P-hat product - P product, V> against the per-component telescoping sum,
/// both by enumeration over the full product space.
CheckResult check_inverse_telescoping(std::size_t instances, std::uint64_t seed,
                                      double tolerance = 1e-10);
/// Var_{P_i}(E_{P_-i} V) <= Var_P(V) + tolerance.
CheckResult check_component_variance_bound(std::size_t instances, std::uint64_t seed,
                                           double tolerance = 1e-12);
/// Exact V*_1(s_0) on the JAO instance against its closed form, over the
/// (delta, epsilon, H) grid.
CheckResult check_jao_optimal_value(double tolerance = 1e-10);
/// Simulated P(s_H = s_1) on the uniform JAO instance against its closed form.
CheckResult check_jao_occupancy(std::size_t episodes, std::uint64_t seed, double sigmas = 3.0);
/// m = 1 Hoeffding transition bonus equals H * sqrt(L / (2N)) exactly.
CheckResult check_single_component_reduction();
/// UCB >= V* everywhere (and LCB <= V* for F-EULER) in enough seeds.
CheckResult check_empirical_optimism(std::size_t runs, std::size_t episodes,
                                     std::size_t required, std::size_t jobs);
/// Last-decile mean regret <= ratio * first-decile mean, for every agent kind.
CheckResult check_sublinear_regret(std::size_t seeds, std::size_t episodes, std::size_t required,
                                   double ratio, std::size_t jobs);
/// Factored F-UCBVI reaches the regret-slope threshold before its m = 1 form.
CheckResult check_factorization_advantage(std::size_t seeds, std::size_t episodes,
                                          std::size_t required, std::size_t jobs);
/// Median cumulative regret of F-EULER <= slack * that of F-UCBVI.
CheckResult check_euler_not_worse(std::size_t seeds, std::size_t episodes, double slack,
                                  std::size_t jobs);
/// MAB-like optimal gap and uniform-policy regret against their closed forms.
CheckResult check_mab_like_gaps(double tolerance = 1e-10);
/// Repeated experiments produce byte-identical CSV files.
CheckResult check_determinism();

/// Smaller checks used by the suites.
CheckResult check_planner_bounds(std::size_t instances, std::uint64_t seed);
CheckResult check_optimal_dominates_policies(std::size_t instances, std::uint64_t seed);
CheckResult check_chain_values();
CheckResult check_monte_carlo_policy_value(std::size_t episodes, std::uint64_t seed);
CheckResult check_zero_gap_regret();
CheckResult check_loop_construction();

/// Episodes until the moving mean of instantaneous regret over `window`
/// episodes first drops to `threshold`; curve size + 1 if it never does.
std::size_t episodes_to_threshold(const RegretCurve& curve, double threshold, std::size_t window);

}  // namespace fmdp

#include <gtest/gtest.h>

#include <algorithm>

#include "fmdp/environments.hpp"
#include "fmdp/errors.hpp"
#include "fmdp/planner.hpp"
#include "fmdp/random.hpp"
#include "test_support.hpp"

using namespace fmdp;

namespace {

// Brute-force V* by recursion over every deterministic continuation.
double brute_optimal(const FactoredModel& model, std::size_t t, std::size_t s) {
  if (t == model.horizon()) return 0.0;
  double best = -1.0;
  for (std::size_t a = 0; a < model.num_actions(); ++a) {
    const auto pair = model.pair_index(s, a);
    double q = model.expected_reward(pair);
    for (std::size_t next = 0; next < model.num_states(); ++next) {
      const double p = fmdp::testing::brute_product(model, pair, next);
      if (p > 0.0) q += p * brute_optimal(model, t + 1, next);
    }
    best = std::max(best, q);
  }
  return best;
}

FactoredModel random_model(Rng& rng, std::size_t horizon, bool reward_known = true) {
  RandomFmdpParams params;
  params.state_sizes = {2, 3};
  params.action_sizes = {2};
  params.transition_scopes = {ScopeIndexSet({0, 2}), ScopeIndexSet({0, 1, 2})};
  params.reward_scopes = {ScopeIndexSet({1, 2})};
  params.horizon = horizon;
  params.reward_known = reward_known;
  return make_random_fmdp(params, rng);
}

}  // namespace

TEST(ExactValueIteration, ChainValues) {
  const auto env = make_chain(2);
  const auto opt = exact_value_iteration(*env.model);
  EXPECT_EQ(opt.values[0][0], 1.0);
  EXPECT_EQ(opt.values[0][1], 2.0);
  EXPECT_EQ(opt.values[1][0], 0.0);
  EXPECT_EQ(opt.values[1][1], 1.0);
  EXPECT_EQ(opt.values[2][0], 0.0);
  EXPECT_EQ(opt.policy.action(0, 0), 1u);
  EXPECT_EQ(opt.policy.action(0, 1), 0u);
}

TEST(ExactValueIteration, MatchesBruteForceRecursion) {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto model = random_model(rng, 3);
    const auto opt = exact_value_iteration(model);
    for (std::size_t s = 0; s < model.num_states(); ++s) {
      EXPECT_NEAR(opt.values[0][s], brute_optimal(model, 0, s), 1e-12);
    }
  }
}

TEST(ExactValueIteration, OptimalDominatesDeterministicAndUniformPolicies) {
  Rng rng(78);
  for (int trial = 0; trial < 10; ++trial) {
    const auto model = random_model(rng, 4);
    const auto opt = exact_value_iteration(model);
    const auto worst = exact_value_iteration(model, Objective::minimize);
    const auto uniform = evaluate_policy(
        model, StochasticPolicy::uniform(4, model.num_states(), model.num_actions()));
    DeterministicPolicy pi(4, model.num_states());
    for (std::size_t t = 0; t < 4; ++t) {
      for (std::size_t s = 0; s < model.num_states(); ++s) pi.set(t, s, rng.below(model.num_actions()));
    }
    const auto v_pi = evaluate_policy(model, pi);
    const auto v_opt = evaluate_policy(model, opt.policy);
    for (std::size_t s = 0; s < model.num_states(); ++s) {
      EXPECT_GE(opt.values[0][s] + 1e-12, v_pi[0][s]);
      EXPECT_GE(opt.values[0][s] + 1e-12, uniform[0][s]);
      EXPECT_LE(worst.values[0][s], v_pi[0][s] + 1e-12);
      EXPECT_NEAR(v_opt[0][s], opt.values[0][s], 1e-12);
    }
  }
}

TEST(ExactValueIteration, TiesGoToLowestAction) {
  // Two actions with identical dynamics and rewards.
  std::vector<TransitionComponent> t{{ScopeIndexSet({0}), {0.5, 0.5, 0.5, 0.5}}};
  std::vector<RewardComponent> r{{ScopeIndexSet({0}), RewardKind::bernoulli, {0.2, 0.7}}};
  FactoredModel model({2}, {3}, t, r, 3, true);
  const auto opt = exact_value_iteration(model);
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t s = 0; s < 2; ++s) EXPECT_EQ(opt.policy.action(t, s), 0u);
  }
}

TEST(ViOptimism, NoDataGivesTheHorizonCap) {
  const auto model = fmdp::testing::small_model(false, 4);
  EstimatorState est(model);
  for (auto kind : {BonusKind::hoeffding, BonusKind::bernstein, BonusKind::l1_baseline}) {
    PlannerOptions options;
    options.bonus = kind;
    options.reward_known = false;
    options.track_lcb = true;
    options.L = 2.0;
    const auto bounds = vi_optimism(model, est, options);
    for (std::size_t t = 0; t < 4; ++t) {
      for (std::size_t s = 0; s < model.num_states(); ++s) {
        EXPECT_EQ(bounds.ucb[t][s], static_cast<double>(4 - t));
        EXPECT_EQ(bounds.lcb[t][s], 0.0);
        EXPECT_EQ(bounds.policy.action(t, s), 0u);
      }
    }
    for (std::size_t s = 0; s < model.num_states(); ++s) {
      EXPECT_EQ(bounds.ucb[4][s], 0.0);
    }
  }
}

TEST(ViOptimism, HorizonOneIsRewardPlusBonus) {
  const auto model = fmdp::testing::small_model(true, 1);
  EstimatorState est(model);
  for (int k = 0; k < 4; ++k) est.record_transition(0, std::size_t{0}, 0);
  PlannerOptions options;
  options.L = 1e-6;
  const auto bounds = vi_optimism(model, est, options);
  for (std::size_t s = 0; s < model.num_states(); ++s) {
    double best = 0.0;
    for (std::size_t a = 0; a < model.num_actions(); ++a) {
      best = std::max(best, model.expected_reward(model.pair_index(s, a)));
    }
    EXPECT_GE(bounds.ucb[0][s], best);
    EXPECT_LE(bounds.ucb[0][s], 1.0);
  }
}

TEST(ViOptimism, BoundsAreOrderedAndClipped) {
  Rng rng(90);
  for (int trial = 0; trial < 20; ++trial) {
    const auto model = random_model(rng, 4, trial % 2 == 0);
    EstimatorState est(model);
    const auto n = rng.below(200);
    for (std::uint64_t k = 0; k < n; ++k) {
      const auto pair = rng.below(model.num_pairs());
      const auto x = model.state_action_space().tuple_of(pair);
      const auto next = model.sample_next_state(x, rng);
      for (std::size_t i = 0; i < model.num_transition_components(); ++i) {
        est.record_transition(i, scope_project(x, model.transition(i).scope), next[i]);
      }
      if (!model.reward_known()) {
        est.record_reward(0, scope_project(x, model.reward(0).scope), rng.uniform());
      }
    }
    for (auto kind : {BonusKind::hoeffding, BonusKind::bernstein, BonusKind::l1_baseline}) {
      PlannerOptions options;
      options.bonus = kind;
      options.reward_known = model.reward_known();
      options.track_lcb = true;
      options.L = 0.5 + rng.uniform();
      const auto bounds = vi_optimism(model, est, options);
      for (std::size_t t = 0; t <= 4; ++t) {
        for (std::size_t s = 0; s < model.num_states(); ++s) {
          ASSERT_LE(bounds.lcb[t][s], bounds.ucb[t][s]);
          ASSERT_GE(bounds.lcb[t][s], 0.0);
          ASSERT_LE(bounds.ucb[t][s], static_cast<double>(4 - t));
        }
      }
    }
  }
}

TEST(ViOptimism, ZeroRewardsGiveZeroLowerBound) {
  std::vector<TransitionComponent> t{{ScopeIndexSet({0, 1}), {1, 0, 0, 1, 0, 1, 1, 0}}};
  std::vector<RewardComponent> r{{ScopeIndexSet({0}), RewardKind::bernoulli, {0.0, 0.0}}};
  FactoredModel model({2}, {2}, t, r, 3, true);
  EstimatorState est(model);
  for (int k = 0; k < 100; ++k) {
    for (std::size_t pair = 0; pair < 4; ++pair) {
      est.record_transition(0, pair, model.component_row(0, pair)[0] == 1.0 ? 0 : 1);
    }
  }
  PlannerOptions options;
  options.track_lcb = true;
  options.bonus = BonusKind::bernstein;
  const auto bounds = vi_optimism(model, est, options);
  const auto opt = exact_value_iteration(model);
  for (std::size_t s = 0; s < 2; ++s) {
    EXPECT_EQ(opt.values[0][s], 0.0);
    EXPECT_EQ(bounds.lcb[0][s], 0.0);
    EXPECT_GT(bounds.ucb[0][s], 0.0);
  }
}

TEST(ViOptimism, DeterministicForIdenticalInputs) {
  Rng rng(5);
  const auto model = random_model(rng, 3);
  EstimatorState est(model);
  for (int k = 0; k < 60; ++k) est.record_transition(k % 2, rng.below(k % 2 ? 12 : 4), rng.below(k % 2 ? 3 : 2));
  PlannerOptions options;
  options.bonus = BonusKind::bernstein;
  options.track_lcb = true;
  options.L = 3.0;
  const auto a = vi_optimism(model, est, options);
  const auto b = vi_optimism(model, est, options);
  EXPECT_EQ(a.ucb, b.ucb);
  EXPECT_EQ(a.lcb, b.lcb);
  EXPECT_EQ(a.policy, b.policy);
}

TEST(EvaluatePolicy, UniformMatchesAverageOfActions) {
  const auto env = make_chain(3);
  const auto uniform = evaluate_policy(*env.model, StochasticPolicy::uniform(3, 2, 2));
  // From state 0: half the time move to 1 each step.
  EXPECT_NEAR(uniform[2][0], 0.0, 1e-15);
  EXPECT_NEAR(uniform[2][1], 1.0, 1e-15);
  EXPECT_NEAR(uniform[1][0], 0.5, 1e-15);
  EXPECT_NEAR(uniform[1][1], 1.5, 1e-15);
  EXPECT_NEAR(uniform[0][0], 0.5 * 0.5 + 0.5 * 1.5, 1e-15);
}

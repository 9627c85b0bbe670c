#include <gtest/gtest.h>

#include <cmath>

#include "fmdp/errors.hpp"
#include "fmdp/factored_model.hpp"
#include "fmdp/model_io.hpp"
#include "fmdp/random.hpp"
#include "test_support.hpp"

using namespace fmdp;
using fmdp::testing::brute_product;
using fmdp::testing::small_model;

TEST(ScopeProject, SelectsSubtuple) {
  const Tuple x{2, 0, 1, 1};
  EXPECT_EQ(scope_project(x, ScopeIndexSet({0, 2})), (Tuple{2, 1}));
  EXPECT_EQ(scope_project(Tuple{5}, ScopeIndexSet({0})), (Tuple{5}));
  EXPECT_EQ(scope_project(Tuple{0, 1, 2}, ScopeIndexSet()), Tuple{});
}

TEST(ScopeProject, OutOfBoundsIsStructuralError) {
  EXPECT_THROW(scope_project(Tuple{0, 1}, ScopeIndexSet({0, 2})), StructuralError);
}

TEST(ScopeIndexSet, RequiresStrictlyAscending) {
  EXPECT_THROW(ScopeIndexSet({2, 1}), StructuralError);
  EXPECT_THROW(ScopeIndexSet({1, 1}), StructuralError);
  EXPECT_TRUE(ScopeIndexSet({0, 3}).contains(3));
  EXPECT_FALSE(ScopeIndexSet({0, 3}).contains(2));
}

TEST(FactoredSpace, RowMajorWithFirstComponentMostSignificant) {
  const FactoredSpace space({2, 3, 4});
  EXPECT_EQ(space.total(), 24u);
  EXPECT_EQ(space.index_of(Tuple{1, 0, 0}), 12u);
  EXPECT_EQ(space.index_of(Tuple{0, 1, 0}), 4u);
  EXPECT_EQ(space.index_of(Tuple{1, 2, 3}), 23u);
  EXPECT_THROW(space.index_of(Tuple{2, 0, 0}), StructuralError);
  EXPECT_THROW(space.index_of(Tuple{0, 0}), StructuralError);
  EXPECT_THROW(space.tuple_of(24), StructuralError);
  EXPECT_THROW(FactoredSpace({2, 0}), StructuralError);
}

TEST(FactoredSpace, FlatIndexRoundTrip) {
  for (const auto& sizes : {std::vector<std::size_t>{10000}, std::vector<std::size_t>{10, 10, 100},
                            std::vector<std::size_t>{7, 3, 5, 2, 4, 2}}) {
    const FactoredSpace space(sizes);
    for (std::size_t k = 0; k < space.total(); ++k) {
      ASSERT_EQ(space.index_of(space.tuple_of(k)), k);
    }
  }
}

TEST(FactoredModel, ProductTransitionTwoComponents) {
  std::vector<double> p1{0.3, 0.7}, p2{0.4, 0.6};
  std::vector<std::span<const double>> rows{p1, p2};
  const auto joint = product_distribution(rows);
  ASSERT_EQ(joint.size(), 4u);
  EXPECT_NEAR(joint[0], 0.12, 1e-15);
  EXPECT_NEAR(joint[1], 0.18, 1e-15);
  EXPECT_NEAR(joint[2], 0.28, 1e-15);
  EXPECT_NEAR(joint[3], 0.42, 1e-15);
}

TEST(FactoredModel, ProductTransitionMatchesBruteForce) {
  const auto model = small_model();
  for (std::size_t pair = 0; pair < model.num_pairs(); ++pair) {
    const auto row = model.product_transition(pair);
    double sum = 0.0;
    for (std::size_t s = 0; s < row.size(); ++s) {
      EXPECT_NEAR(row[s], brute_product(model, pair, s), 1e-15);
      EXPECT_GE(row[s], 0.0);
      sum += row[s];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(FactoredModel, SingleComponentProductIsTheRow) {
  std::vector<double> p{0.2, 0.5, 0.3};
  std::vector<std::span<const double>> rows{p};
  EXPECT_EQ(product_distribution(rows), p);
}

TEST(ExpectOverComplement, HandExample) {
  std::vector<double> p1{0.9, 0.1}, p2{0.5, 0.5};
  std::vector<std::span<const double>> rows{p1, p2};
  const std::vector<double> V{1, 2, 3, 4};
  const auto f = expect_over_complement(rows, V, 0);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_DOUBLE_EQ(f[0], 1.5);
  EXPECT_DOUBLE_EQ(f[1], 3.5);
}

TEST(ExpectOverComplement, SingleComponentAndConstant) {
  std::vector<double> p{0.2, 0.8};
  std::vector<std::span<const double>> one{p};
  const std::vector<double> V{3.0, -1.0};
  EXPECT_EQ(expect_over_complement(one, V, 0), V);

  std::vector<double> a{0.1, 0.6, 0.3}, b{0.5, 0.5}, c{0.25, 0.75};
  std::vector<std::span<const double>> three{a, b, c};
  const std::vector<double> constant(12, 2.5);
  for (std::size_t i = 0; i < 3; ++i) {
    for (double v : expect_over_complement(three, constant, i)) EXPECT_NEAR(v, 2.5, 1e-15);
  }
}

TEST(ExpectOverComplement, MiddleComponentMatchesEnumeration) {
  Rng rng(7);
  std::vector<std::vector<double>> dists{{0.2, 0.8}, {0.1, 0.3, 0.6}, {0.5, 0.25, 0.25}};
  std::vector<std::span<const double>> rows(dists.begin(), dists.end());
  const FactoredSpace space({2, 3, 3});
  std::vector<double> V(space.total());
  for (auto& v : V) v = rng.uniform();
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> expected(dists[i].size(), 0.0);
    for (std::size_t k = 0; k < space.total(); ++k) {
      const auto s = space.tuple_of(k);
      double w = 1.0;
      for (std::size_t j = 0; j < 3; ++j) {
        if (j != i) w *= dists[j][s[j]];
      }
      expected[s[i]] += w * V[k];
    }
    const auto got = expect_over_complement(rows, V, i);
    for (std::size_t v = 0; v < expected.size(); ++v) EXPECT_NEAR(got[v], expected[v], 1e-14);
  }
  // expect_product is the fully contracted version.
  double full = 0.0;
  for (std::size_t k = 0; k < space.total(); ++k) {
    const auto s = space.tuple_of(k);
    full += dists[0][s[0]] * dists[1][s[1]] * dists[2][s[2]] * V[k];
  }
  EXPECT_NEAR(expect_product(rows, V), full, 1e-14);
}

TEST(WeightedVariance, MatchesDefinition) {
  const std::vector<double> p{0.5, 0.5}, v{0.0, 1.0};
  EXPECT_DOUBLE_EQ(weighted_variance(p, v), 0.25);
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_EQ(weighted_variance(zero, v), 0.0);
}

TEST(FactoredModel, ValidatesRowsAndRewards) {
  auto bad_row = [] {
    std::vector<TransitionComponent> t{{ScopeIndexSet({0}), {0.5, 0.4, 0.5, 0.5}}};
    std::vector<RewardComponent> r{{ScopeIndexSet({0}), RewardKind::bernoulli, {0.1, 0.2}}};
    return FactoredModel({2}, {2}, t, r, 2, true);
  };
  EXPECT_THROW(bad_row(), StructuralError);
  auto negative = [] {
    std::vector<TransitionComponent> t{{ScopeIndexSet({0}), {1.1, -0.1, 0.5, 0.5}}};
    std::vector<RewardComponent> r{{ScopeIndexSet({0}), RewardKind::bernoulli, {0.1, 0.2}}};
    return FactoredModel({2}, {2}, t, r, 2, true);
  };
  EXPECT_THROW(negative(), StructuralError);
  auto reward_too_big = [] {
    std::vector<TransitionComponent> t{{ScopeIndexSet({0}), {1, 0, 0, 1}}};
    std::vector<RewardComponent> r{{ScopeIndexSet({0}), RewardKind::bernoulli, {0.1, 0.6}},
                                   {ScopeIndexSet({0}), RewardKind::bernoulli, {0.1, 0.1}}};
    return FactoredModel({2}, {2}, t, r, 2, true);
  };
  EXPECT_ANY_THROW(reward_too_big());
  auto state_size_one = [] {
    std::vector<TransitionComponent> t{{ScopeIndexSet({0}), {1.0}}};
    std::vector<RewardComponent> r{{ScopeIndexSet({0}), RewardKind::bernoulli, {0.1}}};
    return FactoredModel({1}, {2}, t, r, 2, true);
  };
  EXPECT_THROW(state_size_one(), StructuralError);
  auto wrong_shape = [] {
    std::vector<TransitionComponent> t{{ScopeIndexSet({0, 1}), {1, 0, 0, 1}}};
    std::vector<RewardComponent> r{{ScopeIndexSet({0}), RewardKind::bernoulli, {0.1, 0.1}}};
    return FactoredModel({2}, {2}, t, r, 2, true);
  };
  EXPECT_THROW(wrong_shape(), StructuralError);
}

TEST(FactoredModel, ExpectedRewardSumsComponents) {
  const auto model = small_model();
  // x = (s0, s1, a) = (1, 0, 1): R_0(1) + R_1(0, 1) = 0.4 + 0.5.
  const auto pair = model.pair_index(model.state_space().index_of(Tuple{1, 0}), 1);
  EXPECT_DOUBLE_EQ(model.expected_reward(pair), 0.9);
  for (std::size_t x = 0; x < model.num_pairs(); ++x) {
    EXPECT_GE(model.expected_reward(x), 0.0);
    EXPECT_LE(model.expected_reward(x), 1.0);
  }
}

TEST(FactoredModel, SampleNextStateMatchesProductWithinThreeSigma) {
  const auto model = small_model();
  Rng rng(99);
  const std::size_t n = 100000;
  for (std::size_t pair : {std::size_t{0}, std::size_t{5}}) {
    std::vector<std::size_t> counts(model.num_states(), 0);
    for (std::size_t k = 0; k < n; ++k) ++counts[model.sample_next_state(pair, rng)];
    const auto exact = model.product_transition(pair);
    for (std::size_t s = 0; s < exact.size(); ++s) {
      const double freq = static_cast<double>(counts[s]) / n;
      const double sigma = std::sqrt(exact[s] * (1 - exact[s]) / n);
      EXPECT_LE(std::abs(freq - exact[s]), 3 * sigma + 1e-12) << "pair " << pair << " s " << s;
    }
  }
}

TEST(FactoredModel, SamplingIsDeterministicAndPointMassesAreExact) {
  const auto model = small_model();
  Rng a(5), b(5);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(model.sample_next_state(3, a), model.sample_next_state(3, b));
  // Component 1 at (s1 = 0, a = 1) and (s1 = 1, a = 1) is a point mass on 0 and 1.
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const auto x = Tuple{0, 1, 1};
    EXPECT_EQ(model.sample_next_state(x, rng)[1], 1u);
  }
}

TEST(FactoredModel, SampleRewardModesAndMeans) {
  EXPECT_THROW(
      {
        Rng rng(1);
        small_model(true).sample_reward(0, rng);
      },
      ModeError);
  const auto det = small_model(false, 3, RewardKind::deterministic);
  Rng rng(2);
  const auto pair = det.pair_index(det.state_space().index_of(Tuple{1, 0}), 1);
  EXPECT_EQ(det.sample_reward(pair, rng), (std::vector<double>{0.4, 0.5}));

  // Bernoulli with mean 0.25 on range [0, 1/2].
  const auto model = small_model(false);
  const std::size_t n = 100000;
  const auto x = model.pair_index(model.state_space().index_of(Tuple{0, 1}), 0);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto r = model.sample_reward(x, rng);
    for (double v : r) {
      EXPECT_TRUE(v == 0.0 || v == 0.5);
    }
    EXPECT_LE(r[0] + r[1], 1.0);
    sum += r[1];
  }
  EXPECT_NEAR(sum / n, 0.2, 0.01);
}

TEST(FactoredModel, ConstantRewardOne) {
  std::vector<TransitionComponent> t{{ScopeIndexSet({0}), {1, 0, 0, 1}}};
  std::vector<RewardComponent> r{{ScopeIndexSet(), RewardKind::deterministic, {1.0}}};
  FactoredModel model({2}, {1}, t, r, 1, false);
  Rng rng(0);
  EXPECT_EQ(model.sample_reward(0, rng), std::vector<double>{1.0});
}

TEST(FactoredModel, FlattenKeepsDynamicsAndRewards) {
  const auto model = small_model();
  const auto flat = flatten(model);
  EXPECT_EQ(flat.num_transition_components(), 1u);
  EXPECT_EQ(flat.num_states(), model.num_states());
  EXPECT_EQ(flat.num_actions(), model.num_actions());
  for (std::size_t x = 0; x < model.num_pairs(); ++x) {
    EXPECT_EQ(flat.product_transition(x), model.product_transition(x));
    EXPECT_DOUBLE_EQ(flat.expected_reward(x), model.expected_reward(x));
  }
}

TEST(ModelIo, RoundTripIsBitExact) {
  Rng rng(3);
  std::vector<double> rows;
  for (int c = 0; c < 6; ++c) {
    const double a = rng.uniform() / 3.0, b = rng.uniform() / 3.0;
    rows.insert(rows.end(), {a, b, 1.0 - a - b});
  }
  std::vector<TransitionComponent> t{{ScopeIndexSet({0, 1}), rows}};
  std::vector<RewardComponent> r{{ScopeIndexSet({1}), RewardKind::deterministic, {1.0 / 3.0, 0.7}}};
  const FactoredModel model({3}, {2}, t, r, 4, false);
  const auto text = model_to_text(model);
  const auto back = model_from_text(text);
  EXPECT_EQ(back.transition(0).rows, model.transition(0).rows);
  EXPECT_EQ(back.reward(0).means, model.reward(0).means);
  EXPECT_EQ(back.horizon(), 4u);
  EXPECT_FALSE(back.reward_known());
  EXPECT_EQ(model_to_text(back), text);
}

TEST(ModelIo, RejectsMalformedFiles) {
  EXPECT_ANY_THROW(model_from_text("[model]\nformat = other\n"));
  auto text = model_to_text(small_model());
  text.replace(text.find("rows = "), 7, "rows = 2 ");
  EXPECT_ANY_THROW(model_from_text(text));
  EXPECT_THROW(load_model("/nonexistent/dir/model.txt"), IoError);
}

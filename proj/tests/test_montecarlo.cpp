// Copyright 2026 The fedgame Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace fedgame;
using testing_support::table1;

TEST(MonteCarlo, ConfigValidation) {
  GenerativeConfig g;
  g.sigma2 = 0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = {};
  g.trials = 0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = {};
  g.mu_e = -1;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(MonteCarlo, SingletonMatchesSampleMeanVariance) {
  Instance inst(GameParams(10, 1), {4});
  auto res = simulate_coalition(Coalition(inst, {0}), inst, GenerativeConfig::for_instance(inst, 3, 100000));
  ASSERT_EQ(res.size(), 1u);
  EXPECT_DOUBLE_EQ(res[0].theory, 2.5);
  EXPECT_GT(res[0].std_error, 0);
  EXPECT_LT(std::abs(res[0].z), 4);
}

TEST(MonteCarlo, IdenticalSeedGivesIdenticalResults) {
  auto inst = table1();
  auto g = GenerativeConfig::for_instance(inst, 42, 5000);
  auto a = simulate_coalition(Coalition(inst, {0, 1, 2}), inst, g);
  auto b = simulate_coalition(Coalition(inst, {0, 1, 2}), inst, g);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].empirical, b[i].empirical);
    EXPECT_EQ(a[i].std_error, b[i].std_error);
  }
  g.seed = 43;
  auto c = simulate_coalition(Coalition(inst, {0, 1, 2}), inst, g);
  EXPECT_NE(a[0].empirical, c[0].empirical);
}

TEST(MonteCarlo, BlocksAreStablePrefixes) {
  // Trials in the first block do not depend on the total trial count.
  Instance inst(GameParams(3, 1), {2, 5});
  auto g = GenerativeConfig::for_instance(inst, 9, kBlockTrials);
  auto one = mc::simulate_moments({2, 5}, g);
  g.trials = 2 * kBlockTrials;
  auto two = mc::simulate_moments({2, 5}, g);
  auto rng = mc::block_rng(9, 1);
  mc::Moments second(3);
  std::vector<double> err(2);
  for (std::uint64_t t = 0; t < kBlockTrials; ++t) {
    double w = 0;
    mc::one_trial({2, 5}, g, rng, err, w);
    second.sum[0] += err[0];
  }
  EXPECT_DOUBLE_EQ(two.sum[0], one.sum[0] + second.sum[0]);
}

TEST(MonteCarlo, WorkedExampleGrandCoalition) {
  auto inst = table1();
  auto res = validate_partition(Partition::grand(inst), inst, GenerativeConfig::for_instance(inst, 1, 100000));
  for (const auto& m : res.players) EXPECT_LT(std::abs(m.z), 4) << m.player;
  EXPECT_NEAR(res.players[0].theory, 1058.0 / 576.0, 1e-12);
  EXPECT_LT(std::abs(res.aggregate.z), 4);
  EXPECT_NEAR(res.aggregate.theory, 526.0 / 24.0, 1e-12);
}

TEST(MonteCarlo, SingletonsAggregateIsNTimesMuE) {
  auto inst = table1();
  auto res = validate_partition(Partition::singletons(inst), inst, GenerativeConfig::for_instance(inst, 4, 50000));
  EXPECT_DOUBLE_EQ(res.aggregate.theory, 30.0);
  EXPECT_LT(std::abs(res.aggregate.z), 4);
}

TEST(MonteCarlo, ErrorShrinksWithMoreTrials) {
  Instance inst(GameParams(10, 1), {5});
  double previous = 1e9;
  for (std::uint64_t trials : {1000ULL, 10000ULL, 100000ULL}) {
    auto res = simulate_coalition(Coalition(inst, {0}), inst, GenerativeConfig::for_instance(inst, 2, trials));
    // standard error, not the realised gap, is what must shrink monotonically
    EXPECT_LT(res[0].std_error, previous);
    previous = res[0].std_error;
  }
}

TEST(MonteCarlo, PerPlayerNoiseKeepsExpectation) {
  auto inst = table1();
  auto g = GenerativeConfig::for_instance(inst, 8, 100000);
  g.per_player_eps = true;
  auto res = validate_partition(Partition(inst, {{0, 2}, {1}}), inst, g);
  for (const auto& m : res.players) EXPECT_LT(std::abs(m.z), 4) << m.player;
}

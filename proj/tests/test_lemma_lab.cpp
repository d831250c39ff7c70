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

using namespace fedgame;
using testing_support::rat;
using testing_support::table1;

namespace {

std::string fingerprint(const std::vector<CheckReport>& reports) {
  std::string s;
  for (const auto& r : reports) {
    s += r.name + ":" + std::to_string(r.trials) + "/" + std::to_string(r.passed) + ";";
    if (r.counterexample) s += render_instance(r.counterexample->instance);
  }
  return s;
}

}  // namespace

TEST(LemmaLab, EveryCheckPassesOnDefaultGrid) {
  RandomInstanceConfig cfg;
  cfg.seed = 12345;
  for (const auto& r : run_suite(cfg, 300)) {
    EXPECT_TRUE(r.ok()) << r.name << " trial " << (r.counterexample ? r.counterexample->trial : 0);
    EXPECT_EQ(r.trials, 300u) << r.name;
  }
}

TEST(LemmaLab, SuiteIsDeterministicForASeed) {
  RandomInstanceConfig cfg;
  cfg.seed = 77;
  EXPECT_EQ(fingerprint(run_suite(cfg, 40)), fingerprint(run_suite(cfg, 40)));
}

TEST(LemmaLab, TrialsAreIndependentOfEachOther) {
  RandomInstanceConfig cfg;
  cfg.seed = 5;
  const auto& check = *find_check("swap");
  auto a = replay(check, cfg, 17);
  for (int i = 0; i < 3; ++i) replay(check, cfg, static_cast<std::uint64_t>(i));
  auto b = replay(check, cfg, 17);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->instance, b->instance);
}

TEST(LemmaLab, InjectedFailureIsReportedAndReplays) {
  RandomInstanceConfig cfg;
  auto reports = run_suite(cfg, 25, {"injected_failure"});
  ASSERT_EQ(reports.size(), 1u);
  const auto& r = reports[0];
  EXPECT_FALSE(r.ok());
  ASSERT_TRUE(r.counterexample.has_value());
  auto again = replay(injected_failure_check(), cfg, r.counterexample->trial);
  ASSERT_TRUE(again.has_value());
  EXPECT_FALSE(again->pass);
  EXPECT_EQ(again->instance, r.counterexample->instance);
}

TEST(LemmaLab, UnknownNameIsRejected) {
  EXPECT_THROW(run_suite(RandomInstanceConfig{}, 1, {"nope"}), std::invalid_argument);
  EXPECT_EQ(find_check("nope"), nullptr);
}

TEST(LemmaLab, ConfigValidation) {
  RandomInstanceConfig cfg;
  cfg.min_players = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.ratio_grid.clear();
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_players = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(LemmaLab, SizeFiltersRespectCriticalSize) {
  for (auto filter : {SizeFilter::AllSmall, SizeFilter::AllLarge, SizeFilter::Mixed}) {
    RandomInstanceConfig cfg;
    cfg.filter = filter;
    cfg.min_players = 2;
    for (std::uint64_t t = 0; t < 200; ++t) {
      auto rng = trial_rng(1, t);
      Instance inst = draw_instance(cfg, rng);
      const Rational crit = inst.params().critical_size();
      bool any_small = false, any_large = false;
      for (auto n : inst.sizes()) {
        any_small = any_small || to_rational(n) <= crit;
        any_large = any_large || to_rational(n) > crit;
        ASSERT_LE(n, 10 * crit + 1);
        if (filter == SizeFilter::AllSmall) ASSERT_LE(to_rational(n), crit);
        if (filter == SizeFilter::AllLarge) ASSERT_GE(to_rational(n), crit);
      }
      if (filter == SizeFilter::Mixed) ASSERT_TRUE(any_small && any_large);
    }
  }
}

// Worked-example instances of the individual lemmas, checked directly.
TEST(Lemmas, WorkedExampleInstances) {
  auto inst = table1();
  const Rational before = coalition_cost(Coalition(inst, {0}), inst) + coalition_cost(Coalition(inst, {1}), inst);
  const Rational after = coalition_cost(Coalition(inst, {0, 1}), inst);
  EXPECT_GT(before, after);
  EXPECT_GT(Rational(10), err_player(0, Coalition(inst, {0, 1}), inst));

  // keeping the larger player (c) in {a} costs more than keeping b
  EXPECT_GT(partition_cost(Partition(inst, {{0, 2}, {1}}), inst), partition_cost(Partition(inst, {{0, 1}, {2}}), inst));

  // b leaves the grand coalition, so c must too
  Coalition grand(inst, {0, 1, 2});
  EXPECT_TRUE(wants_to_leave(1, grand, inst));
  EXPECT_TRUE(wants_to_leave(2, grand, inst));
}

TEST(Lemmas, MergeWorkedExample) {
  auto inst = table1();
  auto r = merge_groups(Coalition(inst, {0}), Coalition(inst, {1}), inst);
  EXPECT_EQ(r.merged, Coalition(inst, {0, 1}));
  EXPECT_TRUE(r.removed.empty());
  EXPECT_GE(Rational(20), coalition_cost(r.merged, inst));

  // merging all three sheds c and then stops at b
  auto all = merge_groups(Coalition(inst, {0, 1}), Coalition(inst, {2}), inst);
  EXPECT_EQ(all.removed, (std::vector<PlayerId>{2}));
  EXPECT_EQ(all.merged, Coalition(inst, {0, 1}));

  Instance equal(GameParams(10, 1), {10, 10});
  auto eq = merge_groups(Coalition(equal, {0}), Coalition(equal, {1}), equal);
  EXPECT_EQ(coalition_cost(eq.merged, equal) + 10 * Rational(static_cast<long>(eq.removed.size())), Rational(20));
  EXPECT_THROW(merge_groups(Coalition(inst, {0, 1}), Coalition(inst, {1}), inst), std::invalid_argument);
}

TEST(Lemmas, WelcomeExample) {
  Instance inst(GameParams(10, 1), {1, 1});
  EXPECT_EQ(err_player(0, Coalition(inst, {0}), inst), 10);
  EXPECT_EQ(err_player(0, Coalition(inst, {0, 1}), inst), rat(11, 2));
}

TEST(Lemmas, SmallPlayerBoundExample) {
  Instance inst(GameParams(9, 1), {1, 3});
  EXPECT_LE(err_player(0, Coalition(inst, {0, 1}), inst), rat(29, 4));
}

// Closed forms for the constructions come from the cost expressions in the
// test oracle, independent of the library's formula_ratio.
TEST(Constructions, LocalLearningArbitrarilyBad) {
  struct Expect {
    long rho;
    long players;
    long mu_e;
    long n;
  };
  for (auto e : {Expect{2, 3, 100, 24}, Expect{5, 6, 100, 3}, Expect{10, 11, 200, 1}}) {
    auto c = construct_alone_bad(Rational(e.rho));
    ASSERT_EQ(c.instance.size(), static_cast<std::size_t>(e.players));
    EXPECT_EQ(c.instance.params().mu_e(), e.mu_e);
    EXPECT_EQ(c.instance.n(0), e.n);
    auto g = testing_support::to_game(c.instance);
    oracle::Groups singles, grand(1);
    for (std::size_t i = 0; i < c.instance.size(); ++i) {
      singles.push_back({i});
      grand[0].push_back(i);
    }
    const Rational ratio = oracle::cost(g, singles) / oracle::min_cost(g);
    EXPECT_EQ(c.formula_ratio, oracle::cost(g, singles) / oracle::cost(g, grand));
    ASSERT_TRUE(c.brute_force_ratio.has_value());
    EXPECT_EQ(*c.brute_force_ratio, ratio);
    EXPECT_GT(ratio, e.rho);
  }
  EXPECT_EQ(construct_alone_bad(Rational(2)).formula_ratio, rat(300, 148));
  EXPECT_THROW(construct_alone_bad(Rational(1)), std::invalid_argument);
}

TEST(Constructions, GrandCoalitionArbitrarilyBad) {
  struct Expect {
    long rho;
    long n;
  };
  for (auto e : {Expect{2, 3}, Expect{5, 8}, Expect{10, 15}}) {
    auto c = construct_grand_bad(Rational(e.rho));
    EXPECT_EQ(c.instance.n(0), e.n);
    auto g = testing_support::to_game(c.instance);
    EXPECT_EQ(oracle::min_cost(g), oracle::cost(g, {{0}, {1}, {2}}));
    const Rational ratio = oracle::cost(g, {{0, 1, 2}}) / oracle::min_cost(g);
    EXPECT_EQ(*c.brute_force_ratio, ratio);
    EXPECT_EQ(c.formula_ratio, ratio);
    EXPECT_GT(ratio, e.rho);
  }
  EXPECT_EQ(construct_grand_bad(Rational(2)).formula_ratio, rat(7, 3));
}

TEST(Constructions, BruteForceSkippedBeyondBudget) {
  auto c = construct_alone_bad(Rational(10), EnumerationBudget(5));
  EXPECT_FALSE(c.brute_force_ratio.has_value());
  EXPECT_GT(c.formula_ratio, 10);
}

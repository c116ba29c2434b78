// Copyright 2026 The Lockrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lockrace/equilibrium.hpp"

namespace lockrace {
namespace {

GameConfig make(double horizon, double nu, std::vector<std::vector<double>> rewards,
                std::vector<double> rates = {}) {
  GameConfig cfg;
  cfg.horizon = horizon;
  cfg.cost_factor = nu;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    cfg.players.push_back(PlayerSpec{rates.empty() ? 1.0 : rates[i], rewards[i]});
  }
  return cfg;
}

TEST(Asymptotic, SingleLockIsExact) {
  const auto cfg = make(10.0, 0.5, {{1.0}, {1.0}});
  const auto a = asymptotic_equilibrium(cfg);
  ASSERT_EQ(a.branch, AsymptoticBranch::kSymmetric);
  const auto r = solve_equilibrium(cfg);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(a.profile[i].thresholds[0], std::log(2.0), 1e-12);
    EXPECT_NEAR(r.profile[i].thresholds[0], std::log(2.0), 1e-8);
  }
}

TEST(Asymptotic, FigureOneClosedForm) {
  const auto cfg = make(8.0, 1.0, std::vector<std::vector<double>>(4, {1, 3, 3, 3, 3}));
  const auto a = asymptotic_equilibrium(cfg);
  ASSERT_EQ(a.branch, AsymptoticBranch::kSymmetric);
  for (const auto& s : a.profile) {
    EXPECT_NEAR(s.thresholds[0], 0.732408, 1e-6);
    for (std::size_t k = 1; k < 5; ++k) EXPECT_EQ(s.thresholds[k], 8.0);
  }
}

TEST(Asymptotic, UnprofitableLastLockDropped) {
  const auto cfg = make(50.0, 1.0, {{3.0, 0.5}, {3.0, 0.5}});
  const auto a = asymptotic_equilibrium(cfg);
  const auto r = solve_equilibrium(cfg);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a.profile[i].thresholds[1], 0.0);
    EXPECT_NEAR(a.profile[i].thresholds[0], std::log(3.0), 1e-12);
    EXPECT_EQ(r.profile[i].thresholds[1], 0.0);
    EXPECT_NEAR(r.profile[i].thresholds[0], a.profile[i].thresholds[0], 1e-6);
  }
}

TEST(Asymptotic, MonotoneBranchAgreesWithSolver) {
  const auto cfg = make(20.0, 0.5, {{2.0}, {1.5}});
  const auto a = asymptotic_equilibrium(cfg);
  ASSERT_EQ(a.branch, AsymptoticBranch::kMonotone);
  EXPECT_TRUE(a.ordering_holds);
  EXPECT_EQ(a.profile[0].thresholds[0], 20.0);
  EXPECT_NEAR(a.profile[1].thresholds[0], std::log(3.0), 1e-12);
  const auto r = solve_equilibrium(cfg);
  EXPECT_EQ(r.profile[0].thresholds[0], 20.0);
  EXPECT_NEAR(r.profile[1].thresholds[0], std::log(3.0), 1e-8);
}

TEST(Asymptotic, UnequalRatesInapplicable) {
  const auto cfg = make(10.0, 0.5, {{1.0}, {1.0}}, {1.0, 2.0});
  const auto a = asymptotic_equilibrium(cfg);
  EXPECT_EQ(a.branch, AsymptoticBranch::kInapplicable);
  EXPECT_TRUE(a.profile.empty());
  EXPECT_FALSE(a.notes.empty());
}

TEST(Asymptotic, LargeHorizonConvergesToSolver) {
  // The gap closes as the horizon grows.
  double prev = 1e9;
  for (double horizon : {4.0, 8.0, 16.0}) {
    const auto cfg = make(horizon, 1.0, std::vector<std::vector<double>>(3, {1, 2, 2}));
    const double gap = std::abs(asymptotic_equilibrium(cfg).profile[0].thresholds[0] -
                                solve_equilibrium(cfg).profile[0].thresholds[0]);
    EXPECT_LE(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-3);
}

}  // namespace
}  // namespace lockrace

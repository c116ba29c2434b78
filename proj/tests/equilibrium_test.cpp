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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lockrace/equilibrium.hpp"

namespace lockrace {
namespace {

GameConfig symmetric(std::size_t n, double horizon, double nu, std::vector<double> rewards) {
  GameConfig cfg;
  cfg.horizon = horizon;
  cfg.cost_factor = nu;
  cfg.players.assign(n, PlayerSpec{1.0, std::move(rewards)});
  return cfg;
}

GameConfig fig1(double nu = 1.0) { return symmetric(4, 8.0, nu, {1, 3, 3, 3, 3}); }

TEST(Gamma, EmptyIntegralAtZero) {
  const auto cfg = fig1();
  const auto cv = backward_recursion(cfg, 0);
  const std::vector<double> th(4, 1.0);
  EXPECT_EQ(gamma_first_lock(0.0, 0, th, cv, cfg), 0.0);
}

TEST(Gamma, MonopolistClosedForm) {
  const auto cfg = symmetric(1, 10.0, 0.5, {1.0});
  const auto cv = backward_recursion(cfg, 0);
  const std::vector<double> th{10.0};
  EXPECT_NEAR(gamma_first_lock(10.0, 0, th, cv, cfg), 0.5 * (1 - std::exp(-10.0)), 1e-10);
  EXPECT_NEAR(gamma_first_lock(10.0, 0, th, cv, cfg), 0.499977, 1e-6);
}

TEST(Gamma, DuopolyMaximizedAtLogTwo) {
  const auto cfg = symmetric(2, 10.0, 0.5, {1.0});
  const auto cv = backward_recursion(cfg, 0);
  const std::vector<double> th{0.0, std::log(2.0)};
  double best = -1.0;
  double arg = 0.0;
  for (int j = 0; j <= 10000; ++j) {
    const double t = 10.0 * j / 10000;
    const double g = gamma_first_lock(t, 0, th, cv, cfg);
    if (g > best) {
      best = g;
      arg = t;
    }
  }
  EXPECT_NEAR(arg, std::log(2.0), 1e-3);
}

TEST(GammaDerivative, AtOriginForMonopolist) {
  const auto cfg = symmetric(1, 10.0, 0.5, {1.0});
  const auto cv = backward_recursion(cfg, 0);
  const std::vector<double> th{10.0};
  EXPECT_DOUBLE_EQ(gamma_derivative(0.0, 0, th, cv, cfg), 0.5);
}

TEST(GammaDerivative, MatchesFiniteDifference) {
  const auto cfg = fig1();
  const auto cv = backward_recursion(cfg, 0);
  const std::vector<double> th{0.0, 0.7, 1.5, 6.0};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 7.99);
  for (int i = 0; i < 50; ++i) {
    const double t = u(rng);
    const double h = 1e-4;
    const double fd = (gamma_first_lock(t + h, 0, th, cv, cfg) -
                       gamma_first_lock(t - h, 0, th, cv, cfg)) / (2 * h);
    EXPECT_NEAR(gamma_derivative(t, 0, th, cv, cfg), fd, 1e-6) << "t=" << t;
  }
}

TEST(GammaDerivative, NegativeWhenUnprofitable) {
  const auto cfg = symmetric(2, 8.0, 5.0, {1, 3});
  const auto cv = backward_recursion(cfg, 0);
  const std::vector<double> th{1.0, 1.0};
  EXPECT_LT(gamma_derivative(0.0, 0, th, cv, cfg), 0.0);
}

TEST(BestResponse, ZeroWhenUnprofitableAtOrigin) {
  const auto cfg = symmetric(2, 8.0, 5.0, {1, 3});
  const auto cv = backward_recursion(cfg, 0);
  const std::vector<double> th{8.0, 8.0};
  EXPECT_EQ(best_response_first_threshold(0, th, cv, cfg), 0.0);
}

TEST(BestResponse, SingleLockDuopoly) {
  const auto cfg = symmetric(2, 10.0, 0.5, {1.0});
  const auto cv = backward_recursion(cfg, 0);
  const std::vector<double> th{10.0, 10.0};
  EXPECT_NEAR(best_response_first_threshold(0, th, cv, cfg), std::log(2.0), 1e-9);
}

TEST(BestResponse, MonopolistPlaysToHorizon) {
  const auto cfg = symmetric(1, 6.0, 0.5, {1.0, 2.0});
  const auto cv = backward_recursion(cfg, 0);
  const std::vector<double> th{0.0};
  EXPECT_EQ(best_response_first_threshold(0, th, cv, cfg), 6.0);
}

TEST(Solve, FigureOne) {
  const auto r = solve_equilibrium(fig1());
  EXPECT_TRUE(r.converged);
  for (const auto& s : r.profile) {
    EXPECT_NEAR(s.thresholds[0], std::log(9.0) / 3.0, 0.05);
    EXPECT_NEAR(s.thresholds[0], 0.724993, 1e-5);
    for (std::size_t k = 1; k < 5; ++k) EXPECT_EQ(s.thresholds[k], 8.0);
  }
}

TEST(Solve, MonopolistWithProfitableLock) {
  const auto r = solve_equilibrium(symmetric(1, 3.0, 0.5, {1.0}));
  EXPECT_EQ(r.profile[0].thresholds[0], 3.0);
}

TEST(Solve, UniversallyUnprofitableFirstLock) {
  const auto r = solve_equilibrium(symmetric(3, 4.0, 10.0, {1, 2}));
  for (const auto& s : r.profile) EXPECT_EQ(s.thresholds[0], 0.0);
}

TEST(Solve, NonConvergenceCarriesLastIterate) {
  SolverOptions o;
  o.max_iterations = 1;
  try {
    solve_equilibrium(fig1(), o);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_FALSE(e.last().converged);
    EXPECT_EQ(e.last().iterations, 1u);
    EXPECT_EQ(e.last().profile.size(), 4u);
  }
}

TEST(Solve, AsymmetricConfigIsPermutationEquivariant) {
  GameConfig cfg;
  cfg.horizon = 6.0;
  cfg.cost_factor = 0.8;
  cfg.players = {PlayerSpec{1.0, {2.0, 1.5}}, PlayerSpec{1.5, {1.2, 2.0}},
                 PlayerSpec{0.7, {3.0, 0.5}}};
  const auto a = solve_equilibrium(cfg);
  GameConfig swapped = cfg;
  std::swap(swapped.players[0], swapped.players[2]);
  const auto b = solve_equilibrium(swapped);
  ASSERT_TRUE(a.converged && b.converged);
  const std::size_t perm[] = {2, 1, 0};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_NEAR(a.profile[i].thresholds[k], b.profile[perm[i]].thresholds[k], 1e-7);
    }
  }
}

TEST(Solve, FirstThresholdNonIncreasingInCost) {
  double prev = 1e9;
  for (int j = 0; j < 18; ++j) {
    const double nu = 0.3 + 0.1 * j;
    const double th = solve_equilibrium(fig1(nu)).profile[0].thresholds[0];
    EXPECT_LE(th, prev + 1e-12);
    prev = th;
  }
}

TEST(Verify, SolvedFigureOneHasNoProfitableDeviation) {
  const auto cfg = fig1();
  const auto r = solve_equilibrium(cfg);
  for (const auto& d : verify_equilibrium(r, cfg, 400)) {
    EXPECT_LE(d.gap, 1e-6);
    EXPECT_EQ(d.candidates.size(), 400u);
    EXPECT_TRUE(d.single_peaked);
    EXPECT_EQ(d.derivative_sign_changes, 1u);
  }
}

TEST(Verify, ZeroProfileUnderHighCost) {
  const auto cfg = symmetric(2, 4.0, 10.0, {1, 2});
  const auto r = solve_equilibrium(cfg);
  for (const auto& d : verify_equilibrium(r, cfg, 100)) EXPECT_LE(d.gap, 0.0);
}

TEST(Verify, PerturbedThresholdDetected) {
  const auto cfg = fig1();
  auto r = solve_equilibrium(cfg);
  // Undershooting: past the root the opponents' eta is frozen and gamma is
  // nearly flat, so overshooting by 0.2 costs far less than 1e-3.
  r.profile[0].thresholds[0] -= 0.2;
  const auto reports = verify_equilibrium(r, cfg, 400);
  EXPECT_GT(reports[0].gap, 1e-3);
}

TEST(Verify, SemiAnalyticUtilityMatchesGamma) {
  const auto cfg = fig1();
  const auto r = solve_equilibrium(cfg);
  const auto first = first_thresholds(r.profile);
  const double g = gamma_first_lock(first[0], 0, first, r.continuation[0], cfg);
  EXPECT_NEAR(semi_analytic_utility(r.profile, 0, cfg), g, 1e-9);
}

}  // namespace
}  // namespace lockrace

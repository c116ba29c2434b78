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
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "lockrace/recursion.hpp"

namespace lockrace {
namespace {

GameConfig single(double horizon, double nu, double beta, std::vector<double> rewards) {
  GameConfig cfg;
  cfg.horizon = horizon;
  cfg.cost_factor = nu;
  cfg.players = {PlayerSpec{beta, std::move(rewards)}};
  return cfg;
}

TEST(Terminal, UnprofitableLastLock) {
  const auto stage = terminal_stage(single(8, 1.0, 1.0, {0.5}), 0);
  EXPECT_EQ(stage.threshold, 0.0);
  for (double v : stage.curve.values()) EXPECT_EQ(v, 0.0);
}

TEST(Terminal, ClosedFormCurve) {
  const auto stage = terminal_stage(single(8, 1.0, 1.0, {3.0}), 0);
  EXPECT_EQ(stage.threshold, 8.0);
  EXPECT_NEAR(stage.curve(0.0), 1.999329, 1e-6);
  EXPECT_NEAR(stage.curve(0.0), 2.0 * (1.0 - std::exp(-8.0)), 1e-12);
  EXPECT_EQ(stage.curve(8.0), 0.0);
  // Independent oracle: midpoint rule of (c - nu) beta exp(-beta s) on [0, T].
  double sum = 0.0;
  const int n = 200000;
  for (int j = 0; j < n; ++j) sum += 2.0 * std::exp(-(j + 0.5) * 8.0 / n) * 8.0 / n;
  EXPECT_NEAR(stage.curve(0.0), sum, 1e-8);
}

TEST(Root, ProfitableRewardNeverCrosses) {
  const auto next = SampledFunction::sample(0, 8, 101, [](double t) { return 1.0 - t / 8; });
  EXPECT_EQ(threshold_root(next, 3.0, 1.0, 8.0), 8.0);
}

TEST(Root, ConditionAlreadyMetAtOrigin) {
  const auto next = SampledFunction::sample(0, 8, 101, [](double t) { return 0.5 * (1 - t / 8); });
  EXPECT_EQ(threshold_root(next, 0.2, 1.0, 8.0), 0.0);
}

TEST(Root, InteriorCrossingOfTerminalCurve) {
  const auto stage = terminal_stage(single(8, 1.0, 1.0, {3.0}), 0);
  const double root = threshold_root(stage.curve, 1.0, 1.5, 8.0);
  EXPECT_NEAR(root, 8.0 - std::log(4.0 / 3.0), 1e-6);
  EXPECT_NEAR(root, 7.712318, 1e-6);
  // Brute-force scan of the closed form.
  double scan = 8.0;
  for (int j = 0; j <= 800000; ++j) {
    const double t = 8.0 * j / 800000;
    if (1.0 + 2.0 * (1 - std::exp(-(8 - t))) <= 1.5) {
      scan = t;
      break;
    }
  }
  EXPECT_NEAR(root, scan, 2e-5);
}

TEST(Recursion, SingleLockHasNoStages) {
  const auto cv = backward_recursion(single(8, 1.0, 1.0, {3.0}), 0);
  EXPECT_TRUE(cv.thresholds.empty());
  EXPECT_TRUE(cv.curves.empty());
  for (double v : cv.after_first_lock().values()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(quadrature_check(cv, single(8, 1.0, 1.0, {3.0}), 0, 50), 0.0);
}

TEST(Recursion, FigureOneAllLaterThresholdsAtHorizon) {
  const auto cfg = single(8, 1.0, 1.0, {1, 3, 3, 3, 3});
  const auto cv = backward_recursion(cfg, 0);
  ASSERT_EQ(cv.thresholds.size(), 4u);
  for (double th : cv.thresholds) EXPECT_EQ(th, 8.0);
  EXPECT_LT(quadrature_check(cv, cfg, 0, 300), 1e-6);
}

TEST(Recursion, FigureTwoHighCostMatchesFineTrapezoid) {
  const auto cfg = single(5, 1.5, 1.0, {4, 3, 2, 1});
  const auto cv = backward_recursion(cfg, 0);
  EXPECT_EQ(cv.threshold(3), 0.0);
  // c_3 = 2 exceeds nu and the next curve is zero, so the root set is empty.
  EXPECT_EQ(cv.threshold(2), 5.0);
  EXPECT_EQ(cv.threshold(1), 5.0);

  // Closed form for lock 3, then lock 2 by trapezoid on a 10x finer grid.
  auto u3 = [](double s) { return 0.5 * (1.0 - std::exp(-(5.0 - s))); };
  for (double t : {0.0, 1.0, 2.5, 4.0}) {
    EXPECT_NEAR(cv.curve(2)(t), u3(t), 1e-9);
    const int n = 20000;
    const double h = (5.0 - t) / n;
    double sum = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double s = t + j * h;
      const double f = (3.0 + u3(s) - 1.5) * std::exp(-(s - t));
      sum += (j == 0 || j == n) ? 0.5 * f : f;
    }
    EXPECT_NEAR(cv.curve(1)(t), sum * h, 1e-6) << "t=" << t;
  }
}

TEST(Recursion, CurvesDecreaseThenVanish) {
  const auto cfg = single(8, 1.0, 1.0, {2, 0.5, 3});
  const auto cv = backward_recursion(cfg, 0);
  EXPECT_NEAR(cv.threshold(1), 8.0 - std::log(4.0 / 3.0), 1e-6);
  for (std::size_t k = 1; k < cfg.num_locks(); ++k) {
    const auto& c = cv.curve(k);
    for (std::size_t j = 0; j + 1 < c.size(); ++j) {
      if (c.abscissa(j + 1) < cv.threshold(k)) {
        EXPECT_GT(c.value(j), c.value(j + 1));
      }
      if (c.abscissa(j) >= cv.threshold(k)) {
        EXPECT_EQ(c.value(j), 0.0);
      }
    }
  }
  EXPECT_LT(quadrature_check(cv, cfg, 0, 300), 1e-6);
}

TEST(Recursion, CorruptionDetected) {
  const auto cfg = single(8, 1.0, 1.0, {1, 3, 3, 3, 3});
  auto cv = backward_recursion(cfg, 0);
  auto& curve = cv.curves[1];
  curve.set_value(700, curve.value(700) + 0.1);
  EXPECT_GE(quadrature_check(cv, cfg, 0, cv.grid_size), 0.05);
}

TEST(Recursion, FixedThresholdsReproduceOptimalOnes) {
  const auto cfg = single(8, 1.0, 1.0, {2, 0.5, 3});
  const auto opt = backward_recursion(cfg, 0);
  const std::vector<double> th{0.0, opt.threshold(1), opt.threshold(2)};
  const auto fixed = continuation_for_thresholds(cfg, 0, th);
  for (std::size_t k = 1; k < 3; ++k) {
    for (std::size_t j = 0; j < fixed.curve(k).size(); j += 97) {
      EXPECT_NEAR(fixed.curve(k).value(j), opt.curve(k).value(j), 1e-12);
    }
  }
}

TEST(Recursion, CurvesCsvLayout) {
  const auto cfg = single(8, 1.0, 1.0, {1, 3});
  const std::vector<ContinuationValues> cvs{backward_recursion(cfg, 0, 11)};
  std::ostringstream os;
  write_curves_csv(os, cvs);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("player,k,threshold\n1,2,8\n", 0), 0u) << s;
  EXPECT_NE(s.find("player,k,t,upsilon\n"), std::string::npos);
}

}  // namespace
}  // namespace lockrace

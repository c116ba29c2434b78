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

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lockrace/model.hpp"
#include "lockrace/recursion.hpp"

namespace lockrace {

struct SolverOptions {
  std::size_t grid_size = kDefaultGridSize;
  double tolerance = 1e-8;
  std::size_t max_iterations = 500;
};

struct EquilibriumResult {
  StrategyProfile profile;
  std::vector<ContinuationValues> continuation;  // one per player
  std::size_t iterations = 0;
  double final_update_norm = 0.0;
  bool converged = false;
  bool damped = false;
};

/// Fixed-point iteration stopped at max_iterations; `last` holds the final
/// iterate with converged == false.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(EquilibriumResult last);
  const EquilibriumResult& last() const { return last_; }

 private:
  EquilibriumResult last_;
};

/// First-lock utility of `player` choosing threshold theta while the others
/// keep their first-lock thresholds:
///   int_0^theta ((c_1 + U_2(t)) eta(t) - nu) beta exp(-beta t) dt,
/// where U_2 is `cv.after_first_lock()`. Composite Simpson on the curve grid
/// with the opponents' thresholds as forced panel boundaries.
double gamma_first_lock(double theta, std::size_t player,
                        std::span<const double> first_lock_thresholds,
                        const ContinuationValues& cv, const GameConfig& cfg);

/// d gamma / d theta in closed form.
double gamma_derivative(double theta, std::size_t player,
                        std::span<const double> first_lock_thresholds,
                        const ContinuationValues& cv, const GameConfig& cfg);

/// inf{t : (U_2(t) + c_1) eta(t) <= nu} clipped to T, by bisection to 1e-10.
double best_response_first_threshold(std::size_t player,
                                     std::span<const double> first_lock_thresholds,
                                     const ContinuationValues& cv, const GameConfig& cfg);

/// Gauss-Seidel sweeps of the first-lock best response, starting from
/// theta_1 = T for everyone, after one backward recursion per player.
/// Damping (factor 0.5) switches on if the update norm fails to decrease for
/// 10 consecutive sweeps. Throws ConvergenceError on non-convergence.
EquilibriumResult solve_equilibrium(const GameConfig& cfg, const SolverOptions& options = {});

/// Expected total payoff of `player` under an arbitrary MT profile,
/// computed by quadrature: the first-lock integral with the continuation
/// built from the player's own thresholds 2..M.
double semi_analytic_utility(const StrategyProfile& profile, std::size_t player,
                             const GameConfig& cfg, std::size_t grid_size = kDefaultGridSize);

struct DeviationReport {
  std::size_t player = 0;
  std::vector<double> candidates;
  std::vector<double> utilities;
  double equilibrium_utility = 0.0;
  double best_candidate = 0.0;
  /// max over candidates of utility - equilibrium utility.
  double gap = 0.0;
  /// Sign changes of gamma_derivative along the candidate grid.
  std::size_t derivative_sign_changes = 0;
  /// gamma_derivative strictly decreasing across the whole candidate grid.
  bool derivative_strictly_decreasing = false;
  /// gamma_derivative strictly decreasing on the candidates where it is
  /// non-negative, and changing sign at most once.
  bool single_peaked = false;
};

/// Sweeps `candidates` evenly spaced first-lock thresholds on [0, T] per
/// player with the others held at the solved profile.
std::vector<DeviationReport> verify_equilibrium(const EquilibriumResult& result,
                                                const GameConfig& cfg,
                                                std::size_t candidates = 400);

enum class AsymptoticBranch { kSymmetric, kMonotone, kInapplicable };

std::string to_string(AsymptoticBranch branch);

struct AsymptoticResult {
  AsymptoticBranch branch = AsymptoticBranch::kInapplicable;
  StrategyProfile profile;  // empty when inapplicable
  /// Whether theta_1 is non-increasing in the player index, as the monotone
  /// derivation assumes. Always true for the symmetric branch.
  bool ordering_holds = false;
  std::vector<std::string> notes;
};

/// Large-horizon closed forms for the equilibrium thresholds. Requires equal
/// rates. Identical reward vectors use the symmetric recursion (with the
/// effective last profitable lock); otherwise rewards ordered across players
/// with c^n_M >= M nu use the monotone-case recursion.
AsymptoticResult asymptotic_equilibrium(const GameConfig& cfg);

}  // namespace lockrace

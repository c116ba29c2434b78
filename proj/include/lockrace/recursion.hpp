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
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lockrace/model.hpp"
#include "lockrace/sampled_function.hpp"

namespace lockrace {

/// Thresholds and continuation-value curves for locks 2..M of one player.
///
/// Lock indices are 0-based: `threshold(k)` and `curve(k)` are defined for
/// k in [1, M-1]. `curve(k)(t)` is the optimal expected payoff from lock k
/// onward given the previous lock was acquired at time t. Each curve is
/// strictly decreasing below its threshold and stored as exact zeros from
/// the first grid point at or past it.
struct ContinuationValues {
  std::size_t player = 0;
  std::size_t num_locks = 1;
  std::size_t grid_size = kDefaultGridSize;
  double horizon = 1.0;
  std::vector<double> thresholds;        // thresholds[k - 1] for lock k
  std::vector<SampledFunction> curves;   // curves[k - 1] for lock k
  std::vector<std::string> diagnostics;  // e.g. reward exactly equal to nu

  double threshold(std::size_t lock) const { return thresholds.at(lock - 1); }
  const SampledFunction& curve(std::size_t lock) const { return curves.at(lock - 1); }

  /// The continuation after winning lock 1; identically zero when M = 1.
  SampledFunction after_first_lock() const;
};

struct TerminalStage {
  double threshold;
  SampledFunction curve;
};

/// Last lock: threshold T if c_M > nu else 0, and the closed-form curve
/// (c_M - nu)(1 - exp(-beta (T - t))) when c_M > nu, zero otherwise.
TerminalStage terminal_stage(const GameConfig& cfg, std::size_t player,
                             std::size_t grid_size = kDefaultGridSize);

/// inf{t >= lo : reward + upsilon_next(t) <= nu} over the domain of
/// `upsilon_next`, with inf of the empty set := horizon. Bisection to 1e-10.
double threshold_root(const SampledFunction& upsilon_next, double reward, double nu,
                      double horizon);

/// Optimal thresholds theta_2..theta_M and curves for `player`, built from
/// the last lock backward. Each curve solves the terminal-value problem
/// y' = beta y - beta (c_k + next(t) - nu), y(theta_k) = 0, with classical RK4
/// at the grid step.
ContinuationValues backward_recursion(const GameConfig& cfg, std::size_t player,
                                      std::size_t grid_size = kDefaultGridSize);

/// Continuation curves for fixed (not necessarily optimal) thresholds of
/// locks 2..M. `thresholds` has M entries; entry 0 is ignored.
ContinuationValues continuation_for_thresholds(const GameConfig& cfg, std::size_t player,
                                               std::span<const double> thresholds,
                                               std::size_t grid_size = kDefaultGridSize);

/// Largest absolute difference between stored curve values and an
/// independent composite-Simpson evaluation of
///   1{t < theta_k} int_t^theta_k (c_k + next(s) - nu) beta exp(-beta (s - t)) ds
/// at `samples` randomly drawn grid abscissae per curve (all abscissae when
/// samples >= grid_size).
double quadrature_check(const ContinuationValues& cv, const GameConfig& cfg,
                        std::size_t player, std::size_t samples, std::uint64_t seed = 1);

/// CSV dump: a `player,k,threshold` block followed by `player,k,t,upsilon`
/// rows. Player and lock numbers are 1-based.
void write_curves_csv(std::ostream& out, std::span<const ContinuationValues> cvs);

}  // namespace lockrace

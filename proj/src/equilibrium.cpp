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

#include "lockrace/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "lockrace/quadrature.hpp"

namespace lockrace {

namespace {

constexpr double kRootTolerance = 1e-10;
constexpr std::size_t kStallSweeps = 10;
constexpr double kDamping = 0.5;

// Continuation after lock 1 plus a grid to place panels on. Avoids copying
// the curve on every evaluation.
class FirstLockIntegrand {
 public:
  FirstLockIntegrand(std::size_t player, std::span<const double> first,
                     const ContinuationValues& cv, const GameConfig& cfg)
      : player_(player), first_(first), cfg_(cfg) {
    if (cv.curves.empty()) {
      zero_.emplace(SampledFunction::zeros(0.0, cfg.horizon, cv.grid_size));
      cont_ = &*zero_;
    } else {
      cont_ = &cv.curves.front();
    }
  }

  double value_after_win(double t) const { return cfg_.reward(player_, 0) + (*cont_)(t); }

  double eta(double t) const { return eta_first_lock(t, player_, first_, cfg_); }

  /// d gamma / d theta at t.
  double derivative(double t) const {
    const double beta = cfg_.rate(player_);
    return (value_after_win(t) * eta(t) - cfg_.cost_factor) * beta * std::exp(-beta * t);
  }

  double integral(double a, double b) const {
    if (b <= a) {
      return 0.0;
    }
    std::vector<double> kinks;
    for (std::size_t m = 0; m < first_.size(); ++m) {
      if (m != player_) {
        kinks.push_back(first_[m]);
      }
    }
    return quad::simpson([this](double t) { return derivative(t); },
                         quad::panels(a, b, cont_, kinks));
  }

 private:
  std::size_t player_;
  std::span<const double> first_;
  const GameConfig& cfg_;
  std::optional<SampledFunction> zero_;
  const SampledFunction* cont_ = nullptr;
};

void check_theta(double theta, const GameConfig& cfg, const char* who) {
  if (!(theta >= 0.0 && theta <= cfg.horizon)) {
    throw std::out_of_range(std::string(who) + ": theta=" + std::to_string(theta) +
                            " outside [0, T]");
  }
}

}  // namespace

ConvergenceError::ConvergenceError(EquilibriumResult last)
    : std::runtime_error("fixed-point iteration did not converge after " +
                         std::to_string(last.iterations) + " sweeps (last update norm " +
                         std::to_string(last.final_update_norm) + ")"),
      last_(std::move(last)) {}

double gamma_first_lock(double theta, std::size_t player,
                        std::span<const double> first_lock_thresholds,
                        const ContinuationValues& cv, const GameConfig& cfg) {
  check_theta(theta, cfg, "gamma_first_lock");
  if (theta == 0.0) {
    return 0.0;
  }
  return FirstLockIntegrand(player, first_lock_thresholds, cv, cfg).integral(0.0, theta);
}

double gamma_derivative(double theta, std::size_t player,
                        std::span<const double> first_lock_thresholds,
                        const ContinuationValues& cv, const GameConfig& cfg) {
  check_theta(theta, cfg, "gamma_derivative");
  return FirstLockIntegrand(player, first_lock_thresholds, cv, cfg).derivative(theta);
}

double best_response_first_threshold(std::size_t player,
                                     std::span<const double> first_lock_thresholds,
                                     const ContinuationValues& cv, const GameConfig& cfg) {
  const FirstLockIntegrand f(player, first_lock_thresholds, cv, cfg);
  const double nu = cfg.cost_factor;
  const auto holds = [&](double t) { return f.value_after_win(t) * f.eta(t) <= nu; };
  if (holds(0.0)) {
    return 0.0;
  }
  if (!holds(cfg.horizon)) {
    return cfg.horizon;
  }
  double lo = 0.0;
  double hi = cfg.horizon;
  while (hi - lo > kRootTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (holds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

EquilibriumResult solve_equilibrium(const GameConfig& cfg, const SolverOptions& options) {
  require_valid(cfg);
  const std::size_t n = cfg.num_players();
  const std::size_t locks = cfg.num_locks();

  EquilibriumResult result;
  result.continuation.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.continuation.push_back(backward_recursion(cfg, i, options.grid_size));
  }

  std::vector<double> first(n, cfg.horizon);
  double previous_norm = std::numeric_limits<double>::infinity();
  std::size_t stalled = 0;
  for (std::size_t sweep = 1; sweep <= options.max_iterations; ++sweep) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double br = best_response_first_threshold(i, first, result.continuation[i], cfg);
      const double next = result.damped ? first[i] + kDamping * (br - first[i]) : br;
      norm = std::max(norm, std::abs(next - first[i]));
      first[i] = next;
    }
    result.iterations = sweep;
    result.final_update_norm = norm;
    if (norm <= options.tolerance) {
      result.converged = true;
      break;
    }
    stalled = norm >= previous_norm ? stalled + 1 : 0;
    if (stalled >= kStallSweeps) {
      result.damped = true;
    }
    previous_norm = norm;
  }

  result.profile.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& th = result.profile[i].thresholds;
    th.assign(locks, 0.0);
    th[0] = first[i];
    for (std::size_t k = 1; k < locks; ++k) {
      th[k] = result.continuation[i].threshold(k);
    }
  }
  if (!result.converged) {
    throw ConvergenceError(std::move(result));
  }
  return result;
}

double semi_analytic_utility(const StrategyProfile& profile, std::size_t player,
                             const GameConfig& cfg, std::size_t grid_size) {
  require_valid(profile, cfg);
  const auto cv = continuation_for_thresholds(cfg, player, profile[player].thresholds, grid_size);
  const auto first = first_thresholds(profile);
  return gamma_first_lock(first[player], player, first, cv, cfg);
}

std::vector<DeviationReport> verify_equilibrium(const EquilibriumResult& result,
                                                const GameConfig& cfg, std::size_t candidates) {
  if (candidates < 2) {
    throw std::invalid_argument("verify_equilibrium needs at least 2 candidates");
  }
  const auto first = first_thresholds(result.profile);
  std::vector<DeviationReport> reports;
  for (std::size_t i = 0; i < cfg.num_players(); ++i) {
    const FirstLockIntegrand f(i, first, result.continuation[i], cfg);
    DeviationReport rep;
    rep.player = i;
    rep.candidates.resize(candidates);
    rep.utilities.resize(candidates);
    std::vector<double> slope(candidates);
    double running = 0.0;
    for (std::size_t j = 0; j < candidates; ++j) {
      const double theta = j + 1 == candidates
                               ? cfg.horizon
                               : cfg.horizon * static_cast<double>(j) /
                                     static_cast<double>(candidates - 1);
      if (j > 0) {
        running += f.integral(rep.candidates[j - 1], theta);
      }
      rep.candidates[j] = theta;
      rep.utilities[j] = running;
      slope[j] = f.derivative(theta);
    }
    rep.equilibrium_utility = f.integral(0.0, first[i]);
    const auto best = std::max_element(rep.utilities.begin(), rep.utilities.end());
    rep.best_candidate = rep.candidates[static_cast<std::size_t>(best - rep.utilities.begin())];
    rep.gap = *best - rep.equilibrium_utility;

    bool decreasing = true;
    bool decreasing_while_positive = true;
    for (std::size_t j = 0; j + 1 < candidates; ++j) {
      if (!(slope[j + 1] < slope[j])) {
        decreasing = false;
        if (slope[j] >= 0.0) {
          decreasing_while_positive = false;
        }
      }
      if ((slope[j] > 0.0 && slope[j + 1] <= 0.0) || (slope[j] <= 0.0 && slope[j + 1] > 0.0)) {
        ++rep.derivative_sign_changes;
      }
    }
    rep.derivative_strictly_decreasing = decreasing;
    rep.single_peaked = decreasing_while_positive && rep.derivative_sign_changes <= 1;
    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace lockrace

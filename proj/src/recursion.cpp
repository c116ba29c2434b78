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

#include "lockrace/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>

#include "lockrace/quadrature.hpp"

namespace lockrace {

namespace {

constexpr double kRootTolerance = 1e-10;

void check_player(const GameConfig& cfg, std::size_t player) {
  require_valid(cfg);
  if (player >= cfg.num_players()) {
    throw std::out_of_range("player index " + std::to_string(player) + " out of range");
  }
}

// Stage curve for a lock that is followed by `next` (nullptr for the last
// lock). Zero at and past `theta`; below it, RK4 backward from theta.
SampledFunction integrate_stage(const SampledFunction* next, double reward, double nu,
                                double beta, double theta, double horizon,
                                std::size_t grid_size) {
  auto curve = SampledFunction::zeros(0.0, horizon, grid_size);
  if (theta <= 0.0) {
    return curve;
  }
  const auto gain = [&](double t) {
    const double cont = next != nullptr ? (*next)(std::clamp(t, 0.0, horizon)) : 0.0;
    return reward + cont - nu;
  };
  const auto rhs = [&](double t, double y) { return beta * y - beta * gain(t); };

  // First grid index strictly below theta.
  std::size_t j = curve.interval(theta);
  if (curve.abscissa(j) >= theta) {
    if (j == 0) {
      return curve;
    }
    --j;
  }
  double t = theta;
  double y = 0.0;
  for (std::size_t idx = j + 1; idx-- > 0;) {
    const double target = curve.abscissa(idx);
    const double h = target - t;  // negative
    const double k1 = rhs(t, y);
    const double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = rhs(target, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = target;
    curve.set_value(idx, y);
  }
  return curve;
}

SampledFunction terminal_curve(double reward, double nu, double beta, double theta,
                               double horizon, std::size_t grid_size) {
  return SampledFunction::sample(0.0, horizon, grid_size, [&](double t) {
    return t < theta ? (reward - nu) * (1.0 - std::exp(-beta * (theta - t))) : 0.0;
  });
}

}  // namespace

SampledFunction ContinuationValues::after_first_lock() const {
  if (curves.empty()) {
    return SampledFunction::zeros(0.0, horizon, grid_size);
  }
  return curves.front();
}

TerminalStage terminal_stage(const GameConfig& cfg, std::size_t player,
                             std::size_t grid_size) {
  check_player(cfg, player);
  const std::size_t last = cfg.num_locks() - 1;
  const double reward = cfg.reward(player, last);
  const double nu = cfg.cost_factor;
  const double horizon = cfg.horizon;
  if (!(reward > nu)) {
    return {0.0, SampledFunction::zeros(0.0, horizon, grid_size)};
  }
  return {horizon, terminal_curve(reward, nu, cfg.rate(player), horizon, horizon, grid_size)};
}

double threshold_root(const SampledFunction& upsilon_next, double reward, double nu,
                      double horizon) {
  const auto holds = [&](double t) { return reward + upsilon_next(t) <= nu; };
  const double lo_end = upsilon_next.lo();
  const double hi_end = std::min(horizon, upsilon_next.hi());
  if (holds(lo_end)) {
    return lo_end;
  }
  if (!holds(hi_end)) {
    return horizon;
  }
  double lo = lo_end;  // condition false
  double hi = hi_end;  // condition true
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

ContinuationValues backward_recursion(const GameConfig& cfg, std::size_t player,
                                      std::size_t grid_size) {
  check_player(cfg, player);
  if (grid_size < 2) {
    throw std::invalid_argument("grid_size must be at least 2");
  }
  const std::size_t locks = cfg.num_locks();
  ContinuationValues cv;
  cv.player = player;
  cv.num_locks = locks;
  cv.grid_size = grid_size;
  cv.horizon = cfg.horizon;
  if (locks < 2) {
    return cv;
  }
  const double nu = cfg.cost_factor;
  const double beta = cfg.rate(player);
  cv.thresholds.assign(locks - 1, 0.0);
  cv.curves.assign(locks - 1, SampledFunction::zeros(0.0, cfg.horizon, grid_size));

  auto terminal = terminal_stage(cfg, player, grid_size);
  cv.thresholds.back() = terminal.threshold;
  cv.curves.back() = std::move(terminal.curve);
  if (cfg.reward(player, locks - 1) == nu) {
    cv.diagnostics.push_back("lock " + std::to_string(locks) +
                             ": reward equals cost factor; strict indicator gives threshold 0");
  }

  for (std::size_t k = locks - 1; k-- > 1;) {
    const SampledFunction& next = cv.curves[k];  // lock k + 1
    const double reward = cfg.reward(player, k);
    const double theta = threshold_root(next, reward, nu, cfg.horizon);
    if (reward + next(0.0) == nu) {
      cv.diagnostics.push_back("lock " + std::to_string(k + 1) +
                               ": gain is exactly zero at t=0; threshold set to 0");
    }
    cv.thresholds[k - 1] = theta;
    cv.curves[k - 1] = integrate_stage(&next, reward, nu, beta, theta, cfg.horizon, grid_size);
  }
  return cv;
}

ContinuationValues continuation_for_thresholds(const GameConfig& cfg, std::size_t player,
                                               std::span<const double> thresholds,
                                               std::size_t grid_size) {
  check_player(cfg, player);
  const std::size_t locks = cfg.num_locks();
  if (thresholds.size() != locks) {
    throw std::invalid_argument("continuation_for_thresholds: expected one threshold per lock");
  }
  ContinuationValues cv;
  cv.player = player;
  cv.num_locks = locks;
  cv.grid_size = grid_size;
  cv.horizon = cfg.horizon;
  if (locks < 2) {
    return cv;
  }
  const double nu = cfg.cost_factor;
  const double beta = cfg.rate(player);
  cv.thresholds.assign(thresholds.begin() + 1, thresholds.end());
  cv.curves.assign(locks - 1, SampledFunction::zeros(0.0, cfg.horizon, grid_size));
  cv.curves.back() = terminal_curve(cfg.reward(player, locks - 1), nu, beta,
                                    thresholds[locks - 1], cfg.horizon, grid_size);
  for (std::size_t k = locks - 1; k-- > 1;) {
    cv.curves[k - 1] = integrate_stage(&cv.curves[k], cfg.reward(player, k), nu, beta,
                                       thresholds[k], cfg.horizon, grid_size);
  }
  return cv;
}

double quadrature_check(const ContinuationValues& cv, const GameConfig& cfg,
                        std::size_t player, std::size_t samples, std::uint64_t seed) {
  if (cv.curves.empty()) {
    return 0.0;
  }
  const double nu = cfg.cost_factor;
  const double beta = cfg.rate(player);
  const std::size_t n = cv.grid_size;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  double worst = 0.0;
  for (std::size_t k = 1; k < cv.num_locks; ++k) {
    const SampledFunction& curve = cv.curve(k);
    const SampledFunction* next = k + 1 < cv.num_locks ? &cv.curve(k + 1) : nullptr;
    const double theta = cv.threshold(k);
    const double reward = cfg.reward(player, k);

    std::vector<std::size_t> indices;
    if (samples >= n) {
      indices.resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        indices[j] = j;
      }
    } else {
      for (std::size_t s = 0; s < samples; ++s) {
        indices.push_back(pick(rng));
      }
    }
    for (std::size_t j : indices) {
      const double t = curve.abscissa(j);
      double expected = 0.0;
      if (t < theta) {
        const auto integrand = [&](double s) {
          const double cont = next != nullptr ? (*next)(s) : 0.0;
          return (reward + cont - nu) * beta * std::exp(-beta * (s - t));
        };
        expected = quad::simpson(integrand, quad::panels(t, theta, &curve));
      }
      worst = std::max(worst, std::abs(curve.value(j) - expected));
    }
  }
  return worst;
}

void write_curves_csv(std::ostream& out, std::span<const ContinuationValues> cvs) {
  const auto old_precision = out.precision();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "player,k,threshold\n";
  for (const auto& cv : cvs) {
    for (std::size_t k = 1; k < cv.num_locks; ++k) {
      out << cv.player + 1 << ',' << k + 1 << ',' << cv.threshold(k) << '\n';
    }
  }
  out << "player,k,t,upsilon\n";
  for (const auto& cv : cvs) {
    for (std::size_t k = 1; k < cv.num_locks; ++k) {
      const auto& curve = cv.curve(k);
      for (std::size_t j = 0; j < curve.size(); ++j) {
        out << cv.player + 1 << ',' << k + 1 << ',' << curve.abscissa(j) << ','
            << curve.value(j) << '\n';
      }
    }
  }
  out.precision(old_precision);
}

}  // namespace lockrace

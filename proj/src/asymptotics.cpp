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
#include <numeric>

#include "lockrace/equilibrium.hpp"

namespace lockrace {

std::string to_string(AsymptoticBranch branch) {
  switch (branch) {
    case AsymptoticBranch::kSymmetric:
      return "symmetric";
    case AsymptoticBranch::kMonotone:
      return "monotone";
    case AsymptoticBranch::kInapplicable:
      return "inapplicable";
  }
  return "unknown";
}

namespace {

bool equal_rates(const GameConfig& cfg) {
  return std::all_of(cfg.players.begin(), cfg.players.end(),
                     [&](const PlayerSpec& p) { return p.rate == cfg.players.front().rate; });
}

bool identical_rewards(const GameConfig& cfg) {
  return std::all_of(cfg.players.begin(), cfg.players.end(), [&](const PlayerSpec& p) {
    return p.rewards == cfg.players.front().rewards;
  });
}

bool ordered_rewards(const GameConfig& cfg) {
  for (std::size_t i = 0; i + 1 < cfg.num_players(); ++i) {
    for (std::size_t k = 0; k < cfg.num_locks(); ++k) {
      if (cfg.reward(i, k) < cfg.reward(i + 1, k)) {
        return false;
      }
    }
  }
  return true;
}

// Solves (value) exp(-beta * opponents * t) = nu for t, clipped to [0, T].
// With no opponents the left side is constant: T if profitable, else 0.
double first_lock_crossing(double value, double nu, double beta, double opponents,
                           double offset, double horizon) {
  if (!(value > 0.0)) {
    return 0.0;
  }
  const double numerator = std::log(value / nu) - offset;
  if (opponents == 0.0) {
    return numerator > 0.0 ? horizon : 0.0;
  }
  return std::clamp(numerator / (opponents * beta), 0.0, horizon);
}

AsymptoticResult symmetric_branch(const GameConfig& cfg) {
  AsymptoticResult out;
  out.branch = AsymptoticBranch::kSymmetric;
  out.ordering_holds = true;
  const auto& c = cfg.players.front().rewards;
  const std::size_t locks = c.size();
  const double nu = cfg.cost_factor;
  const double horizon = cfg.horizon;
  const double beta = cfg.players.front().rate;
  const double n = static_cast<double>(cfg.num_players());

  // Partial sums c_l + ... + c_k with 1-based lock numbers.
  const auto partial = [&](std::size_t from, std::size_t to) {
    return std::accumulate(c.begin() + static_cast<std::ptrdiff_t>(from - 1),
                           c.begin() + static_cast<std::ptrdiff_t>(to), 0.0);
  };

  std::vector<double> theta(locks, 0.0);
  // effective_last: the last lock still worth pursuing from lock k onward.
  std::size_t effective_last = locks;
  if (locks >= 2) {
    theta[locks - 1] = c[locks - 1] > nu ? horizon : 0.0;
    effective_last = c[locks - 1] < nu ? locks - 1 : locks;
    for (std::size_t k = locks - 1; k >= 2; --k) {
      const double span = static_cast<double>(effective_last - k + 1);
      const bool profitable = partial(k, effective_last) >= span * nu;
      theta[k - 1] = profitable ? horizon : 0.0;
      effective_last = profitable ? effective_last : k - 1;
    }
  } else {
    effective_last = 1;
  }
  // effective_last now plays the role of the index computed at lock 2.
  const double value = partial(1, std::max<std::size_t>(effective_last, 1)) -
                       static_cast<double>(std::max<std::size_t>(effective_last, 1) - 1) * nu;
  theta[0] = first_lock_crossing(value, nu, beta, n - 1.0, 0.0, horizon);
  out.profile = uniform_profile(cfg, theta);
  out.notes.push_back("effective last lock " + std::to_string(effective_last));
  return out;
}

AsymptoticResult monotone_branch(const GameConfig& cfg) {
  AsymptoticResult out;
  out.branch = AsymptoticBranch::kMonotone;
  const std::size_t n = cfg.num_players();
  const std::size_t locks = cfg.num_locks();
  const double nu = cfg.cost_factor;
  const double beta = cfg.rate(0);
  const double horizon = cfg.horizon;

  std::vector<double> first(n, 0.0);
  double committed = 0.0;  // beta * sum of thresholds of weaker players
  for (std::size_t p = n; p-- > 0;) {
    const auto& c = cfg.players[p].rewards;
    const double total = std::accumulate(c.begin(), c.end(), 0.0);
    const double value = total - static_cast<double>(locks - 1) * nu;
    // Player p (0-based) still races the p stronger players.
    first[p] = first_lock_crossing(value, nu, beta, static_cast<double>(p), committed, horizon);
    committed += beta * first[p];
  }
  out.ordering_holds = true;
  for (std::size_t p = 0; p + 1 < n; ++p) {
    if (first[p] < first[p + 1]) {
      out.ordering_holds = false;
    }
  }
  if (!out.ordering_holds) {
    out.notes.push_back("first-lock thresholds are not ordered by player; the derivation's "
                        "ordering assumption fails");
  }
  out.profile.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    out.profile[p].thresholds.assign(locks, horizon);
    out.profile[p].thresholds[0] = first[p];
  }
  return out;
}

}  // namespace

AsymptoticResult asymptotic_equilibrium(const GameConfig& cfg) {
  require_valid(cfg);
  if (!equal_rates(cfg)) {
    AsymptoticResult out;
    out.notes.push_back("closed forms require equal rates for all players");
    return out;
  }
  if (identical_rewards(cfg)) {
    return symmetric_branch(cfg);
  }
  const std::size_t n = cfg.num_players();
  const std::size_t locks = cfg.num_locks();
  if (!ordered_rewards(cfg)) {
    AsymptoticResult out;
    out.notes.push_back("rewards are neither identical nor ordered across players");
    return out;
  }
  if (cfg.reward(n - 1, locks - 1) < static_cast<double>(locks) * cfg.cost_factor) {
    AsymptoticResult out;
    out.notes.push_back("monotone case needs the weakest player's last reward >= M * nu");
    return out;
  }
  return monotone_branch(cfg);
}

}  // namespace lockrace

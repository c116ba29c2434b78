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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lockrace {

/// Thrown when a GameConfig or StrategyProfile violates its invariants.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct PlayerSpec {
  double rate = 1.0;            // maximum contact rate beta^i
  std::vector<double> rewards;  // c^i_1 .. c^i_M
};

/// Primitives of the n-player, M-lock acquisition race.
///
/// Players and locks are 0-based in the C++ API; lock `k` here is lock
/// `k + 1` in file formats and reports.
struct GameConfig {
  double horizon = 1.0;      // T
  double cost_factor = 1.0;  // nu, cost per unit of accumulated acceleration
  std::vector<PlayerSpec> players;

  std::size_t num_players() const { return players.size(); }
  std::size_t num_locks() const {
    return players.empty() ? 0 : players.front().rewards.size();
  }
  double rate(std::size_t player) const { return players.at(player).rate; }
  double reward(std::size_t player, std::size_t lock) const {
    return players.at(player).rewards.at(lock);
  }
};

/// Every violated invariant, human readable; empty when the config is valid.
std::vector<std::string> validate_config(const GameConfig& cfg);

/// Throws ConfigError listing all violations.
void require_valid(const GameConfig& cfg);

/// Gamma_{theta; s}: full rate on [start, threshold], zero elsewhere.
struct ThresholdPolicy {
  double threshold = 0.0;
  double start = 0.0;
  double rate = 1.0;

  double rate_at(double t) const {
    return (t >= start && t <= threshold) ? rate : 0.0;
  }
  /// Integral of the rate over [start, t].
  double accumulated(double t) const;
};

/// M thresholds, one per lock, independent of previous acquisition times.
struct MTStrategy {
  std::vector<double> thresholds;
};

using StrategyProfile = std::vector<MTStrategy>;

/// Checks shape and range of a profile against `cfg`; empty when valid.
std::vector<std::string> validate_profile(const StrategyProfile& profile,
                                          const GameConfig& cfg);
void require_valid(const StrategyProfile& profile, const GameConfig& cfg);

/// Profile where every player uses the same M thresholds.
StrategyProfile uniform_profile(const GameConfig& cfg, std::span<const double> thresholds);

/// First-lock thresholds theta^m_1 of every player.
std::vector<double> first_thresholds(const StrategyProfile& profile);

/// Information state z_k = (l_k, tau_{k-1}); `active == false` means the
/// player has stopped for good.
struct PlayerState {
  bool active = true;
  std::optional<double> last_contact;
};

/// Probability that no opponent of `player` has contacted lock 1 by time t:
/// exp(-sum_{m != player} beta^m min(t, theta^m_1)). `first_lock_thresholds`
/// has one entry per player; the entry for `player` itself is ignored.
double eta_first_lock(double t, std::size_t player,
                      std::span<const double> first_lock_thresholds, const GameConfig& cfg);

double eta_first_lock(double t, std::size_t player, const StrategyProfile& profile,
                      const GameConfig& cfg);

}  // namespace lockrace

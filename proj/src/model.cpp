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

#include "lockrace/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lockrace {

std::vector<std::string> validate_config(const GameConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.players.empty()) {
    errors.emplace_back("at least one player is required");
  }
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) {
    errors.emplace_back("horizon must be positive");
  }
  if (!(cfg.cost_factor > 0.0) || !std::isfinite(cfg.cost_factor)) {
    errors.emplace_back("cost_factor must be positive");
  }
  const std::size_t locks = cfg.num_locks();
  if (!cfg.players.empty() && locks == 0) {
    errors.emplace_back("at least one lock is required");
  }
  for (std::size_t i = 0; i < cfg.players.size(); ++i) {
    const auto& p = cfg.players[i];
    const std::string who = "player " + std::to_string(i + 1);
    if (!(p.rate > 0.0) || !std::isfinite(p.rate)) {
      errors.push_back(who + ": rate must be positive");
    }
    if (p.rewards.size() != locks) {
      errors.push_back(who + ": rewards length mismatch (" +
                       std::to_string(p.rewards.size()) + " vs " +
                       std::to_string(locks) + ")");
    }
    for (std::size_t k = 0; k < p.rewards.size(); ++k) {
      if (!(p.rewards[k] >= 0.0) || !std::isfinite(p.rewards[k])) {
        errors.push_back(who + ": reward for lock " + std::to_string(k + 1) +
                         " must be non-negative");
      }
    }
  }
  return errors;
}

namespace {

[[noreturn]] void throw_joined(const std::vector<std::string>& errors) {
  std::ostringstream os;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    os << (i ? "; " : "") << errors[i];
  }
  throw ConfigError(os.str());
}

}  // namespace

void require_valid(const GameConfig& cfg) {
  if (auto errors = validate_config(cfg); !errors.empty()) {
    throw_joined(errors);
  }
}

double ThresholdPolicy::accumulated(double t) const {
  if (start > threshold) {
    return 0.0;
  }
  const double upper = std::min(t, threshold);
  return upper > start ? rate * (upper - start) : 0.0;
}

std::vector<std::string> validate_profile(const StrategyProfile& profile,
                                          const GameConfig& cfg) {
  std::vector<std::string> errors;
  if (profile.size() != cfg.num_players()) {
    errors.push_back("profile has " + std::to_string(profile.size()) +
                     " strategies for " + std::to_string(cfg.num_players()) + " players");
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto& th = profile[i].thresholds;
    const std::string who = "player " + std::to_string(i + 1);
    if (th.size() != cfg.num_locks()) {
      errors.push_back(who + ": expected " + std::to_string(cfg.num_locks()) +
                       " thresholds, got " + std::to_string(th.size()));
    }
    for (std::size_t k = 0; k < th.size(); ++k) {
      if (!(th[k] >= 0.0 && th[k] <= cfg.horizon)) {
        errors.push_back(who + ": threshold " + std::to_string(k + 1) +
                         " outside [0, horizon]");
      }
    }
  }
  return errors;
}

void require_valid(const StrategyProfile& profile, const GameConfig& cfg) {
  if (auto errors = validate_profile(profile, cfg); !errors.empty()) {
    throw_joined(errors);
  }
}

StrategyProfile uniform_profile(const GameConfig& cfg, std::span<const double> thresholds) {
  MTStrategy s{std::vector<double>(thresholds.begin(), thresholds.end())};
  return StrategyProfile(cfg.num_players(), s);
}

std::vector<double> first_thresholds(const StrategyProfile& profile) {
  std::vector<double> out;
  out.reserve(profile.size());
  for (const auto& s : profile) {
    out.push_back(s.thresholds.empty() ? 0.0 : s.thresholds.front());
  }
  return out;
}

double eta_first_lock(double t, std::size_t player,
                      std::span<const double> first_lock_thresholds, const GameConfig& cfg) {
  if (!(t >= 0.0 && t <= cfg.horizon)) {
    throw std::out_of_range("eta_first_lock: t=" + std::to_string(t) + " outside [0, T]");
  }
  double exponent = 0.0;
  for (std::size_t m = 0; m < first_lock_thresholds.size(); ++m) {
    if (m != player) {
      exponent += cfg.rate(m) * std::min(t, first_lock_thresholds[m]);
    }
  }
  return std::exp(-exponent);
}

double eta_first_lock(double t, std::size_t player, const StrategyProfile& profile,
                      const GameConfig& cfg) {
  const auto first = first_thresholds(profile);
  return eta_first_lock(t, player, first, cfg);
}

}  // namespace lockrace

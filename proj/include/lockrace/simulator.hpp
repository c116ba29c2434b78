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
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "lockrace/control.hpp"
#include "lockrace/model.hpp"
#include "lockrace/sampled_function.hpp"

namespace lockrace {

/// Counter-based random stream: every draw is a pure function of
/// (seed, episode, player, stage), so results do not depend on scheduling
/// and deviating players see the same opponent randomness.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t episode) : seed_(seed), episode_(episode) {}

  /// Uniform on (0, 1).
  double uniform(std::uint64_t player, std::uint64_t stage) const;
  /// Exp(1) draw.
  double unit_exponential(std::uint64_t player, std::uint64_t stage) const;

 private:
  std::uint64_t seed_;
  std::uint64_t episode_;
};

enum class StopReason {
  kUnsuccessfulContact,  // contacted lock 1 after someone else did
  kThresholdExpired,     // threshold passed (or already passed at stage start)
  kHorizon,              // attempt ran to the horizon without contact
  kCompleted,            // all locks acquired
};

const char* to_string(StopReason reason);

struct PlayerOutcome {
  double payoff = 0.0;
  double acceleration = 0.0;  // total accumulated rate over all stages
  std::size_t locks_acquired = 0;
  std::optional<double> first_contact;  // valid lock-1 contact epoch
  bool won_first = false;
  StopReason reason = StopReason::kThresholdExpired;
};

struct EpisodeOutcome {
  std::vector<PlayerOutcome> players;
  bool tie = false;  // two valid first contacts at the same epoch
};

/// One race under an MT profile.
EpisodeOutcome simulate_episode(const StrategyProfile& profile, const GameConfig& cfg,
                                const RandomStream& stream);

struct PlayerEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double mean_acceleration = 0.0;
  double acceleration_standard_error = 0.0;
};

struct PayoffEstimate {
  std::vector<PlayerEstimate> players;
  std::size_t episodes = 0;
  std::uint64_t seed = 0;
};

struct SimulationOptions {
  std::size_t workers = 1;
  /// When set, receives every episode outcome in episode order.
  std::vector<EpisodeOutcome>* episodes_out = nullptr;
};

/// Mean and standard error (sample std / sqrt(episodes)) of each player's
/// payoff over independent episodes. Bit-reproducible for a fixed seed
/// regardless of the worker count.
PayoffEstimate estimate_payoffs(const StrategyProfile& profile, const GameConfig& cfg,
                                std::size_t episodes, std::uint64_t seed,
                                const SimulationOptions& options = {});

/// One estimate per candidate first-lock threshold of `player`, all using
/// the same random streams.
std::vector<PayoffEstimate> deviation_test_mc(const StrategyProfile& profile,
                                              const GameConfig& cfg, std::size_t player,
                                              std::span<const double> candidates,
                                              std::size_t episodes, std::uint64_t seed);

struct PairedDifference {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Episode-wise payoff difference of `player` between two profiles under
/// common random numbers: payoff(a) - payoff(b).
PairedDifference paired_payoff_difference(const StrategyProfile& a, const StrategyProfile& b,
                                          const GameConfig& cfg, std::size_t player,
                                          std::size_t episodes, std::uint64_t seed);

/// Empirical CDF of the contact epoch on `grid_size` abscissae of [0, horizon].
SampledFunction empirical_cdf_first_contact(const ThresholdPolicy& policy, double horizon,
                                            std::size_t episodes, std::uint64_t seed,
                                            std::size_t grid_size = kDefaultGridSize);
SampledFunction empirical_cdf_first_contact(const PiecewiseConstantControl& control,
                                            std::size_t episodes, std::uint64_t seed,
                                            std::size_t grid_size = kDefaultGridSize);

/// Per-episode CSV: episode,player,payoff,stage_reached,tau_1 (1-based
/// player; tau_1 empty when there was no valid first contact).
void write_episodes_csv(std::ostream& out, std::span<const EpisodeOutcome> episodes);

/// Pairwise summation; the association order depends only on the length.
double pairwise_sum(std::span<const double> values);

}  // namespace lockrace

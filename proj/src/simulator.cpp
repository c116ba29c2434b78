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

#include "lockrace/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <thread>

namespace lockrace {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Moments {
  double mean = 0.0;
  double standard_error = 0.0;
};

Moments moments(std::span<const double> xs) {
  Moments m;
  const auto n = static_cast<double>(xs.size());
  if (xs.empty()) {
    return m;
  }
  m.mean = pairwise_sum(xs) / n;
  if (xs.size() < 2) {
    return m;
  }
  std::vector<double> sq(xs.size());
  std::transform(xs.begin(), xs.end(), sq.begin(),
                 [&](double x) { return (x - m.mean) * (x - m.mean); });
  m.standard_error = std::sqrt(pairwise_sum(sq) / (n - 1.0)) / std::sqrt(n);
  return m;
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t e = 0; e < count; ++e) {
      fn(e);
    }
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t e = lo; e < hi; ++e) {
        fn(e);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
}

SampledFunction cdf_on_grid(std::vector<double> contacts, std::size_t episodes, double lo,
                            double hi, std::size_t grid_size) {
  std::sort(contacts.begin(), contacts.end());
  return SampledFunction::sample(lo, hi, grid_size, [&](double t) {
    const auto hits = std::upper_bound(contacts.begin(), contacts.end(), t) - contacts.begin();
    return static_cast<double>(hits) / static_cast<double>(episodes);
  });
}

}  // namespace

double RandomStream::uniform(std::uint64_t player, std::uint64_t stage) const {
  std::uint64_t h = splitmix64(seed_);
  h = splitmix64(h ^ episode_);
  h = splitmix64(h ^ (player << 32 | stage));
  // 53 random bits, shifted off zero.
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::unit_exponential(std::uint64_t player, std::uint64_t stage) const {
  return -std::log(uniform(player, stage));
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kUnsuccessfulContact:
      return "unsuccessful_contact";
    case StopReason::kThresholdExpired:
      return "threshold_expired";
    case StopReason::kHorizon:
      return "horizon";
    case StopReason::kCompleted:
      return "completed";
  }
  return "unknown";
}

EpisodeOutcome simulate_episode(const StrategyProfile& profile, const GameConfig& cfg,
                                const RandomStream& stream) {
  const std::size_t n = cfg.num_players();
  const std::size_t locks = cfg.num_locks();
  const double nu = cfg.cost_factor;
  const double horizon = cfg.horizon;

  EpisodeOutcome out;
  out.players.resize(n);

  // Stage 1: every player races with rate beta^i until theta^i_1.
  std::optional<std::size_t> winner;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    auto& p = out.players[i];
    const double beta = cfg.rate(i);
    const double cutoff = std::min(profile[i].thresholds[0], horizon);
    if (!(cutoff > 0.0)) {
      p.reason = StopReason::kThresholdExpired;
      continue;
    }
    const double epoch = stream.unit_exponential(i, 0) / beta;
    p.acceleration = beta * std::min(epoch, cutoff);
    if (epoch <= cutoff) {
      p.first_contact = epoch;
      if (epoch < best) {
        best = epoch;
        winner = i;
      } else if (epoch == best) {
        out.tie = true;  // lower index keeps the lock
      }
    } else {
      p.reason = cutoff >= horizon ? StopReason::kHorizon : StopReason::kThresholdExpired;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (out.players[i].first_contact && winner != i) {
      out.players[i].reason = StopReason::kUnsuccessfulContact;
    }
  }

  if (winner) {
    const std::size_t i = *winner;
    auto& p = out.players[i];
    const double beta = cfg.rate(i);
    p.won_first = true;
    p.locks_acquired = 1;
    double reward = cfg.reward(i, 0);
    double last = *p.first_contact;
    p.reason = StopReason::kCompleted;
    for (std::size_t k = 1; k < locks; ++k) {
      const double cutoff = std::min(profile[i].thresholds[k], horizon);
      if (!(last < cutoff)) {
        p.reason = StopReason::kThresholdExpired;
        break;
      }
      const double epoch = last + stream.unit_exponential(i, k) / beta;
      p.acceleration += beta * (std::min(epoch, cutoff) - last);
      if (epoch > cutoff) {
        p.reason = cutoff >= horizon ? StopReason::kHorizon : StopReason::kThresholdExpired;
        break;
      }
      reward += cfg.reward(i, k);
      p.locks_acquired = k + 1;
      last = epoch;
    }
    p.payoff = reward;
  }
  for (auto& p : out.players) {
    p.payoff -= nu * p.acceleration;
  }
  return out;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) {
      s += v;
    }
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

PayoffEstimate estimate_payoffs(const StrategyProfile& profile, const GameConfig& cfg,
                                std::size_t episodes, std::uint64_t seed,
                                const SimulationOptions& options) {
  require_valid(cfg);
  require_valid(profile, cfg);
  if (episodes == 0) {
    throw std::invalid_argument("estimate_payoffs needs at least one episode");
  }
  const std::size_t n = cfg.num_players();
  std::vector<std::vector<double>> payoff(n, std::vector<double>(episodes));
  std::vector<std::vector<double>> accel(n, std::vector<double>(episodes));
  if (options.episodes_out != nullptr) {
    options.episodes_out->assign(episodes, EpisodeOutcome{});
  }
  parallel_for(episodes, options.workers, [&](std::size_t e) {
    auto outcome = simulate_episode(profile, cfg, RandomStream(seed, e));
    for (std::size_t i = 0; i < n; ++i) {
      payoff[i][e] = outcome.players[i].payoff;
      accel[i][e] = outcome.players[i].acceleration;
    }
    if (options.episodes_out != nullptr) {
      (*options.episodes_out)[e] = std::move(outcome);
    }
  });

  PayoffEstimate est;
  est.episodes = episodes;
  est.seed = seed;
  est.players.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pm = moments(payoff[i]);
    const auto am = moments(accel[i]);
    est.players[i] = {pm.mean, pm.standard_error, am.mean, am.standard_error};
  }
  return est;
}

std::vector<PayoffEstimate> deviation_test_mc(const StrategyProfile& profile,
                                              const GameConfig& cfg, std::size_t player,
                                              std::span<const double> candidates,
                                              std::size_t episodes, std::uint64_t seed) {
  if (player >= cfg.num_players()) {
    throw std::out_of_range("deviation_test_mc: player index out of range");
  }
  std::vector<PayoffEstimate> out;
  out.reserve(candidates.size());
  for (double theta : candidates) {
    StrategyProfile deviated = profile;
    deviated[player].thresholds[0] = theta;
    out.push_back(estimate_payoffs(deviated, cfg, episodes, seed));
  }
  return out;
}

PairedDifference paired_payoff_difference(const StrategyProfile& a, const StrategyProfile& b,
                                          const GameConfig& cfg, std::size_t player,
                                          std::size_t episodes, std::uint64_t seed) {
  require_valid(a, cfg);
  require_valid(b, cfg);
  std::vector<double> diff(episodes);
  for (std::size_t e = 0; e < episodes; ++e) {
    const RandomStream stream(seed, e);
    diff[e] = simulate_episode(a, cfg, stream).players[player].payoff -
              simulate_episode(b, cfg, stream).players[player].payoff;
  }
  const auto m = moments(diff);
  return {m.mean, m.standard_error};
}

SampledFunction empirical_cdf_first_contact(const ThresholdPolicy& policy, double horizon,
                                            std::size_t episodes, std::uint64_t seed,
                                            std::size_t grid_size) {
  std::vector<double> contacts;
  const double cutoff = std::min(policy.threshold, horizon);
  if (policy.start <= cutoff) {
    for (std::size_t e = 0; e < episodes; ++e) {
      const double epoch =
          policy.start + RandomStream(seed, e).unit_exponential(0, 0) / policy.rate;
      if (epoch <= cutoff) {
        contacts.push_back(epoch);
      }
    }
  }
  return cdf_on_grid(std::move(contacts), episodes, 0.0, horizon, grid_size);
}

SampledFunction empirical_cdf_first_contact(const PiecewiseConstantControl& control,
                                            std::size_t episodes, std::uint64_t seed,
                                            std::size_t grid_size) {
  std::vector<double> contacts;
  for (std::size_t e = 0; e < episodes; ++e) {
    if (auto epoch = control.contact_time(RandomStream(seed, e).unit_exponential(0, 0))) {
      contacts.push_back(*epoch);
    }
  }
  return cdf_on_grid(std::move(contacts), episodes, control.start(), control.end(), grid_size);
}

void write_episodes_csv(std::ostream& out, std::span<const EpisodeOutcome> episodes) {
  const auto old_precision = out.precision();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "episode,player,payoff,stage_reached,tau_1\n";
  for (std::size_t e = 0; e < episodes.size(); ++e) {
    const auto& players = episodes[e].players;
    for (std::size_t i = 0; i < players.size(); ++i) {
      out << e << ',' << i + 1 << ',' << players[i].payoff << ',' << players[i].locks_acquired
          << ',';
      if (players[i].first_contact) {
        out << *players[i].first_contact;
      }
      out << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace lockrace

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

// Acceptance battery: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lockrace/equilibrium.hpp"
#include "lockrace/oracle_suite.hpp"
#include "lockrace/recursion.hpp"
#include "lockrace/simulator.hpp"

using namespace lockrace;

namespace {

GameConfig symmetric(std::size_t n, double beta, double horizon, double nu,
                     std::vector<double> rewards) {
  GameConfig cfg;
  cfg.horizon = horizon;
  cfg.cost_factor = nu;
  cfg.players.assign(n, PlayerSpec{beta, std::move(rewards)});
  return cfg;
}

GameConfig fig1(double nu) { return symmetric(4, 1.0, 8.0, nu, {1, 3, 3, 3, 3}); }
GameConfig fig2(double nu) { return symmetric(2, 1.0, 5.0, nu, {4, 3, 2, 1}); }

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

struct Outcome {
  bool passed = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, double limit_s,
            const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs > limit_s) {
    o.passed = false;
    o.detail += " [runtime limit exceeded]";
  }
  failures += o.passed ? 0 : 1;
  std::printf("[%s] criterion %d: %s (%.2fs) %s\n", o.passed ? "PASS" : "FAIL", id,
              title.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

Outcome criterion1() {
  double worst = 0.0;
  for (double nu : linspace(0.3, 2.0, 18)) {
    const auto cfg = fig1(nu);
    const auto r = solve_equilibrium(cfg);
    const auto asym = asymptotic_equilibrium(cfg);
    if (!r.converged || asym.profile.empty()) {
      return {false, "nu=" + std::to_string(nu) + " not converged or no closed form"};
    }
    for (std::size_t p = 0; p < cfg.num_players(); ++p) {
      const auto& th = r.profile[p].thresholds;
      for (std::size_t k = 1; k < th.size(); ++k) {
        if (th[k] != 8.0) {
          return {false, "theta_" + std::to_string(k + 1) + " != 8 at nu=" + std::to_string(nu)};
        }
      }
      worst = std::max(worst, std::abs(th[0] - asym.profile[p].thresholds[0]));
    }
  }
  std::ostringstream os;
  os << "max |dtheta_1| = " << worst << " (limit 0.05)";
  return {worst <= 0.05, os.str()};
}

Outcome criterion2() {
  const auto grid = linspace(0.25, 3.0, 56);
  std::vector<std::vector<double>> thetas;
  for (double nu : grid) {
    const auto r = solve_equilibrium(fig2(nu));
    if (!r.converged) {
      return {false, "no convergence at nu=" + std::to_string(nu)};
    }
    for (std::size_t p = 1; p < r.profile.size(); ++p) {
      if (r.profile[p].thresholds != r.profile[0].thresholds) {
        return {false, "asymmetric solution at nu=" + std::to_string(nu)};
      }
    }
    thetas.push_back(r.profile[0].thresholds);
  }
  for (std::size_t i = 1; i < thetas.size(); ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (thetas[i][k] > thetas[i - 1][k]) {
        return {false, "theta_" + std::to_string(k + 1) + " increases at nu=" +
                           std::to_string(grid[i])};
      }
    }
  }
  std::optional<std::size_t> first4;
  std::optional<std::size_t> first3;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const auto& t = thetas[i];
    if (!first4 && t[3] == 0.0 && t[2] > 0 && t[1] > 0 && t[0] > 0) first4 = i;
    if (first4 && !first3 && t[2] == 0.0 && t[1] > 0 && t[0] > 0) first3 = i;
  }
  if (!first4 || !first3) {
    return {false, "expected zero-threshold ordering not observed"};
  }
  std::ostringstream os;
  os << "theta_4 = 0 from nu=" << grid[*first4] << ", theta_3 = 0 from nu=" << grid[*first3];
  return {grid[*first4] < grid[*first3], os.str()};
}

Outcome criterion3() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(u(rng) * 4.0);
    const double beta = 0.5 + 1.5 * u(rng);
    const double c = 1.0 + 4.0 * u(rng);
    const double nu = c * (0.05 + 0.85 * u(rng));
    const double horizon = 10.0;
    const double exact = -std::log(nu / c) / (static_cast<double>(n - 1) * beta);
    if (!(exact > 0.0 && exact < horizon)) {
      return {false, "generator produced a non-interior instance"};
    }
    const auto r = solve_equilibrium(symmetric(n, beta, horizon, nu, {c}));
    for (const auto& s : r.profile) {
      worst = std::max(worst, std::abs(s.thresholds[0] - exact));
    }
  }
  std::ostringstream os;
  os << "max error " << worst << " over 20 configs (limit 1e-6)";
  return {worst <= 1e-6, os.str()};
}

Outcome criterion4() {
  double gap = -1.0;
  bool strict = true;
  bool peaked = true;
  std::string witness;
  for (const auto& [name, cfg] : {std::pair{"fig1", fig1(1.0)}, std::pair{"fig2", fig2(1.0)}}) {
    const auto r = solve_equilibrium(cfg);
    for (const auto& d : verify_equilibrium(r, cfg, 400)) {
      gap = std::max(gap, d.gap);
      peaked = peaked && d.single_peaked;
      if (!d.derivative_strictly_decreasing && strict) {
        strict = false;
        // First increase of the derivative along the candidate grid.
        const auto first = first_thresholds(r.profile);
        double prev = gamma_derivative(d.candidates[0], d.player, first,
                                       r.continuation[d.player], cfg);
        for (std::size_t j = 1; j < d.candidates.size(); ++j) {
          const double cur = gamma_derivative(d.candidates[j], d.player, first,
                                              r.continuation[d.player], cfg);
          if (cur >= prev) {
            std::ostringstream os;
            os << name << " player " << d.player + 1 << " derivative rises at t="
               << d.candidates[j] << " (" << prev << " -> " << cur << ")";
            witness = os.str();
            break;
          }
          prev = cur;
        }
      }
    }
  }
  std::ostringstream os;
  os << "max gap " << gap << " (limit 1e-6); derivative strictly decreasing: "
     << (strict ? "yes" : "no") << "; single-peaked: " << (peaked ? "yes" : "no");
  if (!witness.empty()) {
    os << "; " << witness;
  }
  return {gap <= 1e-6 && strict, os.str()};
}

Outcome criterion5() {
  const auto cfg = fig1(1.0);
  const auto r = solve_equilibrium(cfg);
  const auto est = estimate_payoffs(r.profile, cfg, 100000, 7);
  double worst = 0.0;
  for (std::size_t p = 0; p < cfg.num_players(); ++p) {
    const double exact = semi_analytic_utility(r.profile, p, cfg);
    worst = std::max(worst, std::abs(est.players[p].mean - exact) / est.players[p].standard_error);
  }
  // Always-on single player, one lock: cost identity.
  const double beta = 1.3;
  const double horizon = 2.0;
  const double nu = 0.7;
  const auto solo = symmetric(1, beta, horizon, nu, {5.0});
  const auto solo_est = estimate_payoffs({MTStrategy{{horizon}}}, solo, 100000, 7);
  const double cost = nu * solo_est.players[0].mean_acceleration;
  const double cost_se = nu * solo_est.players[0].acceleration_standard_error;
  const double cost_z = std::abs(cost - nu * (1.0 - std::exp(-beta * horizon))) / cost_se;
  std::ostringstream os;
  os << "max payoff z = " << worst << " (limit 3); cost identity z = " << cost_z << " (limit 4)";
  return {worst <= 3.0 && cost_z <= 4.0, os.str()};
}

Outcome criterion6() {
  using oracle::SuiteCase;
  std::ostringstream os;
  bool ok = true;
  for (auto [which, n] : {std::pair{SuiteCase::kLemma3, 100}, std::pair{SuiteCase::kBangBang, 50},
                          std::pair{SuiteCase::kLemma1, 100}, std::pair{SuiteCase::kSuffix, 20}}) {
    const auto rows = oracle::run_suite(which, static_cast<std::size_t>(n), 42);
    const auto passed = std::count_if(rows.begin(), rows.end(), [](auto& r) { return r.passed; });
    ok = ok && passed == n;
    os << oracle::to_string(which) << " " << passed << "/" << n << "; ";
  }
  return {ok, os.str()};
}

Outcome criterion7() {
  double residual = 0.0;
  double worst_shift = 0.0;
  bool ok = true;
  // The last config has an interior theta_2.
  for (const auto& cfg : {fig1(1.0), fig2(1.0), fig2(1.5), symmetric(2, 1.0, 8.0, 1.0, {2, 0.5, 3})}) {
    const std::size_t coarse = kDefaultGridSize;
    const std::size_t fine = 2 * coarse - 1;
    const double spacing = cfg.horizon / static_cast<double>(coarse - 1);
    for (std::size_t p = 0; p < cfg.num_players(); ++p) {
      const auto a = backward_recursion(cfg, p, coarse);
      const auto b = backward_recursion(cfg, p, fine);
      residual = std::max(residual, quadrature_check(a, cfg, p, 400, 11));
      for (std::size_t k = 0; k < a.thresholds.size(); ++k) {
        const double shift = std::abs(a.thresholds[k] - b.thresholds[k]);
        worst_shift = std::max(worst_shift, shift / spacing);
        ok = ok && shift < spacing;
      }
    }
  }
  std::ostringstream os;
  os << "quadrature residual " << residual << " (limit 1e-6); max threshold shift "
     << worst_shift << " coarse spacings (limit 1)";
  return {ok && residual < 1e-6, os.str()};
}

}  // namespace

int main() {
  report(1, "Fig. 1 sweep matches the symmetric closed form", 10.0, criterion1);
  report(2, "Fig. 2 thresholds shut down from the last lock", 10.0, criterion2);
  report(3, "single-lock solver matches the exact formula", 0.0, criterion3);
  report(4, "Nash certification and derivative monotonicity", 0.0, criterion4);
  report(5, "Monte Carlo agrees with semi-analytic payoffs", 30.0, criterion5);
  report(6, "control-oracle structural properties", 60.0, criterion6);
  report(7, "recursion integrity and grid refinement", 0.0, criterion7);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

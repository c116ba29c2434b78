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

#include "lockrace/oracle_suite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lockrace/recursion.hpp"

namespace lockrace::oracle {

namespace {

constexpr std::size_t kBangBangSegments = 12;
constexpr double kIdentityTolerance = 1e-9;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

SuiteRow lemma3_instance(std::mt19937_64& rng, std::size_t instance) {
  const double horizon = uniform(rng, 1.0, 8.0);
  const double beta = uniform(rng, 0.5, 2.0);
  std::vector<double> h(101);
  for (double& v : h) {
    v = uniform(rng, 0.0, 5.0);
  }
  StageProblem problem{SampledFunction(0.0, horizon, std::move(h)), uniform(rng, 0.2, 2.0), 0.0,
                       horizon, beta};
  const auto control = random_control(rng, 0.0, horizon, beta, 10);
  const double x0 = uniform(rng, 0.0, 5.0);
  SuiteRow row{SuiteCase::kLemma3, instance, lemma3_residual(problem, control, x0), false, {}};
  row.passed = row.residual <= kIdentityTolerance;
  row.detail = "x0=" + std::to_string(x0);
  return row;
}

SuiteRow lemma1_instance(std::mt19937_64& rng, std::size_t instance) {
  const double horizon = uniform(rng, 1.0, 8.0);
  const double beta = uniform(rng, 0.5, 2.0);
  const auto control = random_control(rng, 0.0, horizon, beta, 10);
  const double decay = uniform(rng, 0.1, 3.0);
  const double stop = uniform(rng, 0.0, horizon);
  const auto eta = SampledFunction::sample(0.0, horizon, 201, [&](double t) {
    return std::exp(-decay * std::min(t, stop));
  });

  const auto shifted = mass_shift(control);
  const auto& moved = shifted.control;
  const double total = control.total();
  const double cost_identity = std::abs(expected_cost(control) - (1.0 - std::exp(-total)));
  const double cost_change = std::abs(expected_cost(moved) - expected_cost(control));
  const double success_loss =
      std::max(0.0, success_probability(control, eta) - success_probability(moved, eta));
  double cdf_loss = 0.0;
  for (std::size_t j = 0; j <= control.segments(); ++j) {
    const double t = control.boundary(j);
    cdf_loss = std::max(cdf_loss, std::exp(-moved.accumulated(t)) - std::exp(-control.accumulated(t)));
  }
  SuiteRow row{SuiteCase::kLemma1, instance, 0.0, false, {}};
  row.residual = std::max({cost_identity, cost_change, success_loss, cdf_loss});
  row.passed = cost_identity <= kIdentityTolerance && cost_change <= kIdentityTolerance &&
               success_loss <= 1e-12 && cdf_loss <= 1e-12;
  std::ostringstream os;
  os << "cost_change=" << cost_change << " success_loss=" << success_loss
     << (shifted.already_threshold ? " already_threshold" : "");
  row.detail = os.str();
  return row;
}

SuiteRow bangbang_instance(std::mt19937_64& rng, std::size_t instance) {
  const auto problem = random_decreasing_problem(rng);
  const auto best = exhaustive_bang_bang_best_response(problem, kBangBangSegments);
  const double width = (problem.horizon - problem.start) / kBangBangSegments;
  const double cut = problem.start + static_cast<double>(best.leading_ones) * width;
  const double root = threshold_root(problem.gain, 0.0, problem.cost_factor, problem.horizon);
  SuiteRow row{SuiteCase::kBangBang, instance, std::abs(cut - root) / width, false, {}};
  row.passed = best.is_threshold && row.residual <= 1.0;
  std::ostringstream os;
  os << "cut=" << cut << " root=" << root << (best.is_threshold ? "" : " not_threshold");
  row.detail = os.str();
  return row;
}

SuiteRow suffix_instance(std::mt19937_64& rng, std::size_t instance) {
  const auto problem = random_decreasing_problem(rng);
  const std::size_t segments = 10;
  const auto boundary = std::uniform_int_distribution<std::size_t>(1, segments - 1)(rng);
  const double tau = problem.start + (problem.horizon - problem.start) *
                                         static_cast<double>(boundary) /
                                         static_cast<double>(segments);
  const auto check = suffix_consistency_check(problem, tau, segments);
  SuiteRow row{SuiteCase::kSuffix, instance, check.discrepancy, false, {}};
  row.passed = check.differing_segments == 0 || (check.differing_segments == 1 && check.boundary_tie);
  row.detail = "tau=" + std::to_string(tau) + (check.boundary_tie ? " boundary_tie" : "");
  return row;
}

}  // namespace

SuiteCase parse_suite_case(const std::string& name) {
  if (name == "bangbang") return SuiteCase::kBangBang;
  if (name == "lemma1") return SuiteCase::kLemma1;
  if (name == "lemma3") return SuiteCase::kLemma3;
  if (name == "suffix") return SuiteCase::kSuffix;
  throw std::invalid_argument("unknown oracle case '" + name + "'");
}

std::string to_string(SuiteCase c) {
  switch (c) {
    case SuiteCase::kBangBang:
      return "bangbang";
    case SuiteCase::kLemma1:
      return "lemma1";
    case SuiteCase::kLemma3:
      return "lemma3";
    case SuiteCase::kSuffix:
      return "suffix";
  }
  return "unknown";
}

StageProblem random_decreasing_problem(std::mt19937_64& rng) {
  const double horizon = uniform(rng, 2.0, 8.0);
  const double nu = uniform(rng, 0.5, 2.0);
  const double crossing = uniform(rng, 0.15, 0.85) * horizon;
  const double slope = uniform(rng, 0.3, 2.0);
  auto gain = SampledFunction::sample(0.0, horizon, 121, [&](double t) {
    return nu * std::exp(slope * (crossing - t));
  });
  return StageProblem{std::move(gain), nu, 0.0, horizon, uniform(rng, 0.5, 2.0)};
}

PiecewiseConstantControl random_control(std::mt19937_64& rng, double start, double end,
                                        double rate_bound, std::size_t segments) {
  std::vector<double> values(segments);
  for (double& v : values) {
    // A third of the segments sit at the extremes.
    const double u = uniform(rng, 0.0, 1.0);
    v = u < 1.0 / 6.0 ? 0.0 : u > 5.0 / 6.0 ? rate_bound : uniform(rng, 0.0, rate_bound);
  }
  return PiecewiseConstantControl(start, end, rate_bound, std::move(values));
}

std::vector<SuiteRow> run_suite(SuiteCase which, std::size_t instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SuiteRow> rows;
  rows.reserve(instances);
  for (std::size_t i = 0; i < instances; ++i) {
    switch (which) {
      case SuiteCase::kLemma3:
        rows.push_back(lemma3_instance(rng, i));
        break;
      case SuiteCase::kLemma1:
        rows.push_back(lemma1_instance(rng, i));
        break;
      case SuiteCase::kBangBang:
        rows.push_back(bangbang_instance(rng, i));
        break;
      case SuiteCase::kSuffix:
        rows.push_back(suffix_instance(rng, i));
        break;
    }
  }
  return rows;
}

}  // namespace lockrace::oracle

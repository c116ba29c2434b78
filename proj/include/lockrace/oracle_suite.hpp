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
#include <random>
#include <string>
#include <vector>

#include "lockrace/oracle.hpp"

namespace lockrace::oracle {

/// Randomized structural checks over generated stage problems and controls.
enum class SuiteCase { kBangBang, kLemma1, kLemma3, kSuffix };

SuiteCase parse_suite_case(const std::string& name);
std::string to_string(SuiteCase c);

struct SuiteRow {
  SuiteCase which = SuiteCase::kLemma3;
  std::size_t instance = 0;
  double residual = 0.0;  // case-specific violation measure
  bool passed = false;
  std::string detail;
};

/// kLemma3: |J(x0) - exp(-x0)(J(0) - nu x0)| <= 1e-9.
/// kLemma1: mass_shift preserves expected cost (1e-9) and the cost
///   identity, weakly raises success probability for a non-increasing eta
///   and the contact-time CDF at every segment boundary.
/// kBangBang: 12-segment maximizer is prefix-of-ones for a strictly
///   decreasing gain, with its cut within one segment of threshold_root.
/// kSuffix: suffix best response agrees with the full one (a single
///   boundary-tie segment allowed).
std::vector<SuiteRow> run_suite(SuiteCase which, std::size_t instances, std::uint64_t seed);

/// Generators shared with the tests.
StageProblem random_decreasing_problem(std::mt19937_64& rng);
PiecewiseConstantControl random_control(std::mt19937_64& rng, double start, double end,
                                        double rate_bound, std::size_t segments);

}  // namespace lockrace::oracle

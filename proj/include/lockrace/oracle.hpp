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
#include <vector>

#include "lockrace/control.hpp"
#include "lockrace/sampled_function.hpp"

namespace lockrace::oracle {

// Single-stage open-loop control problems on a segmented time axis. All
// integrals use 8-point Gauss-Legendre panels split at every control segment
// boundary and every knot of the sampled functions, so each panel integrand
// is smooth.

/// One stage of the dynamic program: gain h(t) (reward plus continuation,
/// times the opponent-failure probability), cost factor, and time window.
struct StageProblem {
  SampledFunction gain;
  double cost_factor = 1.0;
  double start = 0.0;
  double horizon = 1.0;
  double rate_bound = 1.0;
};

inline double accumulated(const PiecewiseConstantControl& control, double t) {
  return control.accumulated(t);
}

/// int eta(t) exp(-A(t)) a(t) dt over the control interval.
double success_probability(const PiecewiseConstantControl& control, const SampledFunction& eta);

/// Expected accumulated acceleration up to the contact or the horizon:
/// A(T) exp(-A(T)) + int A(t) exp(-A(t)) a(t) dt.
double expected_cost(const PiecewiseConstantControl& control);

/// J(s, x0, a) = int (h(t) - nu x(t)) a(t) exp(-x(t)) dt - nu x(T) exp(-x(T)),
/// with x(t) = x0 + A(t).
double stage_objective(const StageProblem& problem, const PiecewiseConstantControl& control,
                       double x0);

/// |J(s, x0, a) - exp(-x0) (J(s, 0, a) - nu x0)|.
double lemma3_residual(const StageProblem& problem, const PiecewiseConstantControl& control,
                       double x0);

struct MassShift {
  PiecewiseConstantControl control;
  bool already_threshold = false;
};

/// Moves mass from the last non-empty segment after the first non-full one
/// into that first non-full segment, preserving the total and never
/// decreasing the accumulated rate.
MassShift mass_shift(const PiecewiseConstantControl& control);

/// Repeats mass_shift until the control is threshold shaped.
PiecewiseConstantControl threshold_rearrangement(const PiecewiseConstantControl& control);

inline constexpr std::size_t kMaxEnumeratedSegments = 14;

struct BangBangResult {
  PiecewiseConstantControl control;
  double objective = 0.0;
  bool is_threshold = false;
  unsigned pattern = 0;
  std::size_t leading_ones = 0;
};

/// Maximizes stage_objective (x0 = 0) over every {0, rate_bound}-valued
/// control on `segments` uniform segments. Ties go to the most front-loaded
/// pattern. Throws std::invalid_argument when segments > 14.
BangBangResult exhaustive_bang_bang_best_response(const StageProblem& problem,
                                                  std::size_t segments);

struct SuffixCheck {
  double discrepancy = 0.0;  // fraction of suffix segments that differ
  std::size_t differing_segments = 0;
  bool boundary_tie = false;  // the only difference sits at a cut segment
};

/// Compares the exhaustive best response started at problem.start with the
/// one started at `tau` on [tau, horizon]. `tau` must sit on a segment
/// boundary.
SuffixCheck suffix_consistency_check(const StageProblem& problem, double tau,
                                     std::size_t segments);

}  // namespace lockrace::oracle

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

#include "lockrace/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lockrace/quadrature.hpp"

namespace lockrace::oracle {

namespace {

std::vector<double> control_panels(const PiecewiseConstantControl& control,
                                   const SampledFunction* knots) {
  std::vector<double> bounds;
  for (std::size_t j = 1; j < control.segments(); ++j) {
    bounds.push_back(control.boundary(j));
  }
  return quad::panels(control.start(), control.end(), knots, bounds);
}

// Rate on the panel containing t. Panels never straddle a segment boundary,
// so the midpoint rule picks the right segment even at panel ends.
template <class F>
double integrate_over_control(const PiecewiseConstantControl& control,
                              const SampledFunction* knots, F&& integrand) {
  const auto pts = control_panels(control, knots);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
    const double a = pts[p];
    const double b = pts[p + 1];
    const double rate = control.rate_at(0.5 * (a + b));
    if (rate == 0.0) {
      continue;
    }
    // Accumulated rate is linear on the panel.
    const double base = control.accumulated(a);
    total += quad::gauss_legendre(
        [&](double t) { return integrand(t, rate, base + rate * (t - a)); },
        std::vector<double>{a, b});
  }
  return total;
}

}  // namespace

double success_probability(const PiecewiseConstantControl& control, const SampledFunction& eta) {
  return integrate_over_control(control, &eta, [&](double t, double rate, double acc) {
    return eta(t) * std::exp(-acc) * rate;
  });
}

double expected_cost(const PiecewiseConstantControl& control) {
  const double total = control.total();
  const double running = integrate_over_control(
      control, nullptr,
      [](double, double rate, double acc) { return acc * std::exp(-acc) * rate; });
  return total * std::exp(-total) + running;
}

double stage_objective(const StageProblem& problem, const PiecewiseConstantControl& control,
                       double x0) {
  const double nu = problem.cost_factor;
  const double running = integrate_over_control(
      control, &problem.gain, [&](double t, double rate, double acc) {
        const double x = x0 + acc;
        return (problem.gain(t) - nu * x) * rate * std::exp(-x);
      });
  const double terminal = x0 + control.total();
  return running - nu * terminal * std::exp(-terminal);
}

double lemma3_residual(const StageProblem& problem, const PiecewiseConstantControl& control,
                       double x0) {
  const double shifted = stage_objective(problem, control, x0);
  const double base = stage_objective(problem, control, 0.0);
  return std::abs(shifted - std::exp(-x0) * (base - problem.cost_factor * x0));
}

MassShift mass_shift(const PiecewiseConstantControl& control) {
  if (control.is_threshold_shaped()) {
    return {control, true};
  }
  constexpr double tol = 1e-12;
  const double bound = control.rate_bound();
  std::vector<double> values(control.values().begin(), control.values().end());
  std::size_t early = 0;
  while (values[early] >= bound - tol) {
    ++early;
  }
  std::size_t late = values.size() - 1;
  while (late > early && values[late] <= tol) {
    --late;
  }
  // Not threshold shaped, so a non-empty segment exists past `early`.
  const double moved = std::min(bound - values[early], values[late]);
  values[early] += moved;
  values[late] -= moved;
  if (values[early] > bound - tol) {
    values[early] = bound;
  }
  if (values[late] < tol) {
    values[late] = 0.0;
  }
  return {PiecewiseConstantControl(control.start(), control.end(), bound, std::move(values)),
          false};
}

PiecewiseConstantControl threshold_rearrangement(const PiecewiseConstantControl& control) {
  PiecewiseConstantControl current = control;
  // Each shift fills a segment or empties one.
  for (std::size_t step = 0; step <= 2 * control.segments(); ++step) {
    auto shifted = mass_shift(current);
    if (shifted.already_threshold) {
      return current;
    }
    current = std::move(shifted.control);
  }
  return current;
}

BangBangResult exhaustive_bang_bang_best_response(const StageProblem& problem,
                                                  std::size_t segments) {
  if (segments == 0 || segments > kMaxEnumeratedSegments) {
    throw std::invalid_argument("exhaustive search supports 1.." +
                                std::to_string(kMaxEnumeratedSegments) + " segments, got " +
                                std::to_string(segments));
  }
  const unsigned count = 1U << segments;
  // Descending patterns visit front-loaded controls first; only a strict
  // improvement replaces the incumbent.
  unsigned best_pattern = count - 1;
  double best = stage_objective(
      problem,
      PiecewiseConstantControl::bang_bang(problem.start, problem.horizon, problem.rate_bound,
                                          segments, best_pattern),
      0.0);
  for (unsigned pattern = count - 1; pattern-- > 0;) {
    const double value = stage_objective(
        problem,
        PiecewiseConstantControl::bang_bang(problem.start, problem.horizon,
                                            problem.rate_bound, segments, pattern),
        0.0);
    if (value > best + 1e-12) {
      best = value;
      best_pattern = pattern;
    }
  }
  auto control = PiecewiseConstantControl::bang_bang(problem.start, problem.horizon,
                                                     problem.rate_bound, segments, best_pattern);
  std::size_t ones = 0;
  while (ones < segments && control.value(ones) > 0.0) {
    ++ones;
  }
  const bool is_threshold = control.is_threshold_shaped();
  return {std::move(control), best, is_threshold, best_pattern, ones};
}

SuffixCheck suffix_consistency_check(const StageProblem& problem, double tau,
                                     std::size_t segments) {
  const double width = (problem.horizon - problem.start) / static_cast<double>(segments);
  const double offset = (tau - problem.start) / width;
  const auto skipped = static_cast<std::size_t>(std::llround(offset));
  if (!(tau > problem.start && tau < problem.horizon) ||
      std::abs(offset - static_cast<double>(skipped)) > 1e-9) {
    throw std::invalid_argument("suffix start " + std::to_string(tau) +
                                " is not an interior segment boundary");
  }
  const auto full = exhaustive_bang_bang_best_response(problem, segments);
  StageProblem suffix = problem;
  suffix.start = tau;
  const std::size_t remaining = segments - skipped;
  const auto tail = exhaustive_bang_bang_best_response(suffix, remaining);

  SuffixCheck out;
  std::vector<std::size_t> differing;
  for (std::size_t j = 0; j < remaining; ++j) {
    if (full.control.value(skipped + j) != tail.control.value(j)) {
      differing.push_back(j);
    }
  }
  out.differing_segments = differing.size();
  out.discrepancy = static_cast<double>(differing.size()) / static_cast<double>(remaining);
  if (differing.size() == 1) {
    // A tie can only move the cut by one segment.
    const std::size_t j = differing.front();
    const std::size_t full_cut = full.leading_ones > skipped ? full.leading_ones - skipped : 0;
    const std::size_t tail_cut = tail.leading_ones;
    out.boundary_tie = j + 1 == std::max(full_cut, tail_cut) || j == std::min(full_cut, tail_cut);
  }
  return out;
}

}  // namespace lockrace::oracle

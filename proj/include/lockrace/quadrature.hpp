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

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "lockrace/sampled_function.hpp"

namespace lockrace::quad {

/// Sorted, de-duplicated breakpoints covering [a, b]: the endpoints, every
/// grid abscissa of `grid` strictly inside, and each `extra` point inside.
inline std::vector<double> panels(double a, double b, const SampledFunction* grid,
                                  const std::vector<double>& extra = {}) {
  std::vector<double> pts{a, b};
  if (grid != nullptr && b > a) {
    const double lo = std::max(a, grid->lo());
    const double hi = std::min(b, grid->hi());
    if (hi > lo) {
      for (std::size_t j = grid->interval(lo); j < grid->size(); ++j) {
        const double x = grid->abscissa(j);
        if (x >= hi) {
          break;
        }
        if (x > a) {
          pts.push_back(x);
        }
      }
    }
  }
  for (double x : extra) {
    if (x > a && x < b) {
      pts.push_back(x);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// Composite Simpson: one parabola per panel.
template <class F>
double simpson(F&& f, const std::vector<double>& breakpoints) {
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double a = breakpoints[p];
    const double b = breakpoints[p + 1];
    if (b <= a) {
      continue;
    }
    total += (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
  }
  return total;
}

/// 8-point Gauss-Legendre per panel.
template <class F>
double gauss_legendre(F&& f, const std::vector<double>& breakpoints) {
  static constexpr std::array<double, 4> x{0.1834346424956498, 0.5255324099163290,
                                           0.7966664774136267, 0.9602898564975363};
  static constexpr std::array<double, 4> w{0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double a = breakpoints[p];
    const double b = breakpoints[p + 1];
    if (b <= a) {
      continue;
    }
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t q = 0; q < x.size(); ++q) {
      s += w[q] * (f(mid - half * x[q]) + f(mid + half * x[q]));
    }
    total += half * s;
  }
  return total;
}

}  // namespace lockrace::quad

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
#include <functional>
#include <span>
#include <vector>

namespace lockrace {

/// Default number of abscissae for every time-grid carrier.
inline constexpr std::size_t kDefaultGridSize = 2001;

/// A real function stored on a uniform grid over [lo, hi] and evaluated by
/// linear interpolation. Linear (rather than spline) interpolation keeps
/// monotone data monotone, which the threshold root-finders depend on.
class SampledFunction {
 public:
  SampledFunction(double lo, double hi, std::vector<double> values);

  /// Samples `f` at `grid_size` uniformly spaced abscissae of [lo, hi].
  static SampledFunction sample(double lo, double hi, std::size_t grid_size,
                                const std::function<double(double)>& f);
  static SampledFunction zeros(double lo, double hi, std::size_t grid_size);

  /// Linear interpolation; throws std::out_of_range outside [lo, hi].
  double operator()(double t) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t size() const { return values_.size(); }
  double spacing() const { return spacing_; }

  /// Abscissa j; the last one is exactly hi.
  double abscissa(std::size_t j) const;
  /// Index of the grid interval [t_j, t_{j+1}] containing t (clamped).
  std::size_t interval(double t) const;

  std::span<const double> values() const { return values_; }
  double value(std::size_t j) const { return values_[j]; }
  void set_value(std::size_t j, double v) { values_[j] = v; }

 private:
  double lo_;
  double hi_;
  double spacing_;
  std::vector<double> values_;
};

}  // namespace lockrace

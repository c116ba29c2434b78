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
#include <optional>
#include <span>
#include <vector>

namespace lockrace {

/// Open-loop contact-rate function on [start, end]: constant on each of a
/// uniform set of segments, each value within [0, rate_bound]. The
/// accumulated rate is piecewise linear and evaluated exactly.
class PiecewiseConstantControl {
 public:
  PiecewiseConstantControl(double start, double end, double rate_bound,
                           std::vector<double> values);

  /// Full rate up to `threshold`, zero after; the segment containing the
  /// threshold carries the fractional mass.
  static PiecewiseConstantControl threshold(double start, double end, double rate_bound,
                                            std::size_t segments, double threshold);
  /// Segment j is on (rate_bound) iff bit (segments - 1 - j) of `pattern`
  /// is set, so segment 0 is the most significant bit.
  static PiecewiseConstantControl bang_bang(double start, double end, double rate_bound,
                                            std::size_t segments, unsigned pattern);

  double start() const { return start_; }
  double end() const { return end_; }
  double rate_bound() const { return rate_bound_; }
  std::size_t segments() const { return values_.size(); }
  double segment_width() const { return width_; }
  double boundary(std::size_t j) const;
  std::span<const double> values() const { return values_; }
  double value(std::size_t j) const { return values_[j]; }

  double rate_at(double t) const;
  /// Integral of the rate over [start, t]; throws outside [start, end].
  double accumulated(double t) const;
  double total() const { return accumulated(end_); }

  /// Contact epoch for a unit-exponential draw: the first t with
  /// accumulated(t) >= draw, or nullopt if the total mass is smaller.
  std::optional<double> contact_time(double unit_exponential) const;

  /// Full-rate prefix, at most one partial segment, zeros afterwards.
  bool is_threshold_shaped(double tol = 1e-12) const;

 private:
  double start_;
  double end_;
  double rate_bound_;
  double width_;
  std::vector<double> values_;
};

}  // namespace lockrace

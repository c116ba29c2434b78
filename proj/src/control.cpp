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

#include "lockrace/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lockrace {

PiecewiseConstantControl::PiecewiseConstantControl(double start, double end, double rate_bound,
                                                   std::vector<double> values)
    : start_(start), end_(end), rate_bound_(rate_bound), values_(std::move(values)) {
  if (!(end > start)) {
    throw std::invalid_argument("control interval must satisfy start < end");
  }
  if (!(rate_bound > 0.0)) {
    throw std::invalid_argument("control rate bound must be positive");
  }
  if (values_.empty()) {
    throw std::invalid_argument("control needs at least one segment");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= rate_bound)) {
      throw std::invalid_argument("control value " + std::to_string(v) + " outside [0, " +
                                  std::to_string(rate_bound) + "]");
    }
  }
  width_ = (end_ - start_) / static_cast<double>(values_.size());
}

PiecewiseConstantControl PiecewiseConstantControl::threshold(double start, double end,
                                                             double rate_bound,
                                                             std::size_t segments,
                                                             double threshold) {
  std::vector<double> values(segments, 0.0);
  const double width = (end - start) / static_cast<double>(segments);
  for (std::size_t j = 0; j < segments; ++j) {
    const double a = start + static_cast<double>(j) * width;
    const double covered = std::clamp(threshold - a, 0.0, width);
    values[j] = rate_bound * covered / width;
  }
  return PiecewiseConstantControl(start, end, rate_bound, std::move(values));
}

PiecewiseConstantControl PiecewiseConstantControl::bang_bang(double start, double end,
                                                             double rate_bound,
                                                             std::size_t segments,
                                                             unsigned pattern) {
  std::vector<double> values(segments, 0.0);
  for (std::size_t j = 0; j < segments; ++j) {
    if ((pattern >> (segments - 1 - j)) & 1U) {
      values[j] = rate_bound;
    }
  }
  return PiecewiseConstantControl(start, end, rate_bound, std::move(values));
}

double PiecewiseConstantControl::boundary(std::size_t j) const {
  return j >= values_.size() ? end_ : start_ + static_cast<double>(j) * width_;
}

double PiecewiseConstantControl::rate_at(double t) const {
  if (t < start_ || t > end_) {
    return 0.0;
  }
  const auto j = std::min(static_cast<std::size_t>((t - start_) / width_), values_.size() - 1);
  return values_[j];
}

double PiecewiseConstantControl::accumulated(double t) const {
  if (!(t >= start_ - 1e-12 && t <= end_ + 1e-12)) {
    throw std::out_of_range("accumulated: t=" + std::to_string(t) + " outside control interval");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < values_.size(); ++j) {
    const double a = boundary(j);
    const double b = boundary(j + 1);
    if (t <= a) {
      break;
    }
    total += values_[j] * (std::min(t, b) - a);
  }
  return total;
}

std::optional<double> PiecewiseConstantControl::contact_time(double unit_exponential) const {
  double mass = 0.0;
  for (std::size_t j = 0; j < values_.size(); ++j) {
    const double seg = values_[j] * width_;
    if (values_[j] > 0.0 && mass + seg >= unit_exponential) {
      return std::min(boundary(j) + (unit_exponential - mass) / values_[j], boundary(j + 1));
    }
    mass += seg;
  }
  return std::nullopt;
}

bool PiecewiseConstantControl::is_threshold_shaped(double tol) const {
  std::size_t j = 0;
  while (j < values_.size() && values_[j] >= rate_bound_ - tol) {
    ++j;
  }
  // One partial segment allowed, then zeros.
  if (j < values_.size()) {
    ++j;
  }
  for (; j < values_.size(); ++j) {
    if (values_[j] > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace lockrace

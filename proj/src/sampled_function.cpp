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

#include "lockrace/sampled_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lockrace {

SampledFunction::SampledFunction(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
  if (values_.size() < 2) {
    throw std::invalid_argument("SampledFunction needs at least 2 grid points");
  }
  if (!(hi > lo)) {
    throw std::invalid_argument("SampledFunction domain must satisfy lo < hi");
  }
  spacing_ = (hi_ - lo_) / static_cast<double>(values_.size() - 1);
}

SampledFunction SampledFunction::sample(double lo, double hi, std::size_t grid_size,
                                        const std::function<double(double)>& f) {
  if (grid_size < 2) {
    throw std::invalid_argument("grid_size must be at least 2");
  }
  std::vector<double> values(grid_size);
  SampledFunction out(lo, hi, std::vector<double>(grid_size, 0.0));
  for (std::size_t j = 0; j < grid_size; ++j) {
    values[j] = f(out.abscissa(j));
  }
  out.values_ = std::move(values);
  return out;
}

SampledFunction SampledFunction::zeros(double lo, double hi, std::size_t grid_size) {
  if (grid_size < 2) {
    throw std::invalid_argument("grid_size must be at least 2");
  }
  return SampledFunction(lo, hi, std::vector<double>(grid_size, 0.0));
}

double SampledFunction::abscissa(std::size_t j) const {
  if (j + 1 >= values_.size()) {
    return hi_;
  }
  return lo_ + static_cast<double>(j) * spacing_;
}

std::size_t SampledFunction::interval(double t) const {
  const double pos = (t - lo_) / spacing_;
  if (pos <= 0.0) {
    return 0;
  }
  const auto j = static_cast<std::size_t>(std::floor(pos));
  return std::min(j, values_.size() - 2);
}

double SampledFunction::operator()(double t) const {
  // Allow round-off slop at the endpoints only.
  const double slop = 1e-12 * std::max(1.0, std::abs(hi_ - lo_));
  if (!(t >= lo_ - slop && t <= hi_ + slop)) {
    throw std::out_of_range("SampledFunction evaluated at t=" + std::to_string(t) +
                            " outside [" + std::to_string(lo_) + ", " +
                            std::to_string(hi_) + "]");
  }
  if (t <= lo_) {
    return values_.front();
  }
  if (t >= hi_) {
    return values_.back();
  }
  // Grid abscissae return their stored value bit-for-bit.
  const auto nearest = static_cast<std::size_t>(std::nearbyint((t - lo_) / spacing_));
  if (nearest < values_.size() && abscissa(nearest) == t) {
    return values_[nearest];
  }
  const std::size_t j = interval(t);
  const double t0 = abscissa(j);
  const double t1 = abscissa(j + 1);
  const double w = (t - t0) / (t1 - t0);
  if (w <= 0.0) {
    return values_[j];
  }
  return values_[j] + w * (values_[j + 1] - values_[j]);
}

}  // namespace lockrace

/*
Copyright 2026 The Sphalign Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef SPHALIGN_SIGNAL_HPP_
#define SPHALIGN_SIGNAL_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sphalign/grid.hpp"

namespace sphalign {

/// K-channel real-valued function sampled on a SphericalGrid.
/// Storage is channel-major: value(k, i, j) at k*N*N + i*N + j.
class SphericalSignal {
 public:
  SphericalSignal(SphericalGrid grid, std::size_t channels)
      : grid_(std::move(grid)),
        channels_(channels),
        values_(channels * grid_.resolution() * grid_.resolution(), 0.0) {
    if (channels == 0) {
      throw std::invalid_argument("SphericalSignal: channels must be positive");
    }
  }

  const SphericalGrid& grid() const { return grid_; }
  std::size_t channels() const { return channels_; }
  std::size_t resolution() const { return grid_.resolution(); }

  double& at(std::size_t k, std::size_t i, std::size_t j) {
    const std::size_t n = grid_.resolution();
    return values_[(k * n + i) * n + j];
  }
  double at(std::size_t k, std::size_t i, std::size_t j) const {
    const std::size_t n = grid_.resolution();
    return values_[(k * n + i) * n + j];
  }

  double* channel(std::size_t k) {
    const std::size_t n = grid_.resolution();
    return values_.data() + k * n * n;
  }
  const double* channel(std::size_t k) const {
    const std::size_t n = grid_.resolution();
    return values_.data() + k * n * n;
  }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  SphericalGrid grid_;
  std::size_t channels_;
  std::vector<double> values_;
};

}  // namespace sphalign

#endif  // SPHALIGN_SIGNAL_HPP_

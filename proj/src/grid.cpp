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

#include "sphalign/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sphalign {

namespace {
constexpr double kPi = std::numbers::pi;
}

SphericalGrid::SphericalGrid(std::size_t bandwidth) : bandwidth_(bandwidth) {
  if (bandwidth == 0) {
    throw std::invalid_argument("SphericalGrid: bandwidth must be positive");
  }
  const std::size_t n = 2 * bandwidth;
  theta_.resize(n);
  phi_.resize(n);
  weight_.resize(n);
  theta_sin_.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    theta_[i] = kPi * (2.0 * static_cast<double>(i) + 1.0) /
                (2.0 * static_cast<double>(n));
    theta_sin_[i] = std::sin(theta_[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    phi_[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
  }

  // Exact quadrature weights for the half-cell-offset equiangular grid
  // (Driscoll--Healy style; the s2kit variant for theta = pi(2i+1)/(2N)):
  //   w_i = (2/B) sin(theta_i) sum_{k<B} sin((2k+1) theta_i) / (2k+1)
  const double inv_b = 1.0 / static_cast<double>(bandwidth);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < bandwidth; ++k) {
      const double odd = 2.0 * static_cast<double>(k) + 1.0;
      s += std::sin(odd * theta_[i]) / odd;
    }
    weight_[i] = 2.0 * inv_b * theta_sin_[i] * s;
  }
}

Direction SphericalGrid::direction_of(std::size_t i, std::size_t j) const {
  const std::size_t n = resolution();
  if (i >= n || j >= n) {
    throw std::invalid_argument("direction_of: index out of range");
  }
  const double st = std::sin(theta_[i]);
  return Direction(Vec3{st * std::cos(phi_[j]), st * std::sin(phi_[j]),
                        std::cos(theta_[i])});
}

double SphericalGrid::cell_area(std::size_t i) const {
  return weight_[i] * 2.0 * kPi / static_cast<double>(resolution());
}

}  // namespace sphalign

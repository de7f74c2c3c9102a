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

#ifndef SPHALIGN_GRID_HPP_
#define SPHALIGN_GRID_HPP_

#include <cstddef>
#include <vector>

#include "sphalign/geom.hpp"

namespace sphalign {

/// Unit direction on S^2.
struct Direction {
  Vec3 v;
  explicit Direction(const Vec3& u) : v(u.normalized()) {}
};

/// Equiangular N x N sphere grid, N = 2B, with colatitudes offset by half a
/// cell so no sample falls on a pole. Quadrature weights make the forward
/// spherical harmonic transform exact for signals bandlimited below B.
///
/// theta_i = pi*(2i+1)/(2N), phi_j = 2*pi*j/N.
class SphericalGrid {
 public:
  /// Throws std::invalid_argument if bandwidth == 0.
  explicit SphericalGrid(std::size_t bandwidth);

  std::size_t bandwidth() const { return bandwidth_; }
  std::size_t resolution() const { return 2 * bandwidth_; }

  double colatitude(std::size_t i) const { return theta_[i]; }
  double azimuth(std::size_t j) const { return phi_[j]; }

  /// Quadrature weight of colatitude row i. Together with the uniform
  /// azimuthal weight 2*pi/N these integrate degree-(2B-1) Legendre
  /// polynomials exactly: sum_i w_i P_l(cos theta_i) = 2*delta_{l0}.
  double quad_weight(std::size_t i) const { return weight_[i]; }

  /// Plain sin(theta_i) row weight (sample-area proxy used by the
  /// embedding loss, distinct from the exact quadrature weights).
  double sin_weight(std::size_t i) const { return theta_sin_[i]; }

  const std::vector<double>& colatitudes() const { return theta_; }
  const std::vector<double>& azimuths() const { return phi_; }
  const std::vector<double>& quad_weights() const { return weight_; }

  /// Unit vector of cell (i, j); throws on out-of-range indices.
  Direction direction_of(std::size_t i, std::size_t j) const;

  /// Cell area element w_i * 2*pi/N for row i.
  double cell_area(std::size_t i) const;

  bool operator==(const SphericalGrid& o) const {
    return bandwidth_ == o.bandwidth_;
  }

 private:
  std::size_t bandwidth_;
  std::vector<double> theta_;
  std::vector<double> phi_;
  std::vector<double> weight_;
  std::vector<double> theta_sin_;
};

inline SphericalGrid make_grid(std::size_t bandwidth) {
  return SphericalGrid(bandwidth);
}

}  // namespace sphalign

#endif  // SPHALIGN_GRID_HPP_

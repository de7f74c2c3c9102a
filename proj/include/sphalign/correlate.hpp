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

#ifndef SPHALIGN_CORRELATE_HPP_
#define SPHALIGN_CORRELATE_HPP_

#include <cstddef>
#include <vector>

#include "sphalign/rotation.hpp"
#include "sphalign/sample.hpp"
#include "sphalign/sht.hpp"

namespace sphalign {

/// Cross-correlation G(R) = sum_k <f1_k, Lambda_R f2_k> sampled on a
/// (2B)^3 ZYZ Euler grid: alpha, gamma uniform on [0, 2*pi), beta
/// pole-avoiding uniform on (0, pi). Layout: (beta_b, alpha_a, gamma_c)
/// at index (b * M + a) * M + c with M = 2B.
class CorrelationVolume {
 public:
  explicit CorrelationVolume(std::size_t bandwidth)
      : bandwidth_(bandwidth),
        values_(8 * bandwidth * bandwidth * bandwidth, 0.0) {}

  std::size_t bandwidth() const { return bandwidth_; }
  std::size_t samples_per_axis() const { return 2 * bandwidth_; }

  double alpha(std::size_t a) const;
  double beta(std::size_t b) const;
  double gamma(std::size_t c) const;

  double& at(std::size_t a, std::size_t b, std::size_t c) {
    const std::size_t m = samples_per_axis();
    return values_[(b * m + a) * m + c];
  }
  double at(std::size_t a, std::size_t b, std::size_t c) const {
    const std::size_t m = samples_per_axis();
    return values_[(b * m + a) * m + c];
  }

  EulerZYZ euler_of(std::size_t a, std::size_t b, std::size_t c) const {
    return {alpha(a), beta(b), gamma(c)};
  }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t bandwidth_;
  std::vector<double> values_;
};

/// Spectral evaluation of the correlation volume. Inputs must share grid
/// and channel count.
CorrelationVolume correlate(const SphericalSignal& f1,
                            const SphericalSignal& f2);

struct ArgmaxResult {
  Rotation rotation;
  EulerZYZ euler;
  double peak = 0.0;
  std::size_t a = 0, b = 0, c = 0;
  /// Set when the near-peak set is not angularly localized (symmetric
  /// inputs) or the volume is constant.
  bool degenerate = false;
};

/// Maximal cell of the volume; ties broken by smallest linear index.
ArgmaxResult argmax_rotation(const CorrelationVolume& g);

struct PoseEstimate {
  Rotation rotation;
  double peak = 0.0;
  bool degenerate = false;
};

/// Full pipeline: upsample -> correlate -> argmax -> optional separable
/// quadratic peak refinement. Returns the rotation taking f1 onto f2,
/// i.e. f2 ~ Lambda_R f1 for planted pairs.
PoseEstimate estimate_relative_pose(const SphericalSignal& f1,
                                    const SphericalSignal& f2,
                                    std::size_t upsample_factor = 1,
                                    bool refine = true);

/// Mesh-target entry points; same pipeline with mesh-derived signals.
PoseEstimate align_mesh_pair(const SphericalSignal& f,
                             const SphericalSignal& m,
                             std::size_t upsample_factor = 1,
                             bool refine = true);
PoseEstimate align_map_to_mesh(const SphericalSignal& f,
                               const SphericalSignal& m,
                               std::size_t upsample_factor = 1,
                               bool refine = true);

}  // namespace sphalign

#endif  // SPHALIGN_CORRELATE_HPP_

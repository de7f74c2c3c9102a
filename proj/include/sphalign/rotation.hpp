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

#ifndef SPHALIGN_ROTATION_HPP_
#define SPHALIGN_ROTATION_HPP_

#include <cstdint>
#include <random>

#include "sphalign/geom.hpp"

namespace sphalign {

/// ZYZ Euler angles, active convention: R = Rz(alpha) * Ry(beta) * Rz(gamma),
/// alpha, gamma in [0, 2*pi), beta in [0, pi].
struct EulerZYZ {
  double alpha = 0, beta = 0, gamma = 0;
};

/// Element of SO(3).
class Rotation {
 public:
  Rotation() = default;

  static Rotation from_matrix(const Mat3& m) { return Rotation(m); }
  static Rotation from_euler(double alpha, double beta, double gamma);
  static Rotation from_euler(const EulerZYZ& e) {
    return from_euler(e.alpha, e.beta, e.gamma);
  }
  /// Unit quaternion (w, x, y, z); normalized internally.
  static Rotation from_quaternion(double w, double x, double y, double z);

  static Rotation identity() { return Rotation(); }

  const Mat3& matrix() const { return m_; }
  EulerZYZ euler() const;

  Rotation operator*(const Rotation& o) const { return Rotation(m_ * o.m_); }
  Rotation inverse() const { return Rotation(m_.transposed()); }
  Vec3 apply(const Vec3& v) const { return m_ * v; }

  /// Max deviation from orthonormality (entries of R R^T - I).
  double orthonormality_residual() const;

 private:
  explicit Rotation(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

Rotation euler_to_matrix(double alpha, double beta, double gamma);

/// arccos((tr(R2^T R1) - 1) / 2), in [0, pi]. Throws if the trace argument
/// falls outside [-1 - 1e-9, 1 + 1e-9]; inside, clamps silently.
double geodesic_distance(const Rotation& r1, const Rotation& r2);

/// arccos((tr(R2^T R1 R_est) - 1) / 2), clamped as above.
double relative_pose_error(const Rotation& r1_gt, const Rotation& r2_gt,
                           const Rotation& r_est);

/// Haar-uniform sample via uniform unit quaternion; deterministic per seed.
Rotation random_rotation(std::uint64_t seed);

/// Haar-uniform sample drawing from an existing generator.
Rotation random_rotation(std::mt19937_64& rng);

}  // namespace sphalign

#endif  // SPHALIGN_ROTATION_HPP_

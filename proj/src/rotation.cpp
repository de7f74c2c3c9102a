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

#include "sphalign/rotation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sphalign {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_2pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0) a += 2.0 * kPi;
  return a;
}

// Clamp the arccos argument; reject values clearly outside [-1, 1].
double safe_acos(double t) {
  if (t > 1.0 + 1e-9 || t < -1.0 - 1e-9) {
    throw std::invalid_argument("rotation angle: trace argument out of range");
  }
  return std::acos(std::min(1.0, std::max(-1.0, t)));
}

}  // namespace

Rotation Rotation::from_euler(double alpha, double beta, double gamma) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  const double cg = std::cos(gamma), sg = std::sin(gamma);
  Mat3 m;
  m(0, 0) = ca * cb * cg - sa * sg;
  m(0, 1) = -ca * cb * sg - sa * cg;
  m(0, 2) = ca * sb;
  m(1, 0) = sa * cb * cg + ca * sg;
  m(1, 1) = -sa * cb * sg + ca * cg;
  m(1, 2) = sa * sb;
  m(2, 0) = -sb * cg;
  m(2, 1) = sb * sg;
  m(2, 2) = cb;
  return Rotation(m);
}

Rotation Rotation::from_quaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n;
  x /= n;
  y /= n;
  z /= n;
  Mat3 m;
  m(0, 0) = 1 - 2 * (y * y + z * z);
  m(0, 1) = 2 * (x * y - w * z);
  m(0, 2) = 2 * (x * z + w * y);
  m(1, 0) = 2 * (x * y + w * z);
  m(1, 1) = 1 - 2 * (x * x + z * z);
  m(1, 2) = 2 * (y * z - w * x);
  m(2, 0) = 2 * (x * z - w * y);
  m(2, 1) = 2 * (y * z + w * x);
  m(2, 2) = 1 - 2 * (x * x + y * y);
  return Rotation(m);
}

EulerZYZ Rotation::euler() const {
  EulerZYZ e;
  const double sb = std::hypot(m_(0, 2), m_(1, 2));
  e.beta = std::atan2(sb, m_(2, 2));
  if (sb > 1e-12) {
    e.alpha = wrap_2pi(std::atan2(m_(1, 2), m_(0, 2)));
    e.gamma = wrap_2pi(std::atan2(m_(2, 1), -m_(2, 0)));
  } else if (m_(2, 2) > 0) {
    // beta = 0: only alpha + gamma is determined.
    e.alpha = wrap_2pi(std::atan2(m_(1, 0), m_(0, 0)));
    e.gamma = 0.0;
  } else {
    // beta = pi: only alpha - gamma is determined.
    e.alpha = wrap_2pi(std::atan2(-m_(0, 1), -m_(0, 0)));
    e.gamma = 0.0;
  }
  return e;
}

double Rotation::orthonormality_residual() const {
  const Mat3 g = m_ * m_.transposed();
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

Rotation euler_to_matrix(double alpha, double beta, double gamma) {
  return Rotation::from_euler(alpha, beta, gamma);
}

double geodesic_distance(const Rotation& r1, const Rotation& r2) {
  const Mat3 rel = r2.matrix().transposed() * r1.matrix();
  return safe_acos((rel.trace() - 1.0) / 2.0);
}

double relative_pose_error(const Rotation& r1_gt, const Rotation& r2_gt,
                           const Rotation& r_est) {
  const Mat3 m = r2_gt.matrix().transposed() * r1_gt.matrix() * r_est.matrix();
  return safe_acos((m.trace() - 1.0) / 2.0);
}

Rotation random_rotation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_rotation(rng);
}

Rotation random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double w = normal(rng), x = normal(rng), y = normal(rng), z = normal(rng);
  // Degenerate draws are measure-zero; guard anyway.
  while (w * w + x * x + y * y + z * z < 1e-12) {
    w = normal(rng);
    x = normal(rng);
    y = normal(rng);
    z = normal(rng);
  }
  return Rotation::from_quaternion(w, x, y, z);
}

}  // namespace sphalign

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

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "sphalign/rotation.hpp"

using namespace sphalign;

namespace {
constexpr double kPi = std::numbers::pi;

double max_abs_diff(const Mat3& a, const Mat3& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  }
  return m;
}
}  // namespace

TEST_CASE("euler matrix matches the composed z-y-z product") {
  const double a = 0.3, b = 1.1, g = -0.7;
  auto rz = [](double t) {
    Mat3 m;
    m(0, 0) = std::cos(t); m(0, 1) = -std::sin(t); m(0, 2) = 0;
    m(1, 0) = std::sin(t); m(1, 1) = std::cos(t);  m(1, 2) = 0;
    m(2, 0) = 0;           m(2, 1) = 0;            m(2, 2) = 1;
    return m;
  };
  auto ry = [](double t) {
    Mat3 m;
    m(0, 0) = std::cos(t);  m(0, 1) = 0; m(0, 2) = std::sin(t);
    m(1, 0) = 0;            m(1, 1) = 1; m(1, 2) = 0;
    m(2, 0) = -std::sin(t); m(2, 1) = 0; m(2, 2) = std::cos(t);
    return m;
  };
  const Mat3 oracle = rz(a) * ry(b) * rz(g);
  CHECK(max_abs_diff(Rotation::from_euler(a, b, g).matrix(), oracle) < 1e-14);
}

TEST_CASE("euler round trip") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const Rotation r = random_rotation(rng);
    const Rotation back = Rotation::from_euler(r.euler());
    CHECK(geodesic_distance(r, back) < 1e-7);
    const EulerZYZ e = back.euler();
    CHECK(e.beta >= 0.0);
    CHECK(e.beta <= kPi);
  }
}

TEST_CASE("euler round trip at gimbal configurations") {
  for (double alpha : {0.0, 0.4, 2.8}) {
    const Rotation r0 = Rotation::from_euler(alpha, 0.0, 0.0);
    CHECK(geodesic_distance(r0, Rotation::from_euler(r0.euler())) < 1e-12);
    const Rotation r1 = Rotation::from_euler(alpha, kPi, 0.0);
    CHECK(geodesic_distance(r1, Rotation::from_euler(r1.euler())) < 1e-7);
  }
}

TEST_CASE("geodesic distance matches the quaternion-angle oracle") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    double w = dist(rng), x = dist(rng), y = dist(rng), z = dist(rng);
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    w /= n; x /= n; y /= n; z /= n;
    const Rotation r = Rotation::from_quaternion(w, x, y, z);
    // Rotation angle from the quaternion scalar part.
    const double oracle = 2.0 * std::acos(std::min(1.0, std::abs(w)));
    CHECK(geodesic_distance(r, Rotation::identity()) ==
          doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("geodesic distance is a metric on samples") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 50; ++t) {
    const Rotation a = random_rotation(rng);
    const Rotation b = random_rotation(rng);
    const Rotation c = random_rotation(rng);
    const double ab = geodesic_distance(a, b);
    CHECK(ab == doctest::Approx(geodesic_distance(b, a)).epsilon(1e-9));
    CHECK(ab <= geodesic_distance(a, c) + geodesic_distance(c, b) + 1e-9);
    CHECK(geodesic_distance(a, a) < 1e-7);
  }
}

TEST_CASE("relative pose error closed form") {
  const Rotation r1 = random_rotation(101);
  const Rotation r2 = random_rotation(102);
  // Perfect estimate R = R1^T R2 ... error definition uses
  // arccos((tr(R2^T R1 R) - 1)/2), so R = R1^{-1} R2 zeroes it.
  const Rotation perfect = r1.inverse() * r2;
  CHECK(relative_pose_error(r1, r2, perfect) < 1e-7);
}

TEST_CASE("rotation properties") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const Rotation r = random_rotation(rng);
    CHECK(r.orthonormality_residual() < 1e-13);
    CHECK(geodesic_distance(r * r.inverse(), Rotation::identity()) < 1e-7);
    const Vec3 v{0.3, -0.8, 0.52};
    CHECK(r.apply(v).norm() == doctest::Approx(v.norm()).epsilon(1e-12));
  }
}

TEST_CASE("trace clamp tolerance") {
  Mat3 slightly_off = Rotation::identity().matrix();
  slightly_off(0, 0) = 1.0 + 5e-10;
  CHECK(geodesic_distance(Rotation::from_matrix(slightly_off),
                          Rotation::identity()) == doctest::Approx(0.0));
  Mat3 bad = Rotation::identity().matrix();
  bad(0, 0) = 1.1;
  CHECK_THROWS_AS(
      geodesic_distance(Rotation::from_matrix(bad), Rotation::identity()),
      std::invalid_argument);
}

TEST_CASE("random rotations are deterministic and roughly Haar") {
  CHECK(max_abs_diff(random_rotation(42).matrix(),
                     random_rotation(42).matrix()) == 0.0);
  // Column means over many samples vanish under Haar measure.
  std::mt19937_64 rng(77);
  Vec3 mean{0, 0, 0};
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    mean = mean + random_rotation(rng).apply(Vec3{0, 0, 1});
  }
  mean = mean * (1.0 / trials);
  CHECK(mean.norm() < 0.05);
}

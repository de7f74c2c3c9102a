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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sphalign/correlate.hpp"
#include "sphalign/sht.hpp"
#include "sphalign/wigner.hpp"

using namespace sphalign;

namespace {
constexpr double kPi = std::numbers::pi;

// Direct quadrature of G(R) = sum_k int_S2 f1_k(p) f2_k(R^-1 p) dp. The
// cell-area rule is exact for products of bandlimited signals, and the
// rotated factor is evaluated spectrally, so this is an exact oracle up to
// roundoff.
double correlation_quadrature(const SphericalSignal& f1,
                              const HarmonicCoeffs& c2, const Rotation& r) {
  const SphericalGrid& grid = f1.grid();
  const Rotation rinv = r.inverse();
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.resolution(); ++i) {
    const double w = grid.cell_area(i);
    for (std::size_t j = 0; j < grid.resolution(); ++j) {
      const Vec3 q = rinv.apply(grid.direction_of(i, j).v);
      const double theta = std::acos(std::clamp(q.z, -1.0, 1.0));
      const double phi = std::atan2(q.y, q.x);
      double term = 0.0;
      for (std::size_t k = 0; k < c2.channels(); ++k) {
        term += f1.at(k, i, j) * evaluate_at(c2, k, theta, phi);
      }
      acc += w * term;
    }
  }
  return acc;
}

SphericalSignal rotate_spectral(const SphericalSignal& f, const Rotation& r) {
  return inverse_sht(rotate_coeffs(forward_sht(f), r), f.grid());
}

}  // namespace

TEST_CASE("correlation volume matches direct quadrature on the Euler grid") {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t b = 6;
  const SphericalSignal f1 = random_bandlimited_signal(b, 2, 71);
  const SphericalSignal f2 = random_bandlimited_signal(b, 2, 72);
  const HarmonicCoeffs c2 = forward_sht(f2);
  const CorrelationVolume g = correlate(f1, f2);
  const std::size_t m = g.samples_per_axis();
  double num = 0.0, den = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t bb = 0; bb < m; ++bb) {
      for (std::size_t c = 0; c < m; ++c) {
        const EulerZYZ e = g.euler_of(a, bb, c);
        const double direct = correlation_quadrature(
            f1, c2, Rotation::from_euler(e.alpha, e.beta, e.gamma));
        num += (g.at(a, bb, c) - direct) * (g.at(a, bb, c) - direct);
        den += direct * direct;
      }
    }
  }
  CHECK(std::sqrt(num / den) < 1e-4);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  CHECK(seconds < 30.0);
}

TEST_CASE("correlation is additive over channels") {
  const std::size_t b = 8;
  const SphericalSignal f1 = random_bandlimited_signal(b, 2, 81);
  const SphericalSignal f2 = random_bandlimited_signal(b, 2, 82);
  const CorrelationVolume g = correlate(f1, f2);
  CorrelationVolume sum(b);
  for (std::size_t k = 0; k < 2; ++k) {
    SphericalSignal a(f1.grid(), 1), c(f2.grid(), 1);
    for (std::size_t i = 0; i < f1.resolution(); ++i) {
      for (std::size_t j = 0; j < f1.resolution(); ++j) {
        a.at(0, i, j) = f1.at(k, i, j);
        c.at(0, i, j) = f2.at(k, i, j);
      }
    }
    const CorrelationVolume gk = correlate(a, c);
    for (std::size_t i = 0; i < sum.values().size(); ++i) {
      sum.values()[i] += gk.values()[i];
    }
  }
  double scale = 0.0;
  for (double v : g.values()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < g.values().size(); ++i) {
    CHECK(std::abs(g.values()[i] - sum.values()[i]) / scale < 1e-12);
  }
}

TEST_CASE("planted grid rotation peaks at its own cell") {
  const std::size_t b = 8;
  const SphericalSignal f1 = random_bandlimited_signal(b, 1, 90);
  const CorrelationVolume probe = correlate(f1, f1);
  const std::size_t a = 3, bb = 5, c = 11;
  const EulerZYZ e = probe.euler_of(a, bb, c);
  const Rotation r = Rotation::from_euler(e.alpha, e.beta, e.gamma);
  const SphericalSignal f2 = rotate_spectral(f1, r);
  const CorrelationVolume g = correlate(f1, f2);
  const ArgmaxResult best = argmax_rotation(g);
  // The volume peaks at R^-1: with ZYZ angles, R(a, b, g)^-1 =
  // R(pi - g, b, pi - a), which is again a grid cell.
  const std::size_t m = g.samples_per_axis();
  CHECK(best.a == (m / 2 + m - c) % m);
  CHECK(best.b == bb);
  CHECK(best.c == (m / 2 + m - a) % m);
  CHECK_FALSE(best.degenerate);
  CHECK(geodesic_distance(best.rotation.inverse(), r) < 1e-7);
}

TEST_CASE("argmax breaks ties at the smallest linear index") {
  CorrelationVolume g(2);
  for (double& v : g.values()) v = 0.0;
  g.at(1, 0, 2) = 3.0;
  g.at(1, 0, 3) = 3.0;
  const ArgmaxResult best = argmax_rotation(g);
  CHECK(best.a == 1);
  CHECK(best.b == 0);
  CHECK(best.c == 2);
  CHECK(best.peak == doctest::Approx(3.0));
}

TEST_CASE("zonal inputs flag a degenerate peak") {
  // A z-symmetric signal correlates equally across all alpha, so the peak
  // is not angularly localized.
  const std::size_t b = 8;
  const SphericalGrid grid(b);
  SphericalSignal f(grid, 1);
  for (std::size_t i = 0; i < grid.resolution(); ++i) {
    const double v = std::cos(grid.colatitude(i));
    for (std::size_t j = 0; j < grid.resolution(); ++j) f.at(0, i, j) = v;
  }
  const ArgmaxResult best = argmax_rotation(correlate(f, f));
  CHECK(best.degenerate);
}

TEST_CASE("constant volume is degenerate") {
  CorrelationVolume g(4);
  for (double& v : g.values()) v = 1.0;
  CHECK(argmax_rotation(g).degenerate);
}

TEST_CASE("planted rotation is recovered with upsampling and refinement") {
  std::mt19937_64 rng(99);
  const std::size_t b = 8;
  for (int t = 0; t < 5; ++t) {
    const SphericalSignal f1 = random_bandlimited_signal(b, 8, 200 + t);
    const Rotation r = random_rotation(rng);
    const SphericalSignal f2 = rotate_spectral(f1, r);
    const PoseEstimate est = estimate_relative_pose(f1, f2, 4, true);
    CHECK_FALSE(est.degenerate);
    CHECK(geodesic_distance(est.rotation, r) < 10.0 * kPi / 180.0);
  }
}

TEST_CASE("coarse estimate error is bounded by the cell width") {
  std::mt19937_64 rng(101);
  const std::size_t b = 8;
  const SphericalSignal f1 = random_bandlimited_signal(b, 8, 300);
  const Rotation r = random_rotation(rng);
  const SphericalSignal f2 = rotate_spectral(f1, r);
  const PoseEstimate est = estimate_relative_pose(f1, f2, 1, false);
  // The (2B)^3 grid has 22.5 degree spacing at B=8; a correct coarse peak
  // lies within about one cell diagonal.
  CHECK(geodesic_distance(est.rotation, r) < 40.0 * kPi / 180.0);
}

TEST_CASE("input validation") {
  const SphericalSignal f1 = random_bandlimited_signal(8, 1, 1);
  const SphericalSignal f2 = random_bandlimited_signal(4, 1, 2);
  CHECK_THROWS_AS(correlate(f1, f2), std::invalid_argument);
  const SphericalSignal f3 = random_bandlimited_signal(8, 2, 3);
  CHECK_THROWS_AS(correlate(f1, f3), std::invalid_argument);
}

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
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sphalign/rotation.hpp"
#include "sphalign/s2conv.hpp"
#include "sphalign/sht.hpp"
#include "sphalign/wigner.hpp"

using namespace sphalign;

namespace {
constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(static_cast<unsigned>(n), x);
      const double pm = std::legendre(static_cast<unsigned>(n - 1), x);
      const double dp = n * (x * p - pm) / (x * x - 1.0);
      const double step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double pm = std::legendre(static_cast<unsigned>(n - 1), x);
    const double dp = n * (x * std::legendre(static_cast<unsigned>(n), x) - pm) /
                      (x * x - 1.0);
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

double eval_dir(const HarmonicCoeffs& c, std::size_t k, const Vec3& v) {
  const double theta = std::acos(std::clamp(v.z, -1.0, 1.0));
  const double phi = std::atan2(v.y, v.x);
  return evaluate_at(c, k, theta, phi);
}

// Direct quadrature of (x * h)(p) = sum_k int_SO(3) x_k(R eta) h_k(R^-1 p) dR
// with the unnormalized Haar measure d alpha sin(beta) d beta d gamma.
// Uniform alpha/gamma grids are exact for azimuthal frequencies below the
// sample count; Gauss-Legendre in cos(beta) is exact for the bandlimited
// beta content.
double conv_quadrature(const HarmonicCoeffs& cx, const HarmonicCoeffs& ch,
                       double theta, double phi) {
  const int na = 17, nb = 16, nc = 17;
  std::vector<double> bu, bw;
  gauss_legendre(nb, bu, bw);
  const Vec3 eta{0.0, 0.0, 1.0};
  const double st = std::sin(theta), ct = std::cos(theta);
  const Vec3 p{st * std::cos(phi), st * std::sin(phi), ct};
  double acc = 0.0;
  for (int ai = 0; ai < na; ++ai) {
    const double alpha = 2.0 * kPi * ai / na;
    for (int bi = 0; bi < nb; ++bi) {
      const double beta = std::acos(bu[bi]);
      for (int ci = 0; ci < nc; ++ci) {
        const double gamma = 2.0 * kPi * ci / nc;
        const Rotation r = Rotation::from_euler(alpha, beta, gamma);
        const double w = (2.0 * kPi / na) * bw[bi] * (2.0 * kPi / nc);
        double term = 0.0;
        for (std::size_t k = 0; k < cx.channels(); ++k) {
          term += eval_dir(cx, k, r.apply(eta)) *
                  eval_dir(ch, k, r.inverse().apply(p));
        }
        acc += w * term;
      }
    }
  }
  return acc;
}

// Relative L2 mismatch between the spectral convolution and the quadrature
// oracle over a subsampled grid.
double conv_vs_quadrature(std::size_t channels, std::uint64_t seed) {
  const std::size_t b = 8;
  const SphericalSignal x = random_bandlimited_signal(b, channels, seed);
  const SphericalSignal hs = random_bandlimited_signal(b, channels, seed + 1);
  const HarmonicCoeffs cx = forward_sht(x);
  const HarmonicCoeffs ch = forward_sht(hs);
  const ZonalFilter h = project_to_zonal(hs);
  const HarmonicCoeffs out = channels == 1 ? s2_convolve(cx, h)
                                           : s2_convolve_multichannel(cx, h);
  const SphericalGrid grid(b);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < grid.resolution(); i += 2) {
    for (std::size_t j = 0; j < grid.resolution(); j += 2) {
      const double theta = grid.colatitude(i);
      const double phi = grid.azimuth(j);
      const double spectral = evaluate_at(out, 0, theta, phi);
      const double direct = conv_quadrature(cx, ch, theta, phi);
      num += (spectral - direct) * (spectral - direct);
      den += direct * direct;
    }
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("conv gain closed form") {
  for (std::size_t l = 0; l < 16; ++l) {
    CHECK(conv_gain(l) ==
          doctest::Approx(2.0 * kPi * std::sqrt(4.0 * kPi / (2.0 * l + 1.0)))
              .epsilon(1e-14));
  }
}

TEST_CASE("zonal projection recovers the m = 0 coefficients") {
  const std::size_t b = 8;
  const HarmonicCoeffs c = forward_sht(random_bandlimited_signal(b, 2, 5));
  const SphericalSignal f = inverse_sht(c, SphericalGrid(b));
  const ZonalFilter h = project_to_zonal(f);
  REQUIRE(h.bandwidth == b);
  REQUIRE(h.channels == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t l = 0; l < b; ++l) {
      CHECK(h.at(k, l) == doctest::Approx(c.at(k, l, 0).real()).epsilon(1e-10));
      CHECK(std::abs(c.at(k, l, 0).imag()) < 1e-12);
    }
  }
}

TEST_CASE("spectral convolution matches direct SO(3) quadrature") {
  CHECK(conv_vs_quadrature(1, 900) < 1e-4);
}

TEST_CASE("multichannel convolution matches direct SO(3) quadrature") {
  CHECK(conv_vs_quadrature(3, 910) < 1e-4);
}

TEST_CASE("multichannel convolution sums per-channel convolutions") {
  const std::size_t b = 8;
  const HarmonicCoeffs cx = forward_sht(random_bandlimited_signal(b, 3, 30));
  ZonalFilter h(b, 3);
  std::mt19937_64 rng(31);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (double& v : h.coeffs) v = dist(rng);
  const HarmonicCoeffs multi = s2_convolve_multichannel(cx, h);
  HarmonicCoeffs sum(b, 1);
  for (std::size_t k = 0; k < 3; ++k) {
    HarmonicCoeffs single(b, 1);
    for (std::size_t l = 0; l < b; ++l) {
      for (long m = -static_cast<long>(l); m <= static_cast<long>(l); ++m) {
        single.at(0, l, m) = cx.at(k, l, m);
      }
    }
    ZonalFilter hk(b, 1);
    for (std::size_t l = 0; l < b; ++l) hk.at(0, l) = h.at(k, l);
    const HarmonicCoeffs ck = s2_convolve(single, hk);
    for (std::size_t i = 0; i < sum.data().size(); ++i) {
      sum.data()[i] += ck.data()[i];
    }
  }
  for (std::size_t i = 0; i < sum.data().size(); ++i) {
    CHECK(std::abs(multi.data()[i] - sum.data()[i]) < 1e-12);
  }
}

TEST_CASE("convolution layer is exactly equivariant") {
  const std::size_t b = 8;
  const HarmonicCoeffs cx = forward_sht(random_bandlimited_signal(b, 1, 44));
  ZonalFilter h(b, 1);
  std::mt19937_64 rng(45);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (double& v : h.coeffs) v = dist(rng);
  for (int t = 0; t < 10; ++t) {
    const Rotation r = random_rotation(rng);
    const HarmonicCoeffs conv_then_rot = rotate_coeffs(s2_convolve(cx, h), r);
    const HarmonicCoeffs rot_then_conv = s2_convolve(rotate_coeffs(cx, r), h);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < conv_then_rot.data().size(); ++i) {
      num += std::norm(conv_then_rot.data()[i] - rot_then_conv.data()[i]);
      den += std::norm(conv_then_rot.data()[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-12);
  }
}

TEST_CASE("inverse-gain filter is the identity") {
  const std::size_t b = 8;
  const HarmonicCoeffs cx = forward_sht(random_bandlimited_signal(b, 1, 50));
  ZonalFilter h(b, 1);
  for (std::size_t l = 0; l < b; ++l) h.at(0, l) = 1.0 / conv_gain(l);
  const HarmonicCoeffs out = s2_convolve(cx, h);
  for (std::size_t i = 0; i < out.data().size(); ++i) {
    CHECK(std::abs(out.data()[i] - cx.data()[i]) < 1e-12);
  }
}

TEST_CASE("bandwidth mismatch throws") {
  const HarmonicCoeffs cx(8, 1);
  const ZonalFilter h(4, 1);
  CHECK_THROWS_AS(s2_convolve(cx, h), std::invalid_argument);
  const ZonalFilter hk(8, 2);
  CHECK_THROWS_AS(s2_convolve(cx, hk), std::invalid_argument);
}

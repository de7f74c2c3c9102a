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

#include "sphalign/sample.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sphalign {

namespace {

constexpr double kPi = std::numbers::pi;

void catmull_rom(double t, double w[4]) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  w[0] = -0.5 * t3 + t2 - 0.5 * t;
  w[1] = 1.5 * t3 - 2.5 * t2 + 1.0;
  w[2] = -1.5 * t3 + 2.0 * t2 + 0.5 * t;
  w[3] = 0.5 * t3 - 0.5 * t2;
}

// Row index with pole reflection; crossing a pole shifts azimuth by N/2.
void reflect_row(long r, long n, long* row, long* col_shift) {
  if (r < 0) {
    *row = -1 - r;
    *col_shift = n / 2;
  } else if (r >= n) {
    *row = 2 * n - 1 - r;
    *col_shift = n / 2;
  } else {
    *row = r;
    *col_shift = 0;
  }
}

double sample_at(const double* data, long n, double u, double v) {
  // u: fractional row (theta/pi * N - 1/2), v: fractional column.
  const double fu = std::floor(u);
  const double fv = std::floor(v);
  const long i0 = static_cast<long>(fu);
  const long j0 = static_cast<long>(fv);
  double wu[4], wv[4];
  catmull_rom(u - fu, wu);
  catmull_rom(v - fv, wv);

  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    long row, shift;
    reflect_row(i0 - 1 + a, n, &row, &shift);
    double racc = 0.0;
    for (int c = 0; c < 4; ++c) {
      long col = (j0 - 1 + c + shift) % n;
      if (col < 0) col += n;
      racc += wv[c] * data[row * n + col];
    }
    acc += wu[a] * racc;
  }
  return acc;
}

bool is_identity(const Mat3& m) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (m(i, j) != (i == j ? 1.0 : 0.0)) return false;
  return true;
}

}  // namespace

double sample_bicubic(const SphericalSignal& signal, std::size_t channel,
                      double theta, double phi) {
  const long n = static_cast<long>(signal.resolution());
  const double u = theta / kPi * n - 0.5;
  double p = std::fmod(phi, 2.0 * kPi);
  if (p < 0) p += 2.0 * kPi;
  const double v = p / (2.0 * kPi) * n;
  return sample_at(signal.channel(channel), n, u, v);
}

SphericalSignal rotate_spatial(const SphericalSignal& signal,
                               const Rotation& r) {
  if (is_identity(r.matrix())) return signal;

  const SphericalGrid& grid = signal.grid();
  const std::size_t n = grid.resolution();
  const Mat3 rinv = r.matrix().transposed();
  SphericalSignal out(grid, signal.channels());

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Vec3 p = grid.direction_of(i, j).v;
      const Vec3 q = rinv * p;
      const double theta = std::acos(std::min(1.0, std::max(-1.0, q.z)));
      const double phi = std::atan2(q.y, q.x);
      for (std::size_t k = 0; k < signal.channels(); ++k) {
        out.at(k, i, j) = sample_bicubic(signal, k, theta, phi);
      }
    }
  }
  return out;
}

SphericalSignal upsample_bicubic(const SphericalSignal& signal,
                                 std::size_t factor) {
  if (factor == 0) {
    throw std::invalid_argument("upsample_bicubic: factor must be >= 1");
  }
  if (factor == 1) return signal;

  const std::size_t n_in = signal.resolution();
  SphericalGrid fine(signal.grid().bandwidth() * factor);
  SphericalSignal out(fine, signal.channels());
  const std::size_t n_out = fine.resolution();

  for (std::size_t k = 0; k < signal.channels(); ++k) {
    const double* src = signal.channel(k);
    for (std::size_t i = 0; i < n_out; ++i) {
      const double u =
          fine.colatitude(i) / kPi * static_cast<double>(n_in) - 0.5;
      for (std::size_t j = 0; j < n_out; ++j) {
        const double v =
            fine.azimuth(j) / (2.0 * kPi) * static_cast<double>(n_in);
        out.at(k, i, j) = sample_at(src, static_cast<long>(n_in), u, v);
      }
    }
  }
  return out;
}

}  // namespace sphalign

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

#ifndef SPHALIGN_SHT_HPP_
#define SPHALIGN_SHT_HPP_

#include <complex>
#include <cstddef>
#include <vector>

#include "sphalign/signal.hpp"

namespace sphalign {

using cplx = std::complex<double>;

/// Per-channel complex spherical-harmonic coefficients for degrees l < B,
/// orders -l <= m <= l. Harmonics are orthonormal with Condon-Shortley
/// phase. Dense triangular layout: per channel, coeff (l, m) lives at
/// l*l + l + m, so each channel holds exactly B^2 coefficients.
class HarmonicCoeffs {
 public:
  HarmonicCoeffs(std::size_t bandwidth, std::size_t channels)
      : bandwidth_(bandwidth),
        channels_(channels),
        data_(channels * bandwidth * bandwidth, cplx{0.0, 0.0}) {}

  std::size_t bandwidth() const { return bandwidth_; }
  std::size_t channels() const { return channels_; }

  cplx& at(std::size_t k, std::size_t l, long m) {
    return data_[k * bandwidth_ * bandwidth_ + l * l + l + m];
  }
  cplx at(std::size_t k, std::size_t l, long m) const {
    return data_[k * bandwidth_ * bandwidth_ + l * l + l + m];
  }

  cplx* channel(std::size_t k) {
    return data_.data() + k * bandwidth_ * bandwidth_;
  }
  const cplx* channel(std::size_t k) const {
    return data_.data() + k * bandwidth_ * bandwidth_;
  }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  /// Max deviation from coeff(l,-m) = (-1)^m conj(coeff(l,m)).
  double conjugate_symmetry_residual() const;

 private:
  std::size_t bandwidth_;
  std::size_t channels_;
  std::vector<cplx> data_;
};

/// Precomputed transform plan for one bandwidth: normalized associated
/// Legendre tables sampled at the grid colatitudes. Immutable, shareable.
class ShtPlan {
 public:
  explicit ShtPlan(std::size_t bandwidth);

  std::size_t bandwidth() const { return bandwidth_; }
  const SphericalGrid& grid() const { return grid_; }

  /// Normalized Legendre value P~_{l m}(theta_i) for m >= 0
  /// (such that Y_l^m = P~_{l m} e^{i m phi}).
  double legendre(std::size_t m, std::size_t l, std::size_t i) const {
    const std::size_t n = grid_.resolution();
    return tables_[m][(l - m) * n + i];
  }

  const double* legendre_row(std::size_t m, std::size_t l) const {
    const std::size_t n = grid_.resolution();
    return tables_[m].data() + (l - m) * n;
  }

  HarmonicCoeffs forward(const SphericalSignal& signal) const;
  SphericalSignal inverse(const HarmonicCoeffs& coeffs) const;

 private:
  std::size_t bandwidth_;
  SphericalGrid grid_;
  // tables_[m] holds rows l = m .. B-1, each of length N.
  std::vector<std::vector<double>> tables_;
};

/// Shared plan cache keyed by bandwidth.
const ShtPlan& sht_plan(std::size_t bandwidth);

/// Forward transform; throws std::invalid_argument on non-finite input.
HarmonicCoeffs forward_sht(const SphericalSignal& signal);

/// Inverse transform onto the given grid; bandwidths must match.
SphericalSignal inverse_sht(const HarmonicCoeffs& coeffs,
                            const SphericalGrid& grid);

/// S(k, l) = sum_m |coeff(k, l, m)|^2, row-major (channel, l).
std::vector<double> power_spectrum(const HarmonicCoeffs& coeffs);

/// Point evaluation of a bandlimited signal from its coefficients.
/// O(B^2) per call; used by oracles and brute-force checks.
double evaluate_at(const HarmonicCoeffs& coeffs, std::size_t channel,
                   double theta, double phi);

/// Random bandlimited test signal: iid normal coefficients (conjugate
/// symmetric), synthesized on the grid of the given bandwidth.
SphericalSignal random_bandlimited_signal(std::size_t bandwidth,
                                          std::size_t channels,
                                          unsigned long long seed);

}  // namespace sphalign

#endif  // SPHALIGN_SHT_HPP_

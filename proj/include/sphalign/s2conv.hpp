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

#ifndef SPHALIGN_S2CONV_HPP_
#define SPHALIGN_S2CONV_HPP_

#include <cstddef>
#include <vector>

#include "sphalign/sht.hpp"

namespace sphalign {

/// Zonal filter: per-degree real coefficients h_l (the m = 0 harmonic
/// coefficients), one stack of B values per input channel. Non-zonal filter
/// content cannot survive the SO(3)-averaged convolution, so only the zonal
/// part is stored.
struct ZonalFilter {
  std::size_t bandwidth = 0;
  std::size_t channels = 1;
  /// coeffs[k * bandwidth + l] = h_l for input channel k.
  std::vector<double> coeffs;

  ZonalFilter() = default;
  ZonalFilter(std::size_t b, std::size_t k)
      : bandwidth(b), channels(k), coeffs(b * k, 0.0) {}

  double& at(std::size_t k, std::size_t l) {
    return coeffs[k * bandwidth + l];
  }
  double at(std::size_t k, std::size_t l) const {
    return coeffs[k * bandwidth + l];
  }
};

/// Per-degree spectral gain of the convolution, c_l = 2*pi*sqrt(4*pi/(2l+1)).
/// Validated against direct SO(3) quadrature of the convolution integral.
double conv_gain(std::size_t l);

/// Keep only the m = 0 content of the filter signal.
ZonalFilter project_to_zonal(const SphericalSignal& filter_signal);

/// Single-channel spherical convolution in the spectral domain:
/// out(l, m) = c_l * x(l, m) * h_l. Output bandlimit stays at B.
HarmonicCoeffs s2_convolve(const HarmonicCoeffs& x, const ZonalFilter& h);

/// K-channel convolution, summed into one output channel.
HarmonicCoeffs s2_convolve_multichannel(const HarmonicCoeffs& x,
                                        const ZonalFilter& h);

}  // namespace sphalign

#endif  // SPHALIGN_S2CONV_HPP_

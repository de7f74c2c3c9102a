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

#include "sphalign/s2conv.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sphalign {

double conv_gain(std::size_t l) {
  constexpr double kPi = std::numbers::pi;
  return 2.0 * kPi * std::sqrt(4.0 * kPi / (2.0 * static_cast<double>(l) + 1.0));
}

ZonalFilter project_to_zonal(const SphericalSignal& filter_signal) {
  const HarmonicCoeffs coeffs = forward_sht(filter_signal);
  ZonalFilter h(coeffs.bandwidth(), coeffs.channels());
  for (std::size_t k = 0; k < coeffs.channels(); ++k) {
    for (std::size_t l = 0; l < coeffs.bandwidth(); ++l) {
      h.at(k, l) = coeffs.at(k, l, 0).real();
    }
  }
  return h;
}

HarmonicCoeffs s2_convolve(const HarmonicCoeffs& x, const ZonalFilter& h) {
  if (x.bandwidth() != h.bandwidth) {
    throw std::invalid_argument("s2_convolve: bandwidth mismatch");
  }
  if (h.channels != 1 && h.channels != x.channels()) {
    throw std::invalid_argument("s2_convolve: channel mismatch");
  }
  const std::size_t b = x.bandwidth();
  HarmonicCoeffs out(b, x.channels());
  for (std::size_t k = 0; k < x.channels(); ++k) {
    const std::size_t hk = h.channels == 1 ? 0 : k;
    for (std::size_t l = 0; l < b; ++l) {
      const double g = conv_gain(l) * h.at(hk, l);
      for (long m = -static_cast<long>(l); m <= static_cast<long>(l); ++m) {
        out.at(k, l, m) = g * x.at(k, l, m);
      }
    }
  }
  return out;
}

HarmonicCoeffs s2_convolve_multichannel(const HarmonicCoeffs& x,
                                        const ZonalFilter& h) {
  if (x.bandwidth() != h.bandwidth) {
    throw std::invalid_argument("s2_convolve_multichannel: bandwidth mismatch");
  }
  if (x.channels() != h.channels) {
    throw std::invalid_argument("s2_convolve_multichannel: channel mismatch");
  }
  const std::size_t b = x.bandwidth();
  HarmonicCoeffs out(b, 1);
  for (std::size_t k = 0; k < x.channels(); ++k) {
    for (std::size_t l = 0; l < b; ++l) {
      const double g = conv_gain(l) * h.at(k, l);
      for (long m = -static_cast<long>(l); m <= static_cast<long>(l); ++m) {
        out.at(0, l, m) += g * x.at(k, l, m);
      }
    }
  }
  return out;
}

}  // namespace sphalign

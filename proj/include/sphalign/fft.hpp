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

#ifndef SPHALIGN_FFT_HPP_
#define SPHALIGN_FFT_HPP_

#include <complex>
#include <cstddef>

// Thin wrapper over FFTW c2c transforms. Plans are created once per
// (size, sign) and reused; planning is serialized internally since FFTW's
// planner is not thread-safe.

namespace sphalign::fft {

using cplx = std::complex<double>;

inline constexpr int kForward = -1;   // e^{-i...}
inline constexpr int kBackward = +1;  // e^{+i...}, unnormalized

/// In-place 1D transform of length n.
void transform_1d(cplx* data, std::size_t n, int sign);

/// In-place 2D transform, row-major n0 x n1.
void transform_2d(cplx* data, std::size_t n0, std::size_t n1, int sign);

}  // namespace sphalign::fft

#endif  // SPHALIGN_FFT_HPP_

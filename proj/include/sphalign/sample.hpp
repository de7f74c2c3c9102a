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

#ifndef SPHALIGN_SAMPLE_HPP_
#define SPHALIGN_SAMPLE_HPP_

#include "sphalign/rotation.hpp"
#include "sphalign/signal.hpp"

namespace sphalign {

/// Bicubic (Catmull-Rom) point sample of one channel at (theta, phi), with
/// azimuthal wrap-around and pole-reflected colatitude padding.
double sample_bicubic(const SphericalSignal& signal, std::size_t channel,
                      double theta, double phi);

/// out(p) = in(R^{-1} p) by bicubic interpolation. Identity rotations
/// return the input unchanged.
SphericalSignal rotate_spatial(const SphericalSignal& signal,
                               const Rotation& r);

/// Resample onto the factor*N grid of the same family. factor = 1 returns
/// the input unchanged.
SphericalSignal upsample_bicubic(const SphericalSignal& signal,
                                 std::size_t factor);

}  // namespace sphalign

#endif  // SPHALIGN_SAMPLE_HPP_

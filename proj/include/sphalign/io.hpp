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

#ifndef SPHALIGN_IO_HPP_
#define SPHALIGN_IO_HPP_

#include <string>

#include "sphalign/signal.hpp"

namespace sphalign {

/// Spherical-signal file container ("SSIG"): self-describing header
/// (magic, version, bandwidth, channels) followed by little-endian
/// float32 samples in channel-major row-major order. Byte layout in
/// docs/formats.md.
void save_signal(const SphericalSignal& signal, const std::string& path);
SphericalSignal load_signal(const std::string& path);

}  // namespace sphalign

#endif  // SPHALIGN_IO_HPP_

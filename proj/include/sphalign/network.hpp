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

#ifndef SPHALIGN_NETWORK_HPP_
#define SPHALIGN_NETWORK_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sphalign/rotation.hpp"
#include "sphalign/signal.hpp"

namespace sphalign {

enum class LayerKind : std::uint32_t {
  kSpectralConv = 0,
  kPointwiseRelu = 1,
  kAffineNorm = 2,
  kSpectralPool = 3,
  kResidualBottleneck = 4,
  kGlobalAvgPool = 5,
  kDense = 6,
};

struct LayerSpec {
  LayerKind kind;
  std::uint32_t in_channels = 1;
  std::uint32_t out_channels = 1;
  std::uint32_t in_resolution = 0;   // 0 for vector-valued stages
  std::uint32_t out_resolution = 0;
  bool downsample = false;  // bottleneck-only: spectral-pool inside

  /// Number of float parameters this layer carries.
  std::size_t param_count() const;
};

struct TapSpec {
  std::string name;
  std::size_t layer = 0;
};

/// Forward-only network: ordered layers, flat float32 parameter blocks,
/// and named taps. For residual bottlenecks a tap yields the
/// post-activation mid-bottleneck feature (out_channels / 4 channels).
struct NetworkWeights {
  std::vector<LayerSpec> layers;
  std::vector<std::vector<float>> params;  // one block per layer
  std::vector<TapSpec> taps;

  /// Throws std::invalid_argument when shapes, resolutions or tap
  /// references are inconsistent.
  void validate() const;

  const TapSpec* find_tap(const std::string& name) const;
};

/// The 10-layer residual classifier topology: 64x64 single-channel input,
/// 40-way scores, taps "synth" (32x32x16) and "pose" (16x16x32).
NetworkWeights make_classifier_network();

/// Conv/affine/pool-only network (no ReLU), exactly equivariant; one tap
/// "feat". Used to calibrate the equivariance audit.
NetworkWeights make_linear_network();

/// Deterministic random initialization (spectrally decaying filters).
void randomize_weights(NetworkWeights* net, std::uint64_t seed);

struct ForwardOutput {
  std::optional<SphericalSignal> tap;
  std::vector<double> scores;  // empty when a tap was requested
};

/// Run the network. With a tap name, stops at the tapped layer and returns
/// the intermediate signal; otherwise returns the class scores.
ForwardOutput forward(const NetworkWeights& net, const SphericalSignal& x,
                      const std::string& tap = "");

/// Relative L2 discrepancy at a tap between rotate-then-forward and
/// forward-then-rotate. Rotation is applied spatially on the input and
/// spectrally on the tap output. Throws on zero-norm tap outputs.
double equivariance_error(const NetworkWeights& net, const SphericalSignal& x,
                          const Rotation& r, const std::string& tap);

// Weight container errors, distinguished for callers.
class WeightFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class WeightShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class WeightTruncatedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary container: "SPHW" magic, version, layer table, tap table,
/// little-endian float32 tensors (layout documented in docs/formats.md).
void save_weights(const NetworkWeights& net, const std::string& path);
NetworkWeights load_weights(const std::string& path);

}  // namespace sphalign

#endif  // SPHALIGN_NETWORK_HPP_

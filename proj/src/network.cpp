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

#include "sphalign/network.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

#include "sphalign/kernels.hpp"
#include "sphalign/s2conv.hpp"
#include "sphalign/sample.hpp"
#include "sphalign/sht.hpp"
#include "sphalign/wigner.hpp"

namespace sphalign {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t conv_params(std::size_t out, std::size_t in, std::size_t res) {
  return out * in * (res / 2);
}

// Filter bank application in the spectral domain. w is laid out
// [out][in][l] with len = B per (out, in) pair.
SphericalSignal conv_bank(const SphericalSignal& x, const float* w,
                          std::size_t out_ch) {
  const std::size_t b = x.grid().bandwidth();
  const std::size_t in_ch = x.channels();
  const HarmonicCoeffs cin = forward_sht(x);
  HarmonicCoeffs cout(b, out_ch);
  for (std::size_t o = 0; o < out_ch; ++o) {
    for (std::size_t i = 0; i < in_ch; ++i) {
      const float* h = w + (o * in_ch + i) * b;
      for (std::size_t l = 0; l < b; ++l) {
        const double g = conv_gain(l) * static_cast<double>(h[l]);
        if (g == 0.0) continue;
        const cplx* src = cin.channel(i) + l * l;
        cplx* dst = cout.channel(o) + l * l;
        kernels::axpy(reinterpret_cast<double*>(dst), g,
                      reinterpret_cast<const double*>(src), 2 * (2 * l + 1));
      }
    }
  }
  return inverse_sht(cout, x.grid());
}

// Inference-mode normalization: per-channel scale then offset.
void affine_apply(SphericalSignal* x, const float* p) {
  const std::size_t n = x->resolution();
  const std::size_t k = x->channels();
  for (std::size_t c = 0; c < k; ++c) {
    double* ch = x->channel(c);
    kernels::scale_offset(ch, ch, static_cast<double>(p[c]),
                          static_cast<double>(p[k + c]), n * n);
  }
}

void relu_apply(SphericalSignal* x) {
  kernels::relu(x->values().data(), x->values().size());
}

// Bandlimit truncation to B/2, resampled on the N/2 grid. Exactly
// equivariant, unlike spatial pooling.
SphericalSignal spectral_pool(const SphericalSignal& x) {
  const std::size_t b = x.grid().bandwidth();
  if (b < 2) throw std::invalid_argument("spectral_pool: bandwidth too small");
  const std::size_t b2 = b / 2;
  const HarmonicCoeffs cin = forward_sht(x);
  HarmonicCoeffs cout(b2, x.channels());
  for (std::size_t k = 0; k < x.channels(); ++k) {
    std::memcpy(cout.channel(k), cin.channel(k), b2 * b2 * sizeof(cplx));
  }
  return inverse_sht(cout, SphericalGrid(b2));
}

// Pointwise channel mixing (1x1 projection), w laid out [out][in].
SphericalSignal channel_mix(const SphericalSignal& x, const float* w,
                            std::size_t out_ch) {
  const std::size_t n = x.resolution();
  const std::size_t in_ch = x.channels();
  SphericalSignal out(x.grid(), out_ch);
  for (std::size_t o = 0; o < out_ch; ++o) {
    for (std::size_t i = 0; i < in_ch; ++i) {
      kernels::axpy(out.channel(o),
                    static_cast<double>(w[o * in_ch + i]), x.channel(i),
                    n * n);
    }
  }
  return out;
}

std::vector<double> global_avg_pool(const SphericalSignal& x) {
  const std::size_t n = x.resolution();
  std::vector<double> out(x.channels(), 0.0);
  for (std::size_t k = 0; k < x.channels(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = x.grid().cell_area(i);
      for (std::size_t j = 0; j < n; ++j) acc += a * x.at(k, i, j);
    }
    out[k] = acc / (4.0 * kPi);
  }
  return out;
}

std::vector<double> dense_apply(const std::vector<double>& v, const float* p,
                                std::size_t in, std::size_t out) {
  std::vector<double> y(out, 0.0);
  for (std::size_t o = 0; o < out; ++o) {
    double acc = static_cast<double>(p[out * in + o]);
    for (std::size_t i = 0; i < in; ++i) {
      acc += static_cast<double>(p[o * in + i]) * v[i];
    }
    y[o] = acc;
  }
  return y;
}

// Pre-activation bottleneck. Parameter blocks in order: a1, conv1, a2,
// conv2, a3, conv3, optional channel projection for the skip path.
// tap_out, when non-null, receives the post-activation mid feature that
// feeds conv3 (out_channels / 4 channels at the output resolution).
SphericalSignal bottleneck(const SphericalSignal& x, const LayerSpec& spec,
                           const float* p, SphericalSignal* tap_out) {
  const std::size_t in = spec.in_channels;
  const std::size_t out = spec.out_channels;
  const std::size_t mid = out / 4;
  const float* a1 = p;
  const float* c1 = a1 + 2 * in;
  const float* a2 = c1 + conv_params(mid, in, spec.in_resolution);
  const float* c2 = a2 + 2 * mid;
  const float* a3 = c2 + conv_params(mid, mid, spec.out_resolution);
  const float* c3 = a3 + 2 * mid;
  const float* proj = c3 + conv_params(out, mid, spec.out_resolution);

  SphericalSignal h = x;
  affine_apply(&h, a1);
  relu_apply(&h);
  h = conv_bank(h, c1, mid);
  if (spec.downsample) h = spectral_pool(h);
  affine_apply(&h, a2);
  relu_apply(&h);
  h = conv_bank(h, c2, mid);
  affine_apply(&h, a3);
  relu_apply(&h);
  if (tap_out != nullptr) *tap_out = h;
  h = conv_bank(h, c3, out);

  SphericalSignal skip = spec.downsample ? spectral_pool(x) : x;
  if (in != out) skip = channel_mix(skip, proj, out);
  for (std::size_t v = 0; v < h.values().size(); ++v) {
    h.values()[v] += skip.values()[v];
  }
  return h;
}

double weighted_norm(const SphericalSignal& x) {
  const std::size_t n = x.resolution();
  double acc = 0.0;
  for (std::size_t k = 0; k < x.channels(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = x.grid().cell_area(i);
      for (std::size_t j = 0; j < n; ++j) {
        acc += a * x.at(k, i, j) * x.at(k, i, j);
      }
    }
  }
  return std::sqrt(acc);
}

bool is_power_of_two(std::uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

std::size_t LayerSpec::param_count() const {
  switch (kind) {
    case LayerKind::kSpectralConv:
      return conv_params(out_channels, in_channels, in_resolution);
    case LayerKind::kPointwiseRelu:
    case LayerKind::kSpectralPool:
    case LayerKind::kGlobalAvgPool:
      return 0;
    case LayerKind::kAffineNorm:
      return 2 * in_channels;
    case LayerKind::kDense:
      return static_cast<std::size_t>(out_channels) * in_channels +
             out_channels;
    case LayerKind::kResidualBottleneck: {
      const std::size_t mid = out_channels / 4;
      std::size_t n = 2 * in_channels + 2 * mid + 2 * mid;
      n += conv_params(mid, in_channels, in_resolution);
      n += conv_params(mid, mid, out_resolution);
      n += conv_params(out_channels, mid, out_resolution);
      if (in_channels != out_channels) {
        n += static_cast<std::size_t>(out_channels) * in_channels;
      }
      return n;
    }
  }
  throw std::invalid_argument("LayerSpec: unknown layer kind");
}

void NetworkWeights::validate() const {
  if (layers.empty()) throw std::invalid_argument("network: no layers");
  if (params.size() != layers.size()) {
    throw std::invalid_argument("network: parameter block count mismatch");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& s = layers[i];
    if (params[i].size() != s.param_count()) {
      throw std::invalid_argument("network: parameter tensor shape mismatch");
    }
    if (s.in_resolution != 0 && !is_power_of_two(s.in_resolution)) {
      throw std::invalid_argument("network: resolution not a power of two");
    }
    switch (s.kind) {
      case LayerKind::kSpectralPool:
        if (s.out_resolution * 2 != s.in_resolution) {
          throw std::invalid_argument("network: pool must halve resolution");
        }
        break;
      case LayerKind::kResidualBottleneck:
        if (s.out_channels % 4 != 0) {
          throw std::invalid_argument(
              "network: bottleneck channels not divisible by 4");
        }
        if (s.downsample ? s.out_resolution * 2 != s.in_resolution
                         : s.out_resolution != s.in_resolution) {
          throw std::invalid_argument("network: bottleneck resolution chain");
        }
        break;
      case LayerKind::kGlobalAvgPool:
        if (s.out_resolution != 0 || s.out_channels != s.in_channels) {
          throw std::invalid_argument("network: bad global pool spec");
        }
        break;
      default:
        break;
    }
    if (i > 0) {
      const LayerSpec& prev = layers[i - 1];
      if (s.in_channels != prev.out_channels) {
        throw std::invalid_argument("network: channel chain mismatch");
      }
      if (s.in_resolution != prev.out_resolution) {
        throw std::invalid_argument("network: resolution chain mismatch");
      }
    }
  }
  for (const TapSpec& t : taps) {
    if (t.layer >= layers.size()) {
      throw std::invalid_argument("network: tap references missing layer");
    }
    if (t.name.empty()) throw std::invalid_argument("network: unnamed tap");
  }
}

const TapSpec* NetworkWeights::find_tap(const std::string& name) const {
  for (const TapSpec& t : taps) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

NetworkWeights make_classifier_network() {
  NetworkWeights net;
  auto conv = [](std::uint32_t in, std::uint32_t out, std::uint32_t res) {
    return LayerSpec{LayerKind::kSpectralConv, in, out, res, res, false};
  };
  auto block = [](std::uint32_t in, std::uint32_t out, std::uint32_t res,
                  bool down) {
    return LayerSpec{LayerKind::kResidualBottleneck, in, out, res,
                     down ? res / 2 : res, down};
  };
  net.layers = {
      conv(1, 32, 64),
      block(32, 32, 64, false),
      block(32, 64, 64, true),
      block(64, 64, 32, false),
      block(64, 128, 32, true),
      block(128, 128, 16, false),
      block(128, 128, 16, false),
      block(128, 256, 16, true),
      block(256, 256, 8, false),
      LayerSpec{LayerKind::kGlobalAvgPool, 256, 256, 8, 0, false},
      LayerSpec{LayerKind::kDense, 256, 40, 0, 0, false},
  };
  net.taps = {{"synth", 3}, {"pose", 5}};
  net.params.resize(net.layers.size());
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    net.params[i].assign(net.layers[i].param_count(), 0.0f);
  }
  net.validate();
  return net;
}

NetworkWeights make_linear_network() {
  NetworkWeights net;
  auto conv = [](std::uint32_t in, std::uint32_t out, std::uint32_t res) {
    return LayerSpec{LayerKind::kSpectralConv, in, out, res, res, false};
  };
  auto affine = [](std::uint32_t ch, std::uint32_t res) {
    return LayerSpec{LayerKind::kAffineNorm, ch, ch, res, res, false};
  };
  net.layers = {conv(1, 8, 64), affine(8, 64), conv(8, 8, 64), affine(8, 64),
                conv(8, 4, 64)};
  net.taps = {{"feat", 4}};
  net.params.resize(net.layers.size());
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    net.params[i].assign(net.layers[i].param_count(), 0.0f);
  }
  net.validate();
  return net;
}

void randomize_weights(NetworkWeights* net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Filters get a smooth spectral decay so the feature maps stay well
  // resolved on the sampling grid.
  auto fill_conv = [&](float* w, std::size_t out, std::size_t in,
                       std::size_t res) {
    const std::size_t b = res / 2;
    const double fan = std::sqrt(static_cast<double>(in));
    for (std::size_t o = 0; o < out; ++o) {
      for (std::size_t i = 0; i < in; ++i) {
        for (std::size_t l = 0; l < b; ++l) {
          const double frac = static_cast<double>(l) / static_cast<double>(b);
          const double decay = std::exp(-6.0 * frac * frac);
          w[(o * in + i) * b + l] = static_cast<float>(
              normal(rng) * decay / (conv_gain(l) * fan));
        }
      }
    }
  };
  auto fill_affine = [&](float* p, std::size_t ch) {
    for (std::size_t c = 0; c < ch; ++c) {
      p[c] = static_cast<float>(1.0 + 0.1 * normal(rng));
      p[ch + c] = static_cast<float>(0.01 * normal(rng));
    }
  };

  for (std::size_t li = 0; li < net->layers.size(); ++li) {
    const LayerSpec& s = net->layers[li];
    float* p = net->params[li].data();
    switch (s.kind) {
      case LayerKind::kSpectralConv:
        fill_conv(p, s.out_channels, s.in_channels, s.in_resolution);
        break;
      case LayerKind::kAffineNorm:
        fill_affine(p, s.in_channels);
        break;
      case LayerKind::kDense: {
        const double fan = std::sqrt(static_cast<double>(s.in_channels));
        for (std::size_t i = 0;
             i < static_cast<std::size_t>(s.out_channels) * s.in_channels;
             ++i) {
          p[i] = static_cast<float>(normal(rng) / fan);
        }
        for (std::size_t o = 0; o < s.out_channels; ++o) {
          p[s.out_channels * s.in_channels + o] =
              static_cast<float>(0.01 * normal(rng));
        }
        break;
      }
      case LayerKind::kResidualBottleneck: {
        const std::size_t in = s.in_channels;
        const std::size_t out = s.out_channels;
        const std::size_t mid = out / 4;
        float* a1 = p;
        float* c1 = a1 + 2 * in;
        float* a2 = c1 + conv_params(mid, in, s.in_resolution);
        float* c2 = a2 + 2 * mid;
        float* a3 = c2 + conv_params(mid, mid, s.out_resolution);
        float* c3 = a3 + 2 * mid;
        float* proj = c3 + conv_params(out, mid, s.out_resolution);
        fill_affine(a1, in);
        fill_conv(c1, mid, in, s.in_resolution);
        fill_affine(a2, mid);
        fill_conv(c2, mid, mid, s.out_resolution);
        fill_affine(a3, mid);
        fill_conv(c3, out, mid, s.out_resolution);
        if (in != out) {
          const double fan = std::sqrt(static_cast<double>(in));
          for (std::size_t i = 0; i < out * in; ++i) {
            proj[i] = static_cast<float>(normal(rng) / fan);
          }
        }
        break;
      }
      default:
        break;
    }
  }
}

ForwardOutput forward(const NetworkWeights& net, const SphericalSignal& x,
                      const std::string& tap) {
  net.validate();
  const TapSpec* tap_spec = nullptr;
  if (!tap.empty()) {
    tap_spec = net.find_tap(tap);
    if (tap_spec == nullptr) {
      throw std::invalid_argument("forward: unknown tap '" + tap + "'");
    }
  }
  const LayerSpec& first = net.layers.front();
  if (x.channels() != first.in_channels ||
      x.resolution() != first.in_resolution) {
    throw std::invalid_argument("forward: input shape mismatch");
  }

  ForwardOutput out;
  SphericalSignal sig = x;
  std::vector<double> vec;
  bool is_vector = false;

  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    const LayerSpec& s = net.layers[li];
    const float* p = net.params[li].data();
    const bool want_tap = tap_spec != nullptr && tap_spec->layer == li;
    switch (s.kind) {
      case LayerKind::kSpectralConv:
        sig = conv_bank(sig, p, s.out_channels);
        break;
      case LayerKind::kPointwiseRelu:
        relu_apply(&sig);
        break;
      case LayerKind::kAffineNorm:
        affine_apply(&sig, p);
        break;
      case LayerKind::kSpectralPool:
        sig = spectral_pool(sig);
        break;
      case LayerKind::kResidualBottleneck: {
        SphericalSignal mid(SphericalGrid(1), 1);
        sig = bottleneck(sig, s, p, want_tap ? &mid : nullptr);
        if (want_tap) {
          out.tap = std::move(mid);
          return out;
        }
        break;
      }
      case LayerKind::kGlobalAvgPool:
        vec = global_avg_pool(sig);
        is_vector = true;
        break;
      case LayerKind::kDense:
        vec = dense_apply(vec, p, s.in_channels, s.out_channels);
        break;
    }
    if (want_tap) {
      if (is_vector) {
        throw std::invalid_argument("forward: tap on a vector-valued layer");
      }
      out.tap = sig;
      return out;
    }
  }
  if (!is_vector) {
    throw std::invalid_argument("forward: network does not end in scores");
  }
  out.scores = std::move(vec);
  return out;
}

double equivariance_error(const NetworkWeights& net, const SphericalSignal& x,
                          const Rotation& r, const std::string& tap) {
  ForwardOutput a = forward(net, rotate_spatial(x, r), tap);
  ForwardOutput b = forward(net, x, tap);
  if (!a.tap.has_value() || !b.tap.has_value()) {
    throw std::invalid_argument("equivariance_error: tap produced no signal");
  }
  const HarmonicCoeffs cb = forward_sht(*b.tap);
  const SphericalSignal rotated =
      inverse_sht(rotate_coeffs(cb, r), b.tap->grid());
  const double denom = weighted_norm(rotated);
  if (denom < 1e-300) {
    throw std::runtime_error("equivariance_error: zero-norm tap output");
  }
  SphericalSignal diff = *a.tap;
  for (std::size_t v = 0; v < diff.values().size(); ++v) {
    diff.values()[v] -= rotated.values()[v];
  }
  return weighted_norm(diff) / denom;
}

}  // namespace sphalign

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

#include "sphalign/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "sphalign/network.hpp"

namespace sphalign {

namespace {

constexpr char kSignalMagic[4] = {'S', 'S', 'I', 'G'};
constexpr char kWeightMagic[4] = {'S', 'P', 'H', 'W'};
constexpr std::uint32_t kFormatVersion = 1;

// All multi-byte fields are little-endian regardless of host order.
void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

void put_f32(std::ostream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

template <typename Error>
void read_exact(std::istream& in, char* dst, std::size_t n,
                const char* what) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw Error(std::string("unexpected end of file reading ") + what);
  }
}

template <typename Error>
std::uint32_t get_u32(std::istream& in, const char* what) {
  char b[4];
  read_exact<Error>(in, b, 4, what);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i]))
         << (8 * i);
  }
  return v;
}

template <typename Error>
std::uint64_t get_u64(std::istream& in, const char* what) {
  char b[8];
  read_exact<Error>(in, b, 8, what);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i]))
         << (8 * i);
  }
  return v;
}

template <typename Error>
void get_f32_block(std::istream& in, float* dst, std::size_t count,
                   const char* what) {
  std::vector<char> buf(count * 4);
  read_exact<Error>(in, buf.data(), buf.size(), what);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits = 0;
    for (int k = 0; k < 4; ++k) {
      bits |= static_cast<std::uint32_t>(
                  static_cast<unsigned char>(buf[4 * i + k]))
              << (8 * k);
    }
    std::memcpy(&dst[i], &bits, 4);
  }
}

void check_trailing(std::istream& in, const char* what) {
  char extra;
  in.read(&extra, 1);
  if (in.gcount() != 0) {
    throw WeightFormatError(std::string("trailing bytes after ") + what);
  }
}

}  // namespace

void save_signal(const SphericalSignal& signal, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_signal: cannot open " + path);
  out.write(kSignalMagic, 4);
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(signal.grid().bandwidth()));
  put_u32(out, static_cast<std::uint32_t>(signal.channels()));
  for (double v : signal.values()) put_f32(out, static_cast<float>(v));
  if (!out) throw std::runtime_error("save_signal: write failed on " + path);
}

SphericalSignal load_signal(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_signal: cannot open " + path);
  char magic[4];
  read_exact<std::runtime_error>(in, magic, 4, "signal magic");
  if (std::memcmp(magic, kSignalMagic, 4) != 0) {
    throw std::runtime_error("load_signal: bad magic in " + path);
  }
  const std::uint32_t version = get_u32<std::runtime_error>(in, "version");
  if (version != kFormatVersion) {
    throw std::runtime_error("load_signal: unsupported version");
  }
  const std::uint32_t b = get_u32<std::runtime_error>(in, "bandwidth");
  const std::uint32_t k = get_u32<std::runtime_error>(in, "channels");
  if (b == 0 || k == 0 || b > (1u << 16)) {
    throw std::runtime_error("load_signal: implausible header");
  }
  SphericalSignal sig(SphericalGrid(b), k);
  std::vector<float> samples(sig.values().size());
  get_f32_block<std::runtime_error>(in, samples.data(), samples.size(),
                                    "samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    sig.values()[i] = static_cast<double>(samples[i]);
  }
  char extra;
  in.read(&extra, 1);
  if (in.gcount() != 0) {
    throw std::runtime_error("load_signal: trailing bytes in " + path);
  }
  return sig;
}

void save_weights(const NetworkWeights& net, const std::string& path) {
  net.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_weights: cannot open " + path);
  out.write(kWeightMagic, 4);
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(net.layers.size()));
  put_u32(out, static_cast<std::uint32_t>(net.taps.size()));
  for (const LayerSpec& s : net.layers) {
    put_u32(out, static_cast<std::uint32_t>(s.kind));
    put_u32(out, s.in_channels);
    put_u32(out, s.out_channels);
    put_u32(out, s.in_resolution);
    put_u32(out, s.out_resolution);
    put_u32(out, s.downsample ? 1 : 0);
    put_u64(out, s.param_count());
  }
  for (const TapSpec& t : net.taps) {
    put_u32(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put_u64(out, t.layer);
  }
  for (const std::vector<float>& block : net.params) {
    for (float v : block) put_f32(out, v);
  }
  if (!out) throw std::runtime_error("save_weights: write failed on " + path);
}

NetworkWeights load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WeightFormatError("load_weights: cannot open " + path);
  char magic[4];
  read_exact<WeightFormatError>(in, magic, 4, "weight magic");
  if (std::memcmp(magic, kWeightMagic, 4) != 0) {
    throw WeightFormatError("load_weights: bad magic in " + path);
  }
  const std::uint32_t version = get_u32<WeightFormatError>(in, "version");
  if (version != kFormatVersion) {
    throw WeightFormatError("load_weights: unsupported version");
  }
  const std::uint32_t layer_count =
      get_u32<WeightFormatError>(in, "layer count");
  const std::uint32_t tap_count = get_u32<WeightFormatError>(in, "tap count");
  if (layer_count == 0 || layer_count > 4096 || tap_count > 4096) {
    throw WeightFormatError("load_weights: implausible header");
  }

  NetworkWeights net;
  net.layers.reserve(layer_count);
  std::vector<std::uint64_t> declared_sizes(layer_count);
  for (std::uint32_t i = 0; i < layer_count; ++i) {
    LayerSpec s;
    const std::uint32_t kind = get_u32<WeightFormatError>(in, "layer kind");
    if (kind > static_cast<std::uint32_t>(LayerKind::kDense)) {
      throw WeightFormatError("load_weights: unknown layer kind");
    }
    s.kind = static_cast<LayerKind>(kind);
    s.in_channels = get_u32<WeightFormatError>(in, "layer channels");
    s.out_channels = get_u32<WeightFormatError>(in, "layer channels");
    s.in_resolution = get_u32<WeightFormatError>(in, "layer resolution");
    s.out_resolution = get_u32<WeightFormatError>(in, "layer resolution");
    s.downsample = get_u32<WeightFormatError>(in, "layer flags") != 0;
    declared_sizes[i] = get_u64<WeightFormatError>(in, "tensor size");
    if (declared_sizes[i] != s.param_count()) {
      throw WeightShapeError(
          "load_weights: tensor size does not match layer shape");
    }
    net.layers.push_back(s);
  }
  for (std::uint32_t i = 0; i < tap_count; ++i) {
    const std::uint32_t len = get_u32<WeightFormatError>(in, "tap name");
    if (len == 0 || len > 256) {
      throw WeightFormatError("load_weights: implausible tap name length");
    }
    TapSpec t;
    t.name.resize(len);
    read_exact<WeightFormatError>(in, t.name.data(), len, "tap name");
    t.layer = static_cast<std::size_t>(get_u64<WeightFormatError>(in, "tap"));
    net.taps.push_back(t);
  }
  net.params.resize(layer_count);
  for (std::uint32_t i = 0; i < layer_count; ++i) {
    net.params[i].resize(declared_sizes[i]);
    get_f32_block<WeightTruncatedError>(in, net.params[i].data(),
                                        net.params[i].size(), "tensor data");
  }
  check_trailing(in, "weight tensors");
  try {
    net.validate();
  } catch (const std::invalid_argument& e) {
    throw WeightShapeError(std::string("load_weights: ") + e.what());
  }
  return net;
}

}  // namespace sphalign

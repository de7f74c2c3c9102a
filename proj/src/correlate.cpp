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

#include "sphalign/correlate.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "sphalign/fft.hpp"
#include "sphalign/kernels.hpp"
#include "sphalign/wigner.hpp"

namespace sphalign {

namespace {

constexpr double kPi = std::numbers::pi;

// Above this bandwidth the full d-table would be hundreds of megabytes;
// stream per-beta planes instead of caching.
constexpr std::size_t kMaxCachedTableBandwidth = 40;

std::vector<double> correlation_betas(std::size_t bandwidth) {
  const std::size_t m = 2 * bandwidth;
  std::vector<double> betas(m);
  for (std::size_t b = 0; b < m; ++b) {
    betas[b] = kPi * (2.0 * static_cast<double>(b) + 1.0) /
               (2.0 * static_cast<double>(m));
  }
  return betas;
}

const WignerTables* cached_tables(std::size_t bandwidth) {
  if (bandwidth > kMaxCachedTableBandwidth) return nullptr;
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<WignerTables>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(bandwidth);
  if (it == cache.end()) {
    it = cache
             .emplace(bandwidth, std::make_unique<WignerTables>(
                                     bandwidth, correlation_betas(bandwidth)))
             .first;
  }
  return it->second.get();
}

// Wrap-aware circular distance in grid cells.
long circ_dist(long a, long b, long m) {
  long d = std::abs(a - b) % m;
  return std::min(d, m - d);
}

// 3-point parabola vertex offset in [-0.5, 0.5].
double parabola_offset(double lo, double mid, double hi) {
  const double denom = lo - 2.0 * mid + hi;
  if (denom >= -1e-300) return 0.0;  // not a strict local max
  double d = 0.5 * (lo - hi) / denom;
  return std::min(0.5, std::max(-0.5, d));
}

}  // namespace

double CorrelationVolume::alpha(std::size_t a) const {
  return 2.0 * kPi * static_cast<double>(a) /
         static_cast<double>(samples_per_axis());
}

double CorrelationVolume::beta(std::size_t b) const {
  const double m = static_cast<double>(samples_per_axis());
  return kPi * (2.0 * static_cast<double>(b) + 1.0) / (2.0 * m);
}

double CorrelationVolume::gamma(std::size_t c) const {
  return 2.0 * kPi * static_cast<double>(c) /
         static_cast<double>(samples_per_axis());
}

CorrelationVolume correlate(const SphericalSignal& f1,
                            const SphericalSignal& f2) {
  if (!(f1.grid() == f2.grid()) || f1.channels() != f2.channels()) {
    throw std::invalid_argument("correlate: grid/channel mismatch");
  }
  const std::size_t b_lim = f1.grid().bandwidth();
  const std::size_t m_ax = 2 * b_lim;
  const long bl = static_cast<long>(b_lim);

  const HarmonicCoeffs c1 = forward_sht(f1);
  const HarmonicCoeffs c2 = forward_sht(f2);

  // T_l(m, n) = sum_k c1_k(l, m) * conj(c2_k(l, n)), per-degree planes in
  // the same (2l+1)^2 layout as the Wigner d planes.
  std::vector<std::vector<cplx>> t(b_lim);
  for (std::size_t l = 0; l < b_lim; ++l) {
    const long ll = static_cast<long>(l);
    t[l].assign((2 * l + 1) * (2 * l + 1), cplx{});
    for (std::size_t k = 0; k < f1.channels(); ++k) {
      for (long m = -ll; m <= ll; ++m) {
        const cplx a = c1.at(k, l, m);
        for (long n = -ll; n <= ll; ++n) {
          t[l][static_cast<std::size_t>((m + ll) * (2 * ll + 1) + (n + ll))] +=
              a * std::conj(c2.at(k, l, n));
        }
      }
    }
  }

  const WignerTables* tables = cached_tables(b_lim);
  const std::vector<double> betas = correlation_betas(b_lim);

  CorrelationVolume vol(b_lim);
  const long dim = 2 * bl - 1;  // orders m, n in [-(B-1), B-1]
  std::vector<cplx> s(static_cast<std::size_t>(dim * dim));
  std::vector<cplx> fbuf(m_ax * m_ax);

  for (std::size_t bb = 0; bb < m_ax; ++bb) {
    std::fill(s.begin(), s.end(), cplx{});
    WignerStack stack(betas[bb]);
    for (std::size_t l = 0; l < b_lim; ++l) {
      const long ll = static_cast<long>(l);
      const double* dplane;
      if (tables != nullptr) {
        dplane = tables->plane(bb, l);
      } else {
        if (l > 0) stack.advance();
        dplane = stack.plane().data();
      }
      // Row (m): contiguous over n in both the d plane and T plane.
      for (long m = -ll; m <= ll; ++m) {
        cplx* dst =
            s.data() + (m + bl - 1) * dim + (bl - 1 - ll);
        const double* drow = dplane + (m + ll) * (2 * ll + 1);
        const cplx* trow = t[l].data() + (m + ll) * (2 * ll + 1);
        kernels::fma_rc(dst, drow, trow, static_cast<std::size_t>(2 * ll + 1));
      }
    }

    // G(alpha, gamma) = sum_{m,n} S(m, n) e^{i(m alpha + n gamma)}:
    // scatter orders into FFT bins mod M and run an unnormalized inverse
    // 2D transform.
    std::fill(fbuf.begin(), fbuf.end(), cplx{});
    for (long m = -(bl - 1); m <= bl - 1; ++m) {
      const std::size_t im = static_cast<std::size_t>((m + 2 * bl) % (2 * bl));
      for (long n = -(bl - 1); n <= bl - 1; ++n) {
        const std::size_t in = static_cast<std::size_t>((n + 2 * bl) % (2 * bl));
        fbuf[im * m_ax + in] =
            s[static_cast<std::size_t>((m + bl - 1) * dim + (n + bl - 1))];
      }
    }
    fft::transform_2d(fbuf.data(), m_ax, m_ax, fft::kBackward);
    for (std::size_t a = 0; a < m_ax; ++a) {
      for (std::size_t c = 0; c < m_ax; ++c) {
        vol.at(a, bb, c) = fbuf[a * m_ax + c].real();
      }
    }
  }
  return vol;
}

ArgmaxResult argmax_rotation(const CorrelationVolume& g) {
  const std::size_t m_ax = g.samples_per_axis();
  const std::vector<double>& v = g.values();

  std::size_t best = 0;
  double vmax = v[0], vmin = v[0];
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > vmax) {
      vmax = v[i];
      best = i;
    }
    vmin = std::min(vmin, v[i]);
  }

  ArgmaxResult res;
  res.c = best % m_ax;
  res.a = (best / m_ax) % m_ax;
  res.b = best / (m_ax * m_ax);
  res.euler = g.euler_of(res.a, res.b, res.c);
  res.rotation = Rotation::from_euler(res.euler);
  res.peak = vmax;

  const double range = vmax - vmin;
  if (range <= 1e-12 * std::max(std::abs(vmax), 1.0)) {
    res.degenerate = true;
    return res;
  }

  // Flag symmetric inputs: a near-peak cell far (> 30 deg geodesic) from
  // the argmax means the maximum is not angularly localized.
  const double near_thresh = vmax - 1e-3 * range;
  const long ml = static_cast<long>(m_ax);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < near_thresh || i == best) continue;
    const long c = static_cast<long>(i % m_ax);
    const long a = static_cast<long>((i / m_ax) % m_ax);
    const long b = static_cast<long>(i / (m_ax * m_ax));
    // Cheap prefilter: adjacent cells never flag.
    if (circ_dist(a, static_cast<long>(res.a), ml) <= 2 &&
        circ_dist(c, static_cast<long>(res.c), ml) <= 2 &&
        std::abs(b - static_cast<long>(res.b)) <= 2) {
      continue;
    }
    const Rotation other = Rotation::from_euler(
        g.euler_of(static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                   static_cast<std::size_t>(c)));
    if (geodesic_distance(other, res.rotation) > kPi / 6.0) {
      res.degenerate = true;
      break;
    }
  }
  return res;
}

namespace {

PoseEstimate pipeline(const SphericalSignal& f1, const SphericalSignal& f2,
                      std::size_t upsample_factor, bool refine) {
  const SphericalSignal u1 = upsample_bicubic(f1, upsample_factor);
  const SphericalSignal u2 = upsample_bicubic(f2, upsample_factor);
  const CorrelationVolume g = correlate(u1, u2);
  const ArgmaxResult am = argmax_rotation(g);

  EulerZYZ e = am.euler;
  if (refine && !am.degenerate) {
    const std::size_t m_ax = g.samples_per_axis();
    const std::size_t a = am.a, b = am.b, c = am.c;
    const double cell_ag = 2.0 * kPi / static_cast<double>(m_ax);
    const double cell_b = kPi / static_cast<double>(m_ax);

    const double da = parabola_offset(g.at((a + m_ax - 1) % m_ax, b, c),
                                      g.at(a, b, c),
                                      g.at((a + 1) % m_ax, b, c));
    e.alpha += da * cell_ag;
    const double dc = parabola_offset(g.at(a, b, (c + m_ax - 1) % m_ax),
                                      g.at(a, b, c),
                                      g.at(a, b, (c + 1) % m_ax));
    e.gamma += dc * cell_ag;
    if (b > 0 && b + 1 < m_ax) {
      const double db = parabola_offset(g.at(a, b - 1, c), g.at(a, b, c),
                                        g.at(a, b + 1, c));
      e.beta += db * cell_b;
    }
  }

  PoseEstimate est;
  // correlate() peaks where Lambda_R f2 matches f1; report the rotation
  // taking f1 onto f2, which is the inverse.
  est.rotation = Rotation::from_euler(e).inverse();
  est.peak = am.peak;
  est.degenerate = am.degenerate;
  return est;
}

}  // namespace

PoseEstimate estimate_relative_pose(const SphericalSignal& f1,
                                    const SphericalSignal& f2,
                                    std::size_t upsample_factor, bool refine) {
  return pipeline(f1, f2, upsample_factor, refine);
}

PoseEstimate align_mesh_pair(const SphericalSignal& f, const SphericalSignal& m,
                             std::size_t upsample_factor, bool refine) {
  return pipeline(f, m, upsample_factor, refine);
}

PoseEstimate align_map_to_mesh(const SphericalSignal& f,
                               const SphericalSignal& m,
                               std::size_t upsample_factor, bool refine) {
  return pipeline(f, m, upsample_factor, refine);
}

}  // namespace sphalign

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

#include "sphalign/sht.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sphalign/fft.hpp"
#include "sphalign/kernels.hpp"

namespace sphalign {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt4Pi = 0.28209479177387814;  // 1/sqrt(4*pi)
}  // namespace

double HarmonicCoeffs::conjugate_symmetry_residual() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < channels_; ++k) {
    for (std::size_t l = 0; l < bandwidth_; ++l) {
      for (long m = 1; m <= static_cast<long>(l); ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        const cplx expect = sign * std::conj(at(k, l, m));
        worst = std::max(worst, std::abs(at(k, l, -m) - expect));
      }
    }
  }
  return worst;
}

ShtPlan::ShtPlan(std::size_t bandwidth)
    : bandwidth_(bandwidth), grid_(bandwidth) {
  const std::size_t b = bandwidth_;
  const std::size_t n = grid_.resolution();
  tables_.resize(b);
  for (std::size_t m = 0; m < b; ++m) tables_[m].assign((b - m) * n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::cos(grid_.colatitude(i));
    const double s = std::sin(grid_.colatitude(i));
    double pmm = kInvSqrt4Pi;
    for (std::size_t m = 0; m < b; ++m) {
      tables_[m][0 * n + i] = pmm;
      if (m + 1 < b) {
        double p_prev = pmm;
        double p_curr = std::sqrt(2.0 * m + 3.0) * x * pmm;
        tables_[m][1 * n + i] = p_curr;
        for (std::size_t l = m + 2; l < b; ++l) {
          const double dl = static_cast<double>(l);
          const double dm = static_cast<double>(m);
          const double alpha =
              std::sqrt((4.0 * dl * dl - 1.0) / (dl * dl - dm * dm));
          const double beta = std::sqrt(
              (2.0 * dl + 1.0) * ((dl - 1.0) * (dl - 1.0) - dm * dm) /
              ((2.0 * dl - 3.0) * (dl * dl - dm * dm)));
          const double p_next = alpha * x * p_curr - beta * p_prev;
          tables_[m][(l - m) * n + i] = p_next;
          p_prev = p_curr;
          p_curr = p_next;
        }
      }
      // Diagonal step includes the Condon-Shortley phase.
      pmm *= -std::sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0)) * s;
    }
  }
}

HarmonicCoeffs ShtPlan::forward(const SphericalSignal& signal) const {
  const std::size_t b = bandwidth_;
  const std::size_t n = grid_.resolution();
  const std::size_t k_ch = signal.channels();
  HarmonicCoeffs coeffs(b, k_ch);

  std::vector<cplx> row(n);
  std::vector<cplx> cols(b * n);  // cols[m*n + i] = w_i (2pi/n) F_i(m)

  for (std::size_t k = 0; k < k_ch; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double* src = signal.channel(k) + i * n;
      for (std::size_t j = 0; j < n; ++j) row[j] = cplx(src[j], 0.0);
      fft::transform_1d(row.data(), n, fft::kForward);
      const double wa = grid_.cell_area(i);
      for (std::size_t m = 0; m < b; ++m) cols[m * n + i] = wa * row[m];
    }
    for (std::size_t m = 0; m < b; ++m) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      for (std::size_t l = m; l < b; ++l) {
        const cplx c = kernels::dot_rc(legendre_row(m, l), cols.data() + m * n, n);
        coeffs.at(k, l, static_cast<long>(m)) = c;
        if (m > 0) {
          coeffs.at(k, l, -static_cast<long>(m)) = sign * std::conj(c);
        }
      }
    }
  }
  return coeffs;
}

SphericalSignal ShtPlan::inverse(const HarmonicCoeffs& coeffs) const {
  const std::size_t b = bandwidth_;
  const std::size_t n = grid_.resolution();
  const std::size_t k_ch = coeffs.channels();
  SphericalSignal signal(grid_, k_ch);

  std::vector<cplx> hpos(b * n);
  std::vector<cplx> hneg(b * n);
  std::vector<cplx> row(n);

  for (std::size_t k = 0; k < k_ch; ++k) {
    std::fill(hpos.begin(), hpos.end(), cplx{});
    std::fill(hneg.begin(), hneg.end(), cplx{});
    for (std::size_t m = 0; m < b; ++m) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      for (std::size_t l = m; l < b; ++l) {
        kernels::caxpy_r(hpos.data() + m * n,
                         coeffs.at(k, l, static_cast<long>(m)),
                         legendre_row(m, l), n);
        if (m > 0) {
          // P~_{l,-m} = (-1)^m P~_{l,m}
          kernels::caxpy_r(hneg.data() + m * n,
                           sign * coeffs.at(k, l, -static_cast<long>(m)),
                           legendre_row(m, l), n);
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(row.begin(), row.end(), cplx{});
      row[0] = hpos[0 * n + i];
      for (std::size_t m = 1; m < b; ++m) {
        row[m] = hpos[m * n + i];
        row[n - m] = hneg[m * n + i];
      }
      fft::transform_1d(row.data(), n, fft::kBackward);
      double* dst = signal.channel(k) + i * n;
      for (std::size_t j = 0; j < n; ++j) dst[j] = row[j].real();
    }
  }
  return signal;
}

const ShtPlan& sht_plan(std::size_t bandwidth) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<ShtPlan>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(bandwidth);
  if (it == cache.end()) {
    it = cache.emplace(bandwidth, std::make_unique<ShtPlan>(bandwidth)).first;
  }
  return *it->second;
}

HarmonicCoeffs forward_sht(const SphericalSignal& signal) {
  if (!signal.all_finite()) {
    throw std::invalid_argument("forward_sht: non-finite input values");
  }
  return sht_plan(signal.grid().bandwidth()).forward(signal);
}

SphericalSignal inverse_sht(const HarmonicCoeffs& coeffs,
                            const SphericalGrid& grid) {
  if (coeffs.bandwidth() != grid.bandwidth()) {
    throw std::invalid_argument("inverse_sht: bandwidth mismatch");
  }
  return sht_plan(grid.bandwidth()).inverse(coeffs);
}

std::vector<double> power_spectrum(const HarmonicCoeffs& coeffs) {
  const std::size_t b = coeffs.bandwidth();
  std::vector<double> spectrum(coeffs.channels() * b, 0.0);
  for (std::size_t k = 0; k < coeffs.channels(); ++k) {
    for (std::size_t l = 0; l < b; ++l) {
      double s = 0.0;
      for (long m = -static_cast<long>(l); m <= static_cast<long>(l); ++m) {
        s += std::norm(coeffs.at(k, l, m));
      }
      spectrum[k * b + l] = s;
    }
  }
  return spectrum;
}

double evaluate_at(const HarmonicCoeffs& coeffs, std::size_t channel,
                   double theta, double phi) {
  const std::size_t b = coeffs.bandwidth();
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  cplx acc{};
  double pmm = kInvSqrt4Pi;
  for (std::size_t m = 0; m < b; ++m) {
    const cplx phase = std::polar(1.0, static_cast<double>(m) * phi);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    double p_prev = 0.0;
    double p_curr = pmm;
    for (std::size_t l = m; l < b; ++l) {
      if (l > m) {
        double p_next;
        if (l == m + 1) {
          p_next = std::sqrt(2.0 * m + 3.0) * x * p_curr;
        } else {
          const double dl = static_cast<double>(l);
          const double dm = static_cast<double>(m);
          const double alpha =
              std::sqrt((4.0 * dl * dl - 1.0) / (dl * dl - dm * dm));
          const double beta = std::sqrt(
              (2.0 * dl + 1.0) * ((dl - 1.0) * (dl - 1.0) - dm * dm) /
              ((2.0 * dl - 3.0) * (dl * dl - dm * dm)));
          p_next = alpha * x * p_curr - beta * p_prev;
        }
        p_prev = p_curr;
        p_curr = p_next;
      }
      const cplx ylm = p_curr * phase;
      acc += coeffs.at(channel, l, static_cast<long>(m)) * ylm;
      if (m > 0) {
        acc += coeffs.at(channel, l, -static_cast<long>(m)) * sign *
               std::conj(ylm);
      }
    }
    pmm *= -std::sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0)) * s;
  }
  return acc.real();
}

SphericalSignal random_bandlimited_signal(std::size_t bandwidth,
                                          std::size_t channels,
                                          unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  HarmonicCoeffs coeffs(bandwidth, channels);
  for (std::size_t k = 0; k < channels; ++k) {
    for (std::size_t l = 0; l < bandwidth; ++l) {
      coeffs.at(k, l, 0) = cplx(normal(rng), 0.0);
      for (long m = 1; m <= static_cast<long>(l); ++m) {
        const cplx c(normal(rng), normal(rng));
        coeffs.at(k, l, m) = c;
        coeffs.at(k, l, -m) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(c);
      }
    }
  }
  return inverse_sht(coeffs, SphericalGrid(bandwidth));
}

}  // namespace sphalign

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

#ifndef SPHALIGN_WIGNER_HPP_
#define SPHALIGN_WIGNER_HPP_

#include <cstddef>
#include <vector>

#include "sphalign/rotation.hpp"
#include "sphalign/sht.hpp"

namespace sphalign {

/// Incremental generator of Wigner small-d planes d^l_{mn}(beta) for
/// l = 0, 1, 2, ... via the three-term recursion in l, seeded with the
/// closed-form boundary values at |m| = l or |n| = l. Convention matches
/// D^l_{mn}(alpha,beta,gamma) = e^{-i m alpha} d^l_{mn}(beta) e^{-i n gamma}
/// acting on orthonormal harmonic coefficients (d^1_{00} = cos beta).
class WignerStack {
 public:
  explicit WignerStack(double beta);

  /// Degree of the current plane; advance() moves to the next one.
  std::size_t degree() const { return level_; }
  void advance();

  /// d^l_{mn} of the current plane; row-major (m + l) * (2l + 1) + (n + l).
  const std::vector<double>& plane() const { return curr_; }
  double at(long m, long n) const {
    const long l = static_cast<long>(level_);
    return curr_[static_cast<std::size_t>((m + l) * (2 * l + 1) + (n + l))];
  }

 private:
  double beta_;
  double cos_beta_;
  double cos_half_;
  double sin_half_;
  std::size_t level_ = 0;
  std::vector<double> curr_;
  std::vector<double> prev_;
};

/// Full d^l(beta) as a (2l+1) x (2l+1) row-major matrix.
std::vector<double> wigner_d(std::size_t l, double beta);

/// Precomputed d^l planes for l < B at a fixed set of colatitudes.
/// Shared read-only by correlation workers.
class WignerTables {
 public:
  WignerTables(std::size_t bandwidth, std::vector<double> betas);

  std::size_t bandwidth() const { return bandwidth_; }
  const std::vector<double>& betas() const { return betas_; }

  /// Plane d^l at betas()[b]; same layout as WignerStack::plane().
  const double* plane(std::size_t b, std::size_t l) const {
    return data_[b].data() + offsets_[l];
  }

 private:
  std::size_t bandwidth_;
  std::vector<double> betas_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<double>> data_;
};

/// Spectral rotation operator: out(l,m) = sum_n D^l_{mn}(R) in(l,n).
/// Exact (no interpolation error).
HarmonicCoeffs rotate_coeffs(const HarmonicCoeffs& coeffs, const Rotation& r);

}  // namespace sphalign

#endif  // SPHALIGN_WIGNER_HPP_

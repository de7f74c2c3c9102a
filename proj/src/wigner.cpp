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

#include "sphalign/wigner.hpp"

#include <cmath>
#include <complex>

namespace sphalign {

namespace {

// Boundary value of d^l_{mn} where |m| = l or |n| = l, from the closed
// forms d^l_{m,l} = sqrt(C(2l, l+m)) cos^{l+m}(b/2) sin^{l-m}(b/2) and
// d^l_{l,n} = sqrt(C(2l, l+n)) cos^{l+n}(b/2) (-sin(b/2))^{l-n}, extended
// by the symmetries d_{mn} = (-1)^{m-n} d_{nm} = d_{-n,-m}.
double boundary_d(long l, long m, long n, double ch, double sh) {
  long cos_pow, sin_pow;
  bool neg_sin;
  if (n == l) {
    cos_pow = l + m;
    sin_pow = l - m;
    neg_sin = false;
  } else if (n == -l) {
    cos_pow = l - m;
    sin_pow = l + m;
    neg_sin = true;
  } else if (m == l) {
    cos_pow = l + n;
    sin_pow = l - n;
    neg_sin = true;
  } else {  // m == -l
    cos_pow = l - n;
    sin_pow = l + n;
    neg_sin = false;
  }
  const double sign = (neg_sin && (sin_pow % 2 != 0)) ? -1.0 : 1.0;
  if (ch == 0.0 && cos_pow > 0) return 0.0;
  if (sh == 0.0 && sin_pow > 0) return 0.0;
  // sqrt of the binomial C(2l, cos_pow) via log-gamma keeps l ~ hundreds
  // in range.
  const double log_binom = std::lgamma(2.0 * l + 1.0) -
                           std::lgamma(cos_pow + 1.0) -
                           std::lgamma(sin_pow + 1.0);
  double log_val = 0.5 * log_binom;
  if (cos_pow > 0) log_val += cos_pow * std::log(ch);
  if (sin_pow > 0) log_val += sin_pow * std::log(sh);
  return sign * std::exp(log_val);
}

}  // namespace

WignerStack::WignerStack(double beta)
    : beta_(beta),
      cos_beta_(std::cos(beta)),
      cos_half_(std::cos(beta / 2.0)),
      sin_half_(std::sin(beta / 2.0)),
      curr_(1, 1.0) {
  // Clean up boundary roundoff so the beta = 0 / pi specializations hold.
  if (std::abs(sin_half_) < 1e-15) sin_half_ = 0.0;
  if (std::abs(cos_half_) < 1e-15) cos_half_ = 0.0;
}

void WignerStack::advance() {
  const long l = static_cast<long>(level_) + 1;
  const std::size_t dim = static_cast<std::size_t>(2 * l + 1);
  std::vector<double> next(dim * dim);

  const double x = cos_beta_;
  for (long m = -l; m <= l; ++m) {
    for (long n = -l; n <= l; ++n) {
      double v;
      if (std::abs(m) == l || std::abs(n) == l) {
        v = boundary_d(l, m, n, cos_half_, sin_half_);
      } else if (l == 1) {
        v = x;  // d^1_{00}; the recursion divides by l - 1
      } else {
        // Interior cell: |m|, |n| <= l-1, so d^{l-1}_{mn} exists in curr_.
        const double dl = static_cast<double>(l);
        const double d1 = curr_[static_cast<std::size_t>(
            (m + l - 1) * (2 * l - 1) + (n + l - 1))];
        double d2 = 0.0;
        if (l >= 2 && std::abs(m) <= l - 2 && std::abs(n) <= l - 2) {
          d2 = prev_[static_cast<std::size_t>((m + l - 2) * (2 * l - 3) +
                                              (n + l - 2))];
        }
        const double num1 =
            (2.0 * dl - 1.0) * (dl * (dl - 1.0) * x - m * n) * d1;
        const double c2 = std::sqrt(
            ((dl - 1.0) * (dl - 1.0) - m * m) *
            ((dl - 1.0) * (dl - 1.0) - n * n));
        const double num2 = dl * c2 * d2;
        const double den =
            (dl - 1.0) * std::sqrt((dl * dl - m * m) * (dl * dl - n * n));
        v = (num1 - num2) / den;
      }
      next[static_cast<std::size_t>((m + l) * (2 * l + 1) + (n + l))] = v;
    }
  }
  prev_ = std::move(curr_);
  curr_ = std::move(next);
  ++level_;
}

std::vector<double> wigner_d(std::size_t l, double beta) {
  WignerStack stack(beta);
  while (stack.degree() < l) stack.advance();
  return stack.plane();
}

WignerTables::WignerTables(std::size_t bandwidth, std::vector<double> betas)
    : bandwidth_(bandwidth), betas_(std::move(betas)) {
  offsets_.resize(bandwidth_ + 1);
  offsets_[0] = 0;
  for (std::size_t l = 0; l < bandwidth_; ++l) {
    offsets_[l + 1] = offsets_[l] + (2 * l + 1) * (2 * l + 1);
  }
  data_.resize(betas_.size());
  for (std::size_t b = 0; b < betas_.size(); ++b) {
    data_[b].resize(offsets_[bandwidth_]);
    WignerStack stack(betas_[b]);
    for (std::size_t l = 0; l < bandwidth_; ++l) {
      if (l > 0) stack.advance();
      std::copy(stack.plane().begin(), stack.plane().end(),
                data_[b].begin() + static_cast<long>(offsets_[l]));
    }
  }
}

HarmonicCoeffs rotate_coeffs(const HarmonicCoeffs& coeffs, const Rotation& r) {
  const std::size_t b = coeffs.bandwidth();
  const std::size_t k_ch = coeffs.channels();
  const EulerZYZ e = r.euler();
  HarmonicCoeffs out(b, k_ch);

  std::vector<cplx> phase_alpha(2 * b + 1);
  std::vector<cplx> phase_gamma(2 * b + 1);
  for (long m = -static_cast<long>(b); m <= static_cast<long>(b); ++m) {
    phase_alpha[m + b] = std::polar(1.0, -m * e.alpha);
    phase_gamma[m + b] = std::polar(1.0, -m * e.gamma);
  }

  WignerStack stack(e.beta);
  std::vector<cplx> g(2 * b + 1);
  for (std::size_t l = 0; l < b; ++l) {
    if (l > 0) stack.advance();
    const long ll = static_cast<long>(l);
    for (std::size_t k = 0; k < k_ch; ++k) {
      for (long n = -ll; n <= ll; ++n) {
        g[n + ll] = phase_gamma[n + b] * coeffs.at(k, l, n);
      }
      for (long m = -ll; m <= ll; ++m) {
        cplx acc{};
        for (long n = -ll; n <= ll; ++n) {
          acc += stack.at(m, n) * g[n + ll];
        }
        out.at(k, l, m) = phase_alpha[m + b] * acc;
      }
    }
  }
  return out;
}

}  // namespace sphalign

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

#ifndef SPHALIGN_KERNELS_HPP_
#define SPHALIGN_KERNELS_HPP_

#include <complex>
#include <cstddef>
#include <string_view>

// Data-parallel inner loops behind the transforms. Each kernel has a scalar
// reference implementation and, where the host supports it, an AVX2 (x86) or
// NEON (aarch64) variant selected once at startup. The variants are
// equivalence-tested against the scalar reference.

namespace sphalign::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i a[i] * b[i], complex b
  cplx (*dot_rc)(const double* a, const cplx* b, std::size_t n);
  // dst[i] += s * x[i], complex scalar s, real x
  void (*caxpy_r)(cplx* dst, cplx s, const double* x, std::size_t n);
  // dst[i] += a[i] * b[i], real a, complex b
  void (*fma_rc)(cplx* dst, const double* a, const cplx* b, std::size_t n);
  // y[i] += s * x[i]
  void (*axpy)(double* y, double s, const double* x, std::size_t n);
  // x[i] = max(x[i], 0)
  void (*relu)(double* x, std::size_t n);
  // y[i] = s * x[i] + o
  void (*scale_offset)(double* y, const double* x, double s, double o,
                       std::size_t n);
};

/// Active kernel set (dispatched on first use).
const KernelTable& active();

/// Scalar reference kernels, always available (used by equivalence tests).
const KernelTable& scalar();

/// AVX2 kernels, or nullptr when the build or host lacks AVX2.
const KernelTable* avx2();

/// NEON kernels, or nullptr off aarch64.
const KernelTable* neon();

/// Name of the active variant: "scalar", "avx2" or "neon".
std::string_view active_name();

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline cplx dot_rc(const double* a, const cplx* b, std::size_t n) {
  return active().dot_rc(a, b, n);
}
inline void caxpy_r(cplx* dst, cplx s, const double* x, std::size_t n) {
  active().caxpy_r(dst, s, x, n);
}
inline void fma_rc(cplx* dst, const double* a, const cplx* b, std::size_t n) {
  active().fma_rc(dst, a, b, n);
}
inline void axpy(double* y, double s, const double* x, std::size_t n) {
  active().axpy(y, s, x, n);
}
inline void relu(double* x, std::size_t n) { active().relu(x, n); }
inline void scale_offset(double* y, const double* x, double s, double o,
                         std::size_t n) {
  active().scale_offset(y, x, s, o, n);
}

}  // namespace sphalign::kernels

#endif  // SPHALIGN_KERNELS_HPP_

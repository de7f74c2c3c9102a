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

// Compiled with -mavx2 -mfma; only reached after a runtime cpuid check.

#include "sphalign/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace sphalign::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// [a0, a0, a1, a1] from two consecutive scalars.
inline __m256d dup2(const double* a) {
  __m256d v = _mm256_castpd128_pd256(_mm_loadu_pd(a));
  return _mm256_permute4x64_pd(v, 0x50);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

cplx dot_rc_avx2(const double* a, const cplx* b, std::size_t n) {
  const double* bd = reinterpret_cast<const double*>(b);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = _mm256_fmadd_pd(dup2(a + i), _mm256_loadu_pd(bd + 2 * i), acc);
  }
  // Lanes: [a*re, a*im, a*re, a*im]
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d s = _mm_add_pd(lo, hi);
  double re = _mm_cvtsd_f64(s);
  double im = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
  for (; i < n; ++i) {
    re += a[i] * b[i].real();
    im += a[i] * b[i].imag();
  }
  return {re, im};
}

void caxpy_r_avx2(cplx* dst, cplx s, const double* x, std::size_t n) {
  double* dd = reinterpret_cast<double*>(dst);
  const __m256d sv = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d d = _mm256_loadu_pd(dd + 2 * i);
    d = _mm256_fmadd_pd(sv, dup2(x + i), d);
    _mm256_storeu_pd(dd + 2 * i, d);
  }
  for (; i < n; ++i) dst[i] += s * x[i];
}

void fma_rc_avx2(cplx* dst, const double* a, const cplx* b, std::size_t n) {
  double* dd = reinterpret_cast<double*>(dst);
  const double* bd = reinterpret_cast<const double*>(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d d = _mm256_loadu_pd(dd + 2 * i);
    d = _mm256_fmadd_pd(dup2(a + i), _mm256_loadu_pd(bd + 2 * i), d);
    _mm256_storeu_pd(dd + 2 * i, d);
  }
  for (; i < n; ++i) {
    dst[i] += cplx(a[i] * b[i].real(), a[i] * b[i].imag());
  }
}

void axpy_avx2(double* y, double s, const double* x, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_fmadd_pd(sv, _mm256_loadu_pd(x + i),
                                _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, v);
  }
  for (; i < n; ++i) y[i] += s * x[i];
}

void relu_avx2(double* x, std::size_t n) {
  const __m256d z = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_max_pd(_mm256_loadu_pd(x + i), z));
  }
  for (; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void scale_offset_avx2(double* y, const double* x, double s, double o,
                       std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  const __m256d ov = _mm256_set1_pd(o);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(sv, _mm256_loadu_pd(x + i), ov));
  }
  for (; i < n; ++i) y[i] = s * x[i] + o;
}

}  // namespace

const KernelTable* avx2() {
  static const KernelTable t{dot_avx2,    dot_rc_avx2, caxpy_r_avx2,
                             fma_rc_avx2, axpy_avx2,   relu_avx2,
                             scale_offset_avx2};
  return &t;
}

}  // namespace sphalign::kernels

#else

namespace sphalign::kernels {
const KernelTable* avx2() { return nullptr; }
}  // namespace sphalign::kernels

#endif

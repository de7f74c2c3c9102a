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

#include "sphalign/kernels.hpp"

#if defined(__aarch64__) || defined(__ARM_NEON)
#include <arm_neon.h>

namespace sphalign::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

cplx dot_rc_neon(const double* a, const cplx* b, std::size_t n) {
  const double* bd = reinterpret_cast<const double*>(b);
  float64x2_t acc = vdupq_n_f64(0.0);  // [re, im]
  std::size_t i = 0;
  for (; i < n; ++i) {
    acc = vfmaq_n_f64(acc, vld1q_f64(bd + 2 * i), a[i]);
  }
  return {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
}

void caxpy_r_neon(cplx* dst, cplx s, const double* x, std::size_t n) {
  double* dd = reinterpret_cast<double*>(dst);
  const float64x2_t sv = {s.real(), s.imag()};
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t d = vld1q_f64(dd + 2 * i);
    vst1q_f64(dd + 2 * i, vfmaq_n_f64(d, sv, x[i]));
  }
}

void fma_rc_neon(cplx* dst, const double* a, const cplx* b, std::size_t n) {
  double* dd = reinterpret_cast<double*>(dst);
  const double* bd = reinterpret_cast<const double*>(b);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t d = vld1q_f64(dd + 2 * i);
    vst1q_f64(dd + 2 * i, vfmaq_n_f64(d, vld1q_f64(bd + 2 * i), a[i]));
  }
}

void axpy_neon(double* y, double s, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_n_f64(vld1q_f64(y + i), vld1q_f64(x + i), s));
  }
  for (; i < n; ++i) y[i] += s * x[i];
}

void relu_neon(double* x, std::size_t n) {
  const float64x2_t z = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmaxq_f64(vld1q_f64(x + i), z));
  }
  for (; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void scale_offset_neon(double* y, const double* x, double s, double o,
                       std::size_t n) {
  const float64x2_t ov = vdupq_n_f64(o);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_n_f64(ov, vld1q_f64(x + i), s));
  }
  for (; i < n; ++i) y[i] = s * x[i] + o;
}

}  // namespace

const KernelTable* neon() {
  static const KernelTable t{dot_neon,    dot_rc_neon, caxpy_r_neon,
                             fma_rc_neon, axpy_neon,   relu_neon,
                             scale_offset_neon};
  return &t;
}

}  // namespace sphalign::kernels

#else

namespace sphalign::kernels {
const KernelTable* neon() { return nullptr; }
}  // namespace sphalign::kernels

#endif

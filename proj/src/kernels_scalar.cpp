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

namespace sphalign::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

cplx dot_rc_scalar(const double* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i] * b[i].real();
    im += a[i] * b[i].imag();
  }
  return {re, im};
}

void caxpy_r_scalar(cplx* dst, cplx s, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += s * x[i];
}

void fma_rc_scalar(cplx* dst, const double* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] += cplx(a[i] * b[i].real(), a[i] * b[i].imag());
  }
}

void axpy_scalar(double* y, double s, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

void relu_scalar(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void scale_offset_scalar(double* y, const double* x, double s, double o,
                         std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = s * x[i] + o;
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable t{dot_scalar,  dot_rc_scalar, caxpy_r_scalar,
                             fma_rc_scalar, axpy_scalar, relu_scalar,
                             scale_offset_scalar};
  return t;
}

}  // namespace sphalign::kernels

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

#include "sphalign/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace sphalign::fft {
namespace {

std::mutex g_planner_mutex;

fftw_plan plan_1d(std::size_t n, int sign) {
  static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(g_planner_mutex);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> scratch(n);
  fftw_complex* s = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan p = fftw_plan_dft_1d(
      static_cast<int>(n), s, s,
      sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

fftw_plan plan_2d(std::size_t n0, std::size_t n1, int sign) {
  static std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(g_planner_mutex);
  auto key = std::make_tuple(n0, n1, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> scratch(n0 * n1);
  fftw_complex* s = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan p = fftw_plan_dft_2d(
      static_cast<int>(n0), static_cast<int>(n1), s, s,
      sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

}  // namespace

void transform_1d(cplx* data, std::size_t n, int sign) {
  fftw_complex* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan_1d(n, sign), d, d);
}

void transform_2d(cplx* data, std::size_t n0, std::size_t n1, int sign) {
  fftw_complex* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan_2d(n0, n1, sign), d, d);
}

}  // namespace sphalign::fft

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

#include <cstdlib>
#include <cstring>

namespace sphalign::kernels {
namespace {

struct Selection {
  const KernelTable* table;
  std::string_view name;
};

Selection select() {
  // SPHALIGN_KERNELS=scalar forces the reference path.
  const char* force = std::getenv("SPHALIGN_KERNELS");
  if (force != nullptr && std::strcmp(force, "scalar") == 0) {
    return {&scalar(), "scalar"};
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    if (const KernelTable* t = avx2()) return {t, "avx2"};
  }
#endif
  if (const KernelTable* t = neon()) return {t, "neon"};
  return {&scalar(), "scalar"};
}

const Selection& selection() {
  static const Selection s = select();
  return s;
}

}  // namespace

const KernelTable& active() { return *selection().table; }

std::string_view active_name() { return selection().name; }

}  // namespace sphalign::kernels

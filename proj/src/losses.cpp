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

#include "sphalign/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sphalign {

namespace {
constexpr double kPi = std::numbers::pi;
}

HuberResult huber(double alpha) {
  if (!std::isfinite(alpha)) {
    throw std::invalid_argument("huber: non-finite input");
  }
  HuberResult r;
  if (std::abs(alpha) <= 1.0) {
    r.value = 0.5 * alpha * alpha;
    r.derivative = alpha;
  } else {
    r.value = std::abs(alpha) - 0.5;
    r.derivative = alpha > 0 ? 1.0 : -1.0;
  }
  return r;
}

EmbeddingLossResult embedding_loss(const SphericalSignal& pred,
                                   const SphericalSignal& target) {
  if (!(pred.grid() == target.grid()) ||
      pred.channels() != target.channels()) {
    throw std::invalid_argument("embedding_loss: shape mismatch");
  }
  const std::size_t n = pred.resolution();
  const double inv_n2 = 1.0 / (static_cast<double>(n) * static_cast<double>(n));

  EmbeddingLossResult out;
  out.gradient.assign(pred.values().size(), 0.0);
  for (std::size_t k = 0; k < pred.channels(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double w = pred.grid().sin_weight(i);
      for (std::size_t j = 0; j < n; ++j) {
        const double rho = pred.at(k, i, j) - target.at(k, i, j);
        const HuberResult h = huber(w * rho);
        out.value += inv_n2 * h.value;
        out.gradient[(k * n + i) * n + j] = inv_n2 * w * h.derivative;
      }
    }
  }
  return out;
}

double symmetry_error(double err) {
  if (!(err >= 0.0 && err <= kPi + 1e-12)) {
    throw std::invalid_argument("symmetry_error: input outside [0, pi]");
  }
  return std::min(err, kPi - err);
}

PoseErrorStats pose_stats(const std::vector<double>& errors_rad,
                          bool fold_symmetry) {
  if (errors_rad.empty()) {
    throw std::invalid_argument("pose_stats: empty error list");
  }
  PoseErrorStats stats;
  stats.errors_deg.reserve(errors_rad.size());
  for (double e : errors_rad) {
    const double folded = fold_symmetry ? symmetry_error(e) : e;
    stats.errors_deg.push_back(folded * 180.0 / kPi);
  }
  std::sort(stats.errors_deg.begin(), stats.errors_deg.end());
  stats.count = stats.errors_deg.size();
  // Lower median keeps even-count results deterministic.
  stats.median_deg = stats.errors_deg[(stats.count - 1) / 2];
  std::size_t n15 = 0, n30 = 0;
  for (double e : stats.errors_deg) {
    if (e <= 15.0) ++n15;
    if (e <= 30.0) ++n30;
  }
  stats.acc_at_15 = static_cast<double>(n15) / static_cast<double>(stats.count);
  stats.acc_at_30 = static_cast<double>(n30) / static_cast<double>(stats.count);
  return stats;
}

}  // namespace sphalign

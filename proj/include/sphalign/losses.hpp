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

#ifndef SPHALIGN_LOSSES_HPP_
#define SPHALIGN_LOSSES_HPP_

#include <cstddef>
#include <vector>

#include "sphalign/signal.hpp"

namespace sphalign {

/// Robust loss with breakpoint 1: 0.5*a^2 for |a| <= 1, |a| - 0.5 beyond.
struct HuberResult {
  double value = 0.0;
  double derivative = 0.0;
};
HuberResult huber(double alpha);

/// Area-weighted robust embedding distance:
/// (1/N^2) sum_{i,j} H(sin(theta_i) * (pred - target)(theta_i, phi_j)),
/// summed over channels, with the analytic gradient w.r.t. pred.
struct EmbeddingLossResult {
  double value = 0.0;
  std::vector<double> gradient;  // same layout as the prediction values
};
EmbeddingLossResult embedding_loss(const SphericalSignal& pred,
                                   const SphericalSignal& target);

/// Fold an alignment error by a half-turn symmetry: min(err, pi - err).
/// Input must lie in [0, pi].
double symmetry_error(double err);

struct PoseErrorStats {
  double median_deg = 0.0;
  double acc_at_15 = 0.0;
  double acc_at_30 = 0.0;
  std::size_t count = 0;
  std::vector<double> errors_deg;  // post-folding, sorted ascending
};

/// Summary statistics over per-pair angular errors (radians). Even counts
/// use the lower median. Accuracies count errors <= threshold.
PoseErrorStats pose_stats(const std::vector<double>& errors_rad,
                          bool fold_symmetry = false);

}  // namespace sphalign

#endif  // SPHALIGN_LOSSES_HPP_

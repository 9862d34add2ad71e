//
// Copyright 2026 The dpngram Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPNGRAM_POLICY_H_
#define DPNGRAM_POLICY_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dpngram/corpus.h"
#include "dpngram/histogram.h"

namespace dpngram {

// Update policies of the contractive set-union framework. Each user moves the
// histogram restricted to their items toward the cutoff vector (Gamma, ...,
// Gamma) with an l2 budget of one.
//
// kL2Descent steps along the normalized gap direction and is l2-contractive.
// kL1Descent fills the smallest gaps first; it is NOT l2-contractive (see
// L1CounterexampleTrace in dpsu.h) and carries no privacy guarantee when
// paired with unit-sensitivity Gaussian noise.
enum class UpdatePolicy { kL1Descent, kL2Descent };

std::string_view PolicyName(UpdatePolicy policy);

using ItemId = TokenId;
using ItemHistogram = WeightedHistogram<ItemId>;

struct PolicyState {
  ItemHistogram histogram;
  double cutoff = 1.0;         // Gamma
  int contribution_bound = 1;  // Delta_0
};

// What one user's update did. `increments[i]` applies to `items[i]`; items
// already at the cutoff are omitted.
struct PolicyStep {
  std::vector<ItemId> items;
  std::vector<double> gaps;
  std::vector<double> increments;
  double lambda = 0.0;
  bool updated = false;
};

// Exact water level for l1-descent: the lambda >= 0 with
// sum_u min(gap_u, lambda)^2 = 1, found by sorting the gaps and solving the
// piecewise quadratic in closed form. Requires ||gaps||_2 > 1.
double SolveDescentLevel(std::span<const double> gaps);

// l1-descent: gaps G[u] = Gamma - H[u] over items below the cutoff; no update
// when ||G||_2 <= 1, otherwise each item gains min(G[u], lambda).
absl::StatusOr<PolicyStep> L1DescentUpdate(PolicyState& state,
                                           std::span<const ItemId> user_items);

// l2-descent: a step of length min(1, ||G||_2) along G / ||G||_2. When
// ||G||_2 <= 1 every gap is consumed and those items land exactly on Gamma.
absl::StatusOr<PolicyStep> L2DescentUpdate(PolicyState& state,
                                           std::span<const ItemId> user_items);

absl::StatusOr<PolicyStep> ApplyPolicy(UpdatePolicy policy, PolicyState& state,
                                       std::span<const ItemId> user_items);

// Runs the policy over users in the given order, starting from an empty
// histogram. Users larger than `contribution_bound` are rejected; truncate
// beforehand.
absl::StatusOr<ItemHistogram> BuildPolicyHistogram(
    UpdatePolicy policy, std::span<const std::vector<ItemId>> ordered_users,
    double cutoff, int contribution_bound);

// Spectral norm of the l1-descent Jacobian at a point where t items reach the
// cutoff with residual gaps `gaps_at_cutoff` and `free_count` = d - t items
// move by lambda. Requires sum gaps^2 + free_count * lambda^2 = 1 (1e-9).
// Equals 1 / sqrt(free_count * lambda^2).
absl::StatusOr<double> JacobianSpectralNorm(
    std::span<const double> gaps_at_cutoff, double lambda, int free_count);

// Random neighboring databases (shared users plus one extra user inserted at a
// random position of a shared order), both histograms built with `policy`.
// Returns the largest ||H1 - H2||_2 seen. Trial 0 is the three-item
// l1-descent counterexample and a quarter of the remaining trials perturb
// that family, so near-cutoff behaviour is always exercised. Zero trials
// return 0.
double ContractivityProbe(UpdatePolicy policy, int trials, std::uint64_t seed);

}  // namespace dpngram

#endif  // DPNGRAM_POLICY_H_

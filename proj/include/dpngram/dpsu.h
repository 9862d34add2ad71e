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

#ifndef DPNGRAM_DPSU_H_
#define DPNGRAM_DPSU_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpngram/policy.h"

namespace dpngram {

struct DpsuOptions {
  double epsilon = 1.0;
  double delta = 4.5399929762484854e-05;  // e^-10
  int contribution_bound = 10;            // Delta_0
  // Gamma. Defaults to rho_PG + 3 sigma.
  std::optional<double> cutoff;
  UpdatePolicy policy = UpdatePolicy::kL2Descent;
  // Permits kL1Descent for experiments. Such releases are flagged as carrying
  // no privacy guarantee.
  bool allow_nonprivate = false;
  std::uint64_t seed = 42;
};

struct DpsuRelease {
  std::vector<ItemId> released;  // ascending
  double sigma = 0.0;
  double rho = 0.0;  // rho_PG
  double cutoff = 0.0;
  std::size_t support_size = 0;
  bool private_guarantee = true;
};

// Policy Gaussian set union: users (truncated to Delta_0 items, processed in
// a seeded pseudo-random order) update the histogram with the l2-descent
// policy; Gaussian noise with sigma = sigma*(eps, delta/2, 1) is added to the
// support only, and items above rho_PG are released. The released set is a
// subset of the union of the users' items.
absl::StatusOr<DpsuRelease> RunPolicyGaussian(
    std::span<const std::vector<ItemId>> user_items, const DpsuOptions& options);

struct CounterexampleStep {
  int user = 0;
  bool extra_user = false;
  std::vector<ItemId> items;
  std::array<double, 3> with_extra{};     // H1 after this user
  std::array<double, 3> without_extra{};  // H2 after this user
  double diff_norm = 0.0;
};

struct CounterexampleTrace {
  std::array<double, 3> diff{};  // H1 - H2 over items (a, b, c)
  double diff_norm = 0.0;
  std::vector<CounterexampleStep> steps;
};

// Replays the three-item, eight-user instance (Gamma = 5, Delta_0 = 3) under
// l1-descent in the listed order and reports the final difference, whose
// norm is about 1.032.
CounterexampleTrace L1CounterexampleTrace();

struct SurchargeRow {
  double epsilon = 0.0;
  int delta0 = 0;
  double rho_pg = 0.0;
  double rho_zero = 0.0;
  double surcharge = 0.0;
  double relative = 0.0;  // surcharge / rho_pg
};

// Policy Gaussian threshold against the zero-mass benchmark for every
// (epsilon, Delta_0) pair, epsilons outermost.
absl::StatusOr<std::vector<SurchargeRow>> SpilloverSurchargeTable(
    std::span<const double> epsilons, std::span<const int> delta0s,
    double delta);

}  // namespace dpngram

#endif  // DPNGRAM_DPSU_H_

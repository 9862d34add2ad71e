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

#include "dpngram/policy.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "dpngram/rng.h"

namespace dpngram {
namespace {

constexpr double kConstraintTolerance = 1e-9;

std::vector<ItemId> Distinct(std::span<const ItemId> items) {
  std::vector<ItemId> out(items.begin(), items.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Collects the items of `user_items` still below the cutoff and their gaps.
absl::StatusOr<PolicyStep> CollectGaps(const PolicyState& state,
                                       std::span<const ItemId> user_items) {
  const std::vector<ItemId> items = Distinct(user_items);
  if (static_cast<int>(items.size()) > state.contribution_bound) {
    return absl::InvalidArgumentError(
        absl::StrCat("user has ", items.size(), " items, above the bound ",
                     state.contribution_bound));
  }
  PolicyStep step;
  for (ItemId item : items) {
    const double value = state.histogram.Get(item);
    if (value < state.cutoff) {
      step.items.push_back(item);
      step.gaps.push_back(state.cutoff - value);
    }
  }
  return step;
}

double Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

void ApplyIncrements(PolicyState& state, PolicyStep& step) {
  for (std::size_t i = 0; i < step.items.size(); ++i) {
    if (step.increments[i] >= step.gaps[i]) {
      state.histogram.Set(step.items[i], state.cutoff);
    } else if (step.increments[i] > 0.0) {
      state.histogram.Add(step.items[i], step.increments[i]);
    }
  }
}

struct NeighborPair {
  std::vector<std::vector<ItemId>> with_extra;
  std::vector<std::vector<ItemId>> without_extra;
  double cutoff = 5.0;
  int bound = 3;
};

NeighborPair AppendixInstance() {
  constexpr ItemId a = 0, b = 1, c = 2;
  NeighborPair pair;
  pair.cutoff = 5.0;
  pair.bound = 3;
  pair.without_extra = {{a, b}, {a, b}, {b, c}, {b, c},
                        {b, c}, {b, c}, {b, c}};
  pair.with_extra = pair.without_extra;
  pair.with_extra.insert(pair.with_extra.begin(), {a, b, c});
  return pair;
}

// Perturbations of the three-item instance: a full-universe extra user first,
// then runs of {a,b} and {b,c} users, with a cutoff that some items reach.
NeighborPair AppendixFamily(Rng& rng) {
  constexpr ItemId a = 0, b = 1, c = 2;
  NeighborPair pair;
  pair.bound = 3;
  pair.cutoff = std::uniform_real_distribution<double>(3.0, 7.0)(rng);
  const int ab = std::uniform_int_distribution<int>(1, 4)(rng);
  const int bc = std::uniform_int_distribution<int>(2, 9)(rng);
  for (int i = 0; i < ab; ++i) pair.without_extra.push_back({a, b});
  for (int i = 0; i < bc; ++i) pair.without_extra.push_back({b, c});
  pair.with_extra = pair.without_extra;
  pair.with_extra.insert(pair.with_extra.begin(), {a, b, c});
  return pair;
}

std::vector<ItemId> RandomSubset(int universe, int max_size, Rng& rng) {
  const int size = std::uniform_int_distribution<int>(1, max_size)(rng);
  std::vector<ItemId> all(universe);
  std::iota(all.begin(), all.end(), ItemId{0});
  std::vector<ItemId> out;
  std::sample(all.begin(), all.end(), std::back_inserter(out), size, rng);
  return out;
}

NeighborPair RandomPair(Rng& rng) {
  NeighborPair pair;
  const int universe = std::uniform_int_distribution<int>(2, 6)(rng);
  pair.bound = std::uniform_int_distribution<int>(1, universe)(rng);
  pair.cutoff = std::uniform_real_distribution<double>(0.3, 5.0)(rng);
  const int shared = std::uniform_int_distribution<int>(1, 15)(rng);
  for (int i = 0; i < shared; ++i) {
    pair.without_extra.push_back(RandomSubset(universe, pair.bound, rng));
  }
  const int position = std::uniform_int_distribution<int>(0, shared)(rng);
  pair.with_extra = pair.without_extra;
  pair.with_extra.insert(pair.with_extra.begin() + position,
                         RandomSubset(universe, pair.bound, rng));
  return pair;
}

}  // namespace

std::string_view PolicyName(UpdatePolicy policy) {
  switch (policy) {
    case UpdatePolicy::kL1Descent:
      return "l1";
    case UpdatePolicy::kL2Descent:
      return "l2";
  }
  return "unknown";
}

double SolveDescentLevel(std::span<const double> gaps) {
  std::vector<double> sorted(gaps.begin(), gaps.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  double saturated = 0.0;  // sum of squares of gaps below the level
  for (std::size_t j = 0; j < n; ++j) {
    const double remaining = 1.0 - saturated;
    if (remaining > 0.0) {
      const double lambda =
          std::sqrt(remaining / static_cast<double>(n - j));
      const bool above_previous = j == 0 || sorted[j - 1] <= lambda;
      if (above_previous && lambda <= sorted[j]) return lambda;
    }
    saturated += sorted[j] * sorted[j];
  }
  // ||gaps|| <= 1: every gap fits; the level is the largest gap.
  return n == 0 ? 0.0 : sorted.back();
}

absl::StatusOr<PolicyStep> L1DescentUpdate(PolicyState& state,
                                           std::span<const ItemId> user_items) {
  absl::StatusOr<PolicyStep> step = CollectGaps(state, user_items);
  if (!step.ok()) return step.status();
  step->increments.assign(step->items.size(), 0.0);
  if (Norm(step->gaps) <= 1.0) return step;
  step->lambda = SolveDescentLevel(step->gaps);
  for (std::size_t i = 0; i < step->items.size(); ++i) {
    step->increments[i] = std::min(step->gaps[i], step->lambda);
  }
  step->updated = true;
  ApplyIncrements(state, *step);
  return step;
}

absl::StatusOr<PolicyStep> L2DescentUpdate(PolicyState& state,
                                           std::span<const ItemId> user_items) {
  absl::StatusOr<PolicyStep> step = CollectGaps(state, user_items);
  if (!step.ok()) return step.status();
  step->increments.assign(step->items.size(), 0.0);
  const double norm = Norm(step->gaps);
  if (norm == 0.0) return step;
  if (norm <= 1.0) {
    step->increments = step->gaps;
  } else {
    for (std::size_t i = 0; i < step->items.size(); ++i) {
      step->increments[i] = step->gaps[i] / norm;
    }
  }
  step->updated = true;
  ApplyIncrements(state, *step);
  return step;
}

absl::StatusOr<PolicyStep> ApplyPolicy(UpdatePolicy policy, PolicyState& state,
                                       std::span<const ItemId> user_items) {
  switch (policy) {
    case UpdatePolicy::kL1Descent:
      return L1DescentUpdate(state, user_items);
    case UpdatePolicy::kL2Descent:
      return L2DescentUpdate(state, user_items);
  }
  return absl::InvalidArgumentError("unknown update policy");
}

absl::StatusOr<ItemHistogram> BuildPolicyHistogram(
    UpdatePolicy policy, std::span<const std::vector<ItemId>> ordered_users,
    double cutoff, int contribution_bound) {
  if (!(cutoff > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("cutoff must be positive, got ", cutoff));
  }
  if (contribution_bound < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "contribution bound must be at least 1, got ", contribution_bound));
  }
  PolicyState state{ItemHistogram(), cutoff, contribution_bound};
  for (const std::vector<ItemId>& items : ordered_users) {
    absl::StatusOr<PolicyStep> step = ApplyPolicy(policy, state, items);
    if (!step.ok()) return step.status();
  }
  return std::move(state.histogram);
}

absl::StatusOr<double> JacobianSpectralNorm(
    std::span<const double> gaps_at_cutoff, double lambda, int free_count) {
  if (free_count < 1) {
    return absl::OutOfRangeError(
        absl::StrCat("free_count must be at least 1, got ", free_count));
  }
  if (!(lambda > 0.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("lambda must be positive, got ", lambda));
  }
  double saturated = 0.0;
  for (double g : gaps_at_cutoff) saturated += g * g;
  const double moving = free_count * lambda * lambda;
  if (std::fabs(saturated + moving - 1.0) > kConstraintTolerance) {
    return absl::OutOfRangeError(absl::StrCat(
        "sum gaps^2 + (d - t) lambda^2 must equal 1, got ",
        saturated + moving));
  }
  return 1.0 / std::sqrt(moving);
}

double ContractivityProbe(UpdatePolicy policy, int trials,
                          std::uint64_t seed) {
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = MakeRng(seed, static_cast<std::uint64_t>(trial));
    NeighborPair pair;
    if (trial == 0) {
      pair = AppendixInstance();
    } else if (trial % 4 == 1) {
      pair = AppendixFamily(rng);
    } else {
      pair = RandomPair(rng);
    }
    absl::StatusOr<ItemHistogram> h1 =
        BuildPolicyHistogram(policy, pair.with_extra, pair.cutoff, pair.bound);
    absl::StatusOr<ItemHistogram> h2 = BuildPolicyHistogram(
        policy, pair.without_extra, pair.cutoff, pair.bound);
    // Generated instances always satisfy the bound and cutoff preconditions.
    if (!h1.ok() || !h2.ok()) continue;
    worst = std::max(worst, L2Diff(*h1, *h2));
  }
  return worst;
}

}  // namespace dpngram

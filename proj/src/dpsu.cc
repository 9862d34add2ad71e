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

#include "dpngram/dpsu.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpngram/calibration.h"
#include "dpngram/histogram.h"
#include "dpngram/rng.h"

namespace dpngram {
namespace {

// Stream ids for the independent random sub-tasks of one run.
constexpr std::uint64_t kOrderStream = 1;
constexpr std::uint64_t kTruncationStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

std::array<double, 3> ThreeItems(const ItemHistogram& h) {
  return {h.Get(0), h.Get(1), h.Get(2)};
}

}  // namespace

absl::StatusOr<DpsuRelease> RunPolicyGaussian(
    std::span<const std::vector<ItemId>> user_items,
    const DpsuOptions& options) {
  if (options.policy == UpdatePolicy::kL1Descent && !options.allow_nonprivate) {
    return absl::FailedPreconditionError(
        "l1-descent is not l2-contractive (three-item counterexample reaches "
        "sensitivity ~1.032), so unit-sensitivity Gaussian noise does not "
        "make it private; pass allow_nonprivate to run it anyway");
  }
  absl::StatusOr<PolicyGaussianThresholds> thresholds = RhoPolicyGaussian(
      options.epsilon, options.delta, options.contribution_bound);
  if (!thresholds.ok()) return thresholds.status();

  DpsuRelease release;
  release.sigma = thresholds->sigma;
  release.rho = thresholds->rho_pg;
  release.cutoff =
      options.cutoff.value_or(thresholds->rho_pg + 3.0 * thresholds->sigma);
  release.private_guarantee = options.policy == UpdatePolicy::kL2Descent;

  // Truncate each user, then shuffle the processing order.
  std::vector<std::vector<ItemId>> users;
  users.reserve(user_items.size());
  const std::uint64_t truncation_seed =
      MixSeed(options.seed, kTruncationStream);
  for (std::size_t i = 0; i < user_items.size(); ++i) {
    std::vector<ItemId> items = user_items[i];
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    Rng rng = MakeRng(truncation_seed, i);
    users.push_back(TruncateItems<ItemId>(items, options.contribution_bound,
                                          rng));
  }
  Rng order_rng = MakeRng(options.seed, kOrderStream);
  std::shuffle(users.begin(), users.end(), order_rng);

  absl::StatusOr<ItemHistogram> histogram = BuildPolicyHistogram(
      options.policy, users, release.cutoff, options.contribution_bound);
  if (!histogram.ok()) return histogram.status();
  release.support_size = histogram->size();

  Rng noise_rng = MakeRng(options.seed, kNoiseStream);
  std::normal_distribution<double> noise(0.0, release.sigma);
  for (ItemId item : histogram->SortedSupport()) {
    if (histogram->Get(item) + noise(noise_rng) > release.rho) {
      release.released.push_back(item);
    }
  }
  return release;
}

CounterexampleTrace L1CounterexampleTrace() {
  constexpr ItemId a = 0, b = 1, c = 2;
  constexpr double kCutoff = 5.0;
  constexpr int kBound = 3;
  const std::vector<std::vector<ItemId>> shared = {
      {a, b}, {a, b}, {b, c}, {b, c}, {b, c}, {b, c}, {b, c}};

  PolicyState with_extra{ItemHistogram(), kCutoff, kBound};
  PolicyState without_extra{ItemHistogram(), kCutoff, kBound};
  CounterexampleTrace trace;

  auto record = [&](int user, bool extra, const std::vector<ItemId>& items) {
    CounterexampleStep step;
    step.user = user;
    step.extra_user = extra;
    step.items = items;
    step.with_extra = ThreeItems(with_extra.histogram);
    step.without_extra = ThreeItems(without_extra.histogram);
    step.diff_norm = L2Diff(with_extra.histogram, without_extra.histogram);
    trace.steps.push_back(std::move(step));
  };

  const std::vector<ItemId> extra = {a, b, c};
  // The fixed instance satisfies every precondition of the update.
  (void)L1DescentUpdate(with_extra, extra);
  record(0, true, extra);
  for (std::size_t i = 0; i < shared.size(); ++i) {
    (void)L1DescentUpdate(with_extra, shared[i]);
    (void)L1DescentUpdate(without_extra, shared[i]);
    record(static_cast<int>(i) + 1, false, shared[i]);
  }
  const std::array<double, 3> h1 = ThreeItems(with_extra.histogram);
  const std::array<double, 3> h2 = ThreeItems(without_extra.histogram);
  for (int i = 0; i < 3; ++i) trace.diff[i] = h1[i] - h2[i];
  trace.diff_norm = L2Diff(with_extra.histogram, without_extra.histogram);
  return trace;
}

absl::StatusOr<std::vector<SurchargeRow>> SpilloverSurchargeTable(
    std::span<const double> epsilons, std::span<const int> delta0s,
    double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  std::vector<SurchargeRow> rows;
  for (double epsilon : epsilons) {
    for (int delta0 : delta0s) {
      absl::StatusOr<PolicyGaussianThresholds> t =
          RhoPolicyGaussian(epsilon, delta, delta0);
      if (!t.ok()) return t.status();
      SurchargeRow row;
      row.epsilon = epsilon;
      row.delta0 = delta0;
      row.rho_pg = t->rho_pg;
      row.rho_zero = t->rho_zero;
      row.surcharge = t->surcharge();
      row.relative = row.surcharge / row.rho_pg;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace dpngram

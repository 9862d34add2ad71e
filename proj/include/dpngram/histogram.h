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

#ifndef DPNGRAM_HISTOGRAM_H_
#define DPNGRAM_HISTOGRAM_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/hash/hash.h"
#include "dpngram/rng.h"

namespace dpngram {

// Sparse item -> non-negative weight map. Absent items have weight zero.
template <typename Item, typename Hash = absl::Hash<Item>>
class WeightedHistogram {
 public:
  using Map = absl::flat_hash_map<Item, double, Hash>;

  double Get(const Item& item) const {
    auto it = weights_.find(item);
    return it == weights_.end() ? 0.0 : it->second;
  }
  bool Contains(const Item& item) const { return weights_.contains(item); }

  void Add(const Item& item, double weight) { weights_[item] += weight; }
  void Set(const Item& item, double weight) { weights_[item] = weight; }

  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }
  const Map& entries() const { return weights_; }

  // Support in ascending item order, for deterministic iteration.
  std::vector<Item> SortedSupport() const {
    std::vector<Item> items;
    items.reserve(weights_.size());
    for (const auto& [item, weight] : weights_) items.push_back(item);
    std::sort(items.begin(), items.end());
    return items;
  }

 private:
  Map weights_;
};

// l2 norm of h1 - h2 over the union of supports.
template <typename Item, typename Hash>
double L2Diff(const WeightedHistogram<Item, Hash>& h1,
              const WeightedHistogram<Item, Hash>& h2) {
  double sum = 0.0;
  for (const auto& [item, weight] : h1.entries()) {
    const double d = weight - h2.Get(item);
    sum += d * d;
  }
  for (const auto& [item, weight] : h2.entries()) {
    if (!h1.Contains(item)) sum += weight * weight;
  }
  return std::sqrt(sum);
}

// Keeps at most `bound` items, chosen uniformly without replacement. The
// input must already be sorted and deduplicated; the kept items stay sorted.
template <typename Item>
std::vector<Item> TruncateItems(std::span<const Item> items, int bound,
                                Rng& rng) {
  const std::size_t limit = static_cast<std::size_t>(std::max(bound, 0));
  if (items.size() <= limit) return {items.begin(), items.end()};
  std::vector<Item> kept;
  kept.reserve(limit);
  std::sample(items.begin(), items.end(), std::back_inserter(kept), limit,
              rng);
  return kept;
}

// Weighted histogram: every user keeps at most `bound` of their distinct
// items (seeded uniform subsample, one stream per user) and adds
// 1/sqrt(|kept|) to each kept item, so one user's contribution has l2 norm
// exactly one. `user_items[i]` must be sorted and free of duplicates.
template <typename Item, typename Hash = absl::Hash<Item>>
WeightedHistogram<Item, Hash> BuildWeightedHistogram(
    std::span<const std::vector<Item>> user_items, int bound,
    std::uint64_t seed) {
  WeightedHistogram<Item, Hash> histogram;
  for (std::size_t i = 0; i < user_items.size(); ++i) {
    const std::vector<Item>& items = user_items[i];
    if (items.empty()) continue;
    Rng rng = MakeRng(seed, i);
    const std::vector<Item> kept =
        TruncateItems<Item>(std::span<const Item>(items), bound, rng);
    const double weight = 1.0 / std::sqrt(static_cast<double>(kept.size()));
    for (const Item& item : kept) histogram.Add(item, weight);
  }
  return histogram;
}

}  // namespace dpngram

#endif  // DPNGRAM_HISTOGRAM_H_

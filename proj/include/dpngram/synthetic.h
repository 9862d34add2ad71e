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

#ifndef DPNGRAM_SYNTHETIC_H_
#define DPNGRAM_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpngram/corpus.h"

namespace dpngram {

enum class CorpusKind { kZipf, kClustered, kHeavyTail };

absl::StatusOr<CorpusKind> ParseCorpusKind(const std::string& name);
std::string CorpusKindName(CorpusKind kind);

struct SyntheticKnobs {
  // Rank-frequency exponent; unset means 1.07 (zipf, clustered) or 1.5
  // (heavy_tail).
  std::optional<double> exponent;
  int min_length = 20;  // tokens per user, uniform in [min, max]
  int max_length = 60;
  // Markov chain over ranks: each step proposes a neighbour within
  // `window` ranks with probability `locality`, otherwise an independent
  // draw; Metropolis acceptance keeps the marginal exactly Zipf.
  double locality = 0.7;
  int window = 3;
  // Clustered corpora only.
  int topics = 10;
  int phrases_per_topic = 20;
  int min_phrase_length = 2;
  int max_phrase_length = 5;
  double phrase_probability = 0.3;  // chance a step emits a whole phrase
  double topic_affinity = 0.8;      // chance a free word comes from the topic

  absl::Status Validate() const;
};

// Synthetic corpus. Words are "w<rank>" with rank 0 the most popular; the
// vocabulary holds all `vocab_size` words in rank order. Each user has an
// independent RNG stream derived from `seed`, so output depends only on the
// arguments.
absl::StatusOr<Corpus> GenerateCorpus(CorpusKind kind, std::size_t n_users,
                                      std::size_t vocab_size,
                                      std::uint64_t seed,
                                      const SyntheticKnobs& knobs = {});

// User set sizes for the set-union benchmark: a discrete Pareto with
// Pr[size >= s] = (min_size / s)^shape, truncated at max_size.
struct ParetoKnobs {
  double shape = 1.0;
  int min_size = 2;
  int max_size = 320;
  double exponent = 1.07;  // item popularity, proportional to 1/rank^exponent
};

// Item sets (sorted, distinct) over a universe of `universe` ranked items.
absl::StatusOr<std::vector<std::vector<std::uint32_t>>> GenerateZipfItemSets(
    std::size_t n_users, std::size_t universe, std::uint64_t seed,
    const ParetoKnobs& knobs = {});

// Least-squares slope of log(count) against log(rank) over the tokens of
// `corpus`, using ranks with a non-zero count.
double RankFrequencySlope(const Corpus& corpus);

}  // namespace dpngram

#endif  // DPNGRAM_SYNTHETIC_H_

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

#ifndef DPNGRAM_AUDIT_H_
#define DPNGRAM_AUDIT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dpngram/corpus.h"
#include "dpngram/dpne.h"

namespace dpngram {

inline constexpr int kCanaryLength = 8;

struct PlantedCorpus {
  Corpus corpus;                  // base users plus the included canaries
  std::vector<bool> included;     // one bit per canary
  std::vector<std::vector<TokenId>> canary_texts;  // ids in corpus.vocab
};

// Builds m canary users "canary<i>" whose kCanaryLength tokens
// "canary<i>_<j>" appear nowhere else, and appends each one to the corpus
// independently with probability 1/2. Every canary token is interned, so
// excluded canaries can still be scored.
absl::StatusOr<PlantedCorpus> PlantCanaries(const Corpus& corpus, int m,
                                            std::uint64_t seed);

// Number of distinct n-grams of `text` (lengths 1..T) found in the releases.
std::size_t CanaryScore(std::span<const TokenId> text,
                        std::span<const LevelRelease> levels);

struct Guess {
  std::size_t index = 0;
  bool included = false;

  friend bool operator==(const Guess&, const Guess&) = default;
};

// Ranks canaries by (score descending, index ascending); guesses "included"
// for the first r/2 and "excluded" for the last r/2.
absl::StatusOr<std::vector<Guess>> GuessFromScores(
    std::span<const double> scores, int r);

// Pr[Bin(r, q) >= v], summed in log space.
double BinomialUpperTail(int r, int v, double q);

// One-run audit bound Pr[W >= v] <= beta + 2 m delta alpha, with
// beta = Pr[Bin(r, e^eps / (1 + e^eps)) >= v] and, unless fixed,
// alpha = max_{1<=i<=m} Pr[v - i <= Bin(r, q) < v] / i. Capped at 1.
absl::StatusOr<double> AuditPValue(int v, int r, double epsilon, double delta,
                                   int m,
                                   std::optional<double> fixed_alpha =
                                       std::nullopt);

struct AuditOptions {
  int canaries = 200;  // m per run
  int runs = 3;
  int guesses = 0;     // r per run; 0 means m / 2
  std::uint64_t seed = 1;
  int threads = 1;
  std::optional<double> fixed_alpha;
  double significance = 0.05;
};

struct AuditRecord {
  int m = 0;  // canaries across all runs
  int runs = 0;
  std::vector<bool> inclusion_bits;
  std::vector<double> scores;
  std::vector<Guess> guesses;  // indices into the concatenated canaries
  int correct = 0;
  int total_guesses = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double p_value = 1.0;
  bool pass = true;  // p_value >= significance

  double CorrectFraction() const {
    return total_guesses == 0
               ? 0.0
               : static_cast<double>(correct) / total_guesses;
  }
};

// Plants fresh canaries in each run, runs AFP-DPNE, scores and guesses, and
// tests the pooled guesses against the (epsilon, delta) envelope with
// m = canaries * runs. Runs are independent and may execute in parallel;
// the result does not depend on the thread count.
absl::StatusOr<AuditRecord> RunAudit(const Corpus& corpus,
                                     const DpneConfig& config,
                                     const AuditOptions& options);

}  // namespace dpngram

#endif  // DPNGRAM_AUDIT_H_

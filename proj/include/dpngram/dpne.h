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

#ifndef DPNGRAM_DPNE_H_
#define DPNGRAM_DPNE_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "absl/container/flat_hash_set.h"
#include "absl/functional/function_ref.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpngram/corpus.h"
#include "dpngram/histogram.h"
#include "dpngram/ngram.h"
#include "dpngram/rng.h"

namespace dpngram {

using NGramHistogram = WeightedHistogram<NGram>;

inline constexpr double kDefaultDelta = 4.5399929762484854e-05;  // e^-10
inline constexpr double kNoPruning = std::numeric_limits<double>::infinity();

// Parameters of one n-gram extraction run. Defaults follow the synthetic
// experiments: six levels, delta = e^-10, eta = 0.01, gamma = 0.3, m = 1.
struct DpneConfig {
  int max_length = 6;                    // T
  std::vector<int> contribution_bounds;  // Delta_1 .. Delta_T, one per level
  double epsilon = 4.0;
  double delta = kDefaultDelta;
  double fip_tolerance = 1.0;  // m; kNoPruning disables pruning
  double ht_discount = 0.3;    // gamma; 0 gives uniform thresholds
  double spurious_fraction = 0.01;  // eta
  std::uint64_t seed = 42;
  // Zero noise and zero thresholds everywhere. Not private; only for the
  // audit's broken-mechanism sanity check.
  bool noiseless = false;

  // Same Delta at every level.
  static DpneConfig WithUniformBound(int bound, int max_length = 6);

  absl::Status Validate() const;
};

struct LevelDiagnostics {
  std::size_t genuine = 0;
  std::size_t spurious = 0;
  std::size_t observed = 0;          // |supp(H_k)|
  std::size_t imputed_margins = 0;   // margin lookups that fell back to 0
  std::size_t threshold_groups = 0;  // distinct tau among unobserved items
};

struct LevelRelease {
  int level = 0;
  std::vector<NGram> released;  // S_k, ascending
  // Noisy values and thresholds of every observed or released item.
  NGramMap<double> noisy_values;
  NGramMap<double> thresholds;
  double rho_base = 0.0;
  double sigma = 0.0;
  std::size_t structural_count = 0;  // |V_k|
  std::size_t candidate_count = 0;   // |V_k'|
  LevelDiagnostics diagnostics;
};

// Lazy candidate set V_k = {(p, u) : p in S_{k-1}, u in S_1,
// (p, u)[2:] in S_{k-1}}. |V_2| can be |S_1|^2, so candidates are enumerated
// on demand, in ascending order, rather than stored.
class StructuralCandidates {
 public:
  // All grams in `prev_release` must share one length k - 1.
  StructuralCandidates(std::span<const NGram> prev_release,
                       std::span<const NGram> unigram_release);

  int level() const { return level_; }
  void ForEach(absl::FunctionRef<void(const NGram&)> fn) const;
  bool Contains(const NGram& gram) const;
  std::size_t Count() const;
  std::vector<NGram> Materialize() const;

 private:
  int level_ = 0;
  std::vector<NGram> prev_sorted_;
  NGramSet prev_;
  absl::flat_hash_set<TokenId> unigrams_;
  // (k-2)-gram overlap -> ascending last tokens completing a gram of S_{k-1}.
  NGramMap<std::vector<TokenId>> extensions_;
};

// margin(g) = noisy_prev[g] - rho_prev for g in S_{k-1}, and
// margin(w) = min(margin(prefix), margin(suffix)). Lookups missing from
// noisy_prev count as margin 0 and set *imputed.
double CandidateMargin(const NGram& gram, const NGramMap<double>& noisy_prev,
                       double rho_prev, bool* imputed = nullptr);

NGramMap<double> ComputeMargins(std::span<const NGram> candidates,
                                const NGramMap<double>& noisy_prev,
                                double rho_prev,
                                std::size_t* imputed_count = nullptr);

// Frequency-informed pruning keeps w iff margin(w) > -m * sigma_prev.
bool FipKeeps(double margin, double tolerance, double sigma_prev);

std::vector<NGram> FipPrune(std::span<const NGram> candidates,
                            const NGramMap<double>& margins, double tolerance,
                            double sigma_prev);

// Heterogeneous threshold rule for one level:
//   tau(w) = rho_base - min(gamma * max(0, margin) / c, rho_base / 2)
// with c the median positive margin over V_k' (1.0 if none). tau depends on
// the margin alone through one fixed expression, so equal margins give
// bit-identical thresholds.
class HtRule {
 public:
  static HtRule Create(std::span<const double> margins, double rho_base,
                       double gamma);

  double Threshold(double margin) const;
  double rho_base() const { return rho_base_; }
  double gamma() const { return gamma_; }
  double median_positive_margin() const { return median_; }

 private:
  HtRule(double rho_base, double gamma, double median)
      : rho_base_(rho_base), gamma_(gamma), median_(median) {}

  double rho_base_;
  double gamma_;
  double median_;
};

NGramMap<double> HtThresholds(std::span<const NGram> candidates,
                              const NGramMap<double>& margins, double rho_base,
                              double gamma);

// A pruned candidate set V_k' with its public thresholds.
class ThresholdedCandidates {
 public:
  virtual ~ThresholdedCandidates() = default;
  // Every candidate with its threshold, in a fixed order.
  virtual void ForEach(
      absl::FunctionRef<void(const NGram&, double)> fn) const = 0;
  virtual std::optional<double> ThresholdOf(const NGram& gram) const = 0;
};

// Candidates held in memory, visited in the order given.
class ExplicitCandidates : public ThresholdedCandidates {
 public:
  ExplicitCandidates(std::span<const NGram> candidates,
                     const NGramMap<double>& thresholds)
      : candidates_(candidates), thresholds_(thresholds) {}

  void ForEach(absl::FunctionRef<void(const NGram&, double)> fn) const override;
  std::optional<double> ThresholdOf(const NGram& gram) const override;

 private:
  std::span<const NGram> candidates_;
  const NGramMap<double>& thresholds_;
};

// Thresholds one level with the output law of the dense mechanism:
// observed items (H[w] > 0) get their own Gaussian draw and pass iff
// H[w] + Z > tau(w); unobserved items are grouped by bit-identical tau and
// each group of size n releases a uniform subset of Binomial(n, p) members
// with p = Phi(-tau / sigma). Released unobserved items get a noisy value
// drawn from N(0, sigma^2) conditioned on exceeding tau. Fails if an
// observed item has no threshold.
absl::StatusOr<LevelRelease> RunLevel(const ThresholdedCandidates& candidates,
                                      const NGramHistogram& histogram,
                                      double sigma, Rng& rng);

absl::StatusOr<LevelRelease> RunLevel(std::span<const NGram> candidates,
                                      const NGramHistogram& histogram,
                                      const NGramMap<double>& thresholds,
                                      double sigma, Rng& rng);

// The canonical mechanism: one Gaussian per candidate, observed or not.
// Only usable when V_k' is small; serves as the reference for RunLevel.
absl::StatusOr<std::vector<NGram>> DenseReferenceLevel(
    std::span<const NGram> candidates, const NGramHistogram& histogram,
    const NGramMap<double>& thresholds, double sigma, Rng& rng);

struct DpneResult {
  std::vector<LevelRelease> levels;
  double sigma_star = 0.0;
  double sigma_per_level = 0.0;

  std::size_t TotalReleased() const;
  std::size_t TotalGenuine() const;
  std::size_t TotalSpurious() const;
};

// Augmented frequency-pruned n-gram extraction. Level 1 releases unigrams
// from the weighted histogram's support above the spillover threshold rho_1.
// Each level k >= 2 enumerates structural candidates, prunes them by margin,
// fixes per-item thresholds from level k-1 outputs, builds the weighted
// histogram over the surviving candidates (each user truncated to Delta_k of
// their candidate k-grams) and thresholds it with RunLevel. Every level uses
// sigma* sqrt(T).
absl::StatusOr<DpneResult> RunAfpDpne(const Corpus& corpus,
                                      const DpneConfig& config);

struct AdaptiveCounterexample {
  double p_in = 0.0;   // Pr[w released | user present, lowered threshold]
  double p_out = 0.0;  // Pr[w released | user absent, base threshold]
  double ratio = 0.0;
  double uniform_ratio = 0.0;  // same pair under one threshold rho
};

// Privacy loss of thresholds that depend on current-level support: a user
// holding a unique item at weight 1/sqrt(Delta_0) both raises its count and
// moves it from the base threshold rho to rho - discount (rho / 2 by
// default).
absl::StatusOr<AdaptiveCounterexample> AdaptiveCounterexampleRatio(
    double sigma, double rho, int delta0,
    std::optional<double> discount = std::nullopt);

// One joint-outcome comparison between RunLevel and DenseReferenceLevel on a
// handful of candidates. A histogram value of 0 marks an unobserved item.
struct EquivalenceCase {
  std::vector<double> histogram_values;
  std::vector<double> thresholds;
  double sigma = 1.0;
};

struct EquivalenceResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 0.0;
  std::vector<std::int64_t> efficient_counts;  // indexed by release bitmask
  std::vector<std::int64_t> dense_counts;
};

absl::StatusOr<EquivalenceResult> RunEquivalenceTest(
    const EquivalenceCase& test_case, int trials, std::uint64_t seed);

// Five configurations over at most eight candidates with varied tau groups.
std::vector<EquivalenceCase> DefaultEquivalenceCases();

}  // namespace dpngram

#endif  // DPNGRAM_DPNE_H_

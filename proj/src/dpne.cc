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

#include "dpngram/dpne.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/str_cat.h"
#include "dpngram/binomial.h"
#include "dpngram/calibration.h"
#include "dpngram/normal.h"
#include "dpngram/stats.h"

namespace dpngram {
namespace {

// RNG stream tags, mixed with the level or trial index.
constexpr std::uint64_t kTruncationStream = 0x7472756e63ULL;
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;

double StandardNormal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

// Draw from N(0, sigma^2) conditioned on exceeding tau.
double TailSample(double tau, double sigma, Rng& rng) {
  if (sigma <= 0.0) return 0.0;
  const double tail = NormalSf(tau / sigma);
  const double u = UniformOpenClosed(rng);
  double value = sigma * NormalUpperQuantile(u * tail);
  if (!(value > tau)) value = std::nextafter(tau, HUGE_VAL);
  return value;
}

// Release probability of an unobserved item.
double ZeroMassPassProbability(double tau, double sigma) {
  if (sigma <= 0.0) return tau < 0.0 ? 1.0 : 0.0;
  return NormalSf(tau / sigma);
}

// `count` distinct ranks from [0, n), ascending (Floyd's algorithm).
std::vector<std::int64_t> UniformRanks(std::int64_t n, std::int64_t count,
                                       Rng& rng) {
  std::vector<std::int64_t> ranks;
  if (count <= 0) return ranks;
  if (count >= n) {
    ranks.resize(n);
    for (std::int64_t i = 0; i < n; ++i) ranks[i] = i;
    return ranks;
  }
  absl::flat_hash_set<std::int64_t> chosen;
  chosen.reserve(count);
  for (std::int64_t j = n - count; j < n; ++j) {
    const std::int64_t t =
        std::uniform_int_distribution<std::int64_t>(0, j)(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  ranks.assign(chosen.begin(), chosen.end());
  std::sort(ranks.begin(), ranks.end());
  return ranks;
}

struct ThresholdGroup {
  double tau = 0.0;
  std::int64_t size = 0;
  std::vector<std::int64_t> chosen;
  std::int64_t seen = 0;
  std::size_t next = 0;
};

// V_k' with thresholds, derived on the fly from structural candidates.
class PipelineCandidates : public ThresholdedCandidates {
 public:
  PipelineCandidates(const StructuralCandidates& structural,
                     const NGramMap<double>& noisy_prev, double rho_prev,
                     double tolerance, double sigma_prev, const HtRule& rule)
      : structural_(structural),
        noisy_prev_(noisy_prev),
        rho_prev_(rho_prev),
        tolerance_(tolerance),
        sigma_prev_(sigma_prev),
        rule_(rule) {}

  void ForEach(
      absl::FunctionRef<void(const NGram&, double)> fn) const override {
    structural_.ForEach([&](const NGram& gram) {
      const double margin = CandidateMargin(gram, noisy_prev_, rho_prev_);
      if (FipKeeps(margin, tolerance_, sigma_prev_)) {
        fn(gram, rule_.Threshold(margin));
      }
    });
  }

  std::optional<double> ThresholdOf(const NGram& gram) const override {
    if (!structural_.Contains(gram)) return std::nullopt;
    const double margin = CandidateMargin(gram, noisy_prev_, rho_prev_);
    if (!FipKeeps(margin, tolerance_, sigma_prev_)) return std::nullopt;
    return rule_.Threshold(margin);
  }

 private:
  const StructuralCandidates& structural_;
  const NGramMap<double>& noisy_prev_;
  double rho_prev_;
  double tolerance_;
  double sigma_prev_;
  const HtRule& rule_;
};

void CountGenuine(const NGramSet& truth, LevelRelease& level) {
  for (const NGram& gram : level.released) {
    if (truth.contains(gram)) {
      ++level.diagnostics.genuine;
    } else {
      ++level.diagnostics.spurious;
    }
  }
}

}  // namespace

DpneConfig DpneConfig::WithUniformBound(int bound, int max_length) {
  DpneConfig config;
  config.max_length = max_length;
  config.contribution_bounds.assign(std::max(max_length, 0), bound);
  return config;
}

absl::Status DpneConfig::Validate() const {
  if (max_length < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("max_length must be >= 1, got ", max_length));
  }
  if (contribution_bounds.size() != static_cast<std::size_t>(max_length)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need one contribution bound per level: got ",
        contribution_bounds.size(), " for max_length ", max_length));
  }
  for (int bound : contribution_bounds) {
    if (bound < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("contribution bounds must be >= 1, got ", bound));
    }
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive and finite, got ", epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  if (!(fip_tolerance > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "fip_tolerance must be positive (or infinite), got ", fip_tolerance));
  }
  if (!(ht_discount >= 0.0) || !std::isfinite(ht_discount)) {
    return absl::InvalidArgumentError(
        absl::StrCat("ht_discount must be finite and >= 0, got ", ht_discount));
  }
  if (!(spurious_fraction > 0.0 && spurious_fraction < 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "spurious_fraction must lie in (0, 1), got ", spurious_fraction));
  }
  return absl::OkStatus();
}

StructuralCandidates::StructuralCandidates(
    std::span<const NGram> prev_release,
    std::span<const NGram> unigram_release)
    : prev_sorted_(prev_release.begin(), prev_release.end()) {
  std::sort(prev_sorted_.begin(), prev_sorted_.end());
  prev_sorted_.erase(std::unique(prev_sorted_.begin(), prev_sorted_.end()),
                     prev_sorted_.end());
  if (prev_sorted_.empty()) return;
  level_ = static_cast<int>(prev_sorted_.front().size()) + 1;
  prev_.insert(prev_sorted_.begin(), prev_sorted_.end());
  for (const NGram& unigram : unigram_release) {
    if (unigram.size() == 1) unigrams_.insert(unigram[0]);
  }
  for (const NGram& gram : prev_sorted_) {
    if (unigrams_.contains(gram.back())) {
      // prev_sorted_ is ascending, so each list is ascending too.
      extensions_[gram.Prefix()].push_back(gram.back());
    }
  }
}

void StructuralCandidates::ForEach(
    absl::FunctionRef<void(const NGram&)> fn) const {
  for (const NGram& prefix : prev_sorted_) {
    auto it = extensions_.find(prefix.Suffix());
    if (it == extensions_.end()) continue;
    for (TokenId token : it->second) fn(prefix.Extend(token));
  }
}

bool StructuralCandidates::Contains(const NGram& gram) const {
  if (level_ == 0 || gram.size() != static_cast<std::size_t>(level_)) {
    return false;
  }
  return unigrams_.contains(gram.back()) && prev_.contains(gram.Prefix()) &&
         prev_.contains(gram.Suffix());
}

std::size_t StructuralCandidates::Count() const {
  std::size_t count = 0;
  for (const NGram& prefix : prev_sorted_) {
    auto it = extensions_.find(prefix.Suffix());
    if (it != extensions_.end()) count += it->second.size();
  }
  return count;
}

std::vector<NGram> StructuralCandidates::Materialize() const {
  std::vector<NGram> out;
  out.reserve(Count());
  ForEach([&](const NGram& gram) { out.push_back(gram); });
  return out;
}

double CandidateMargin(const NGram& gram, const NGramMap<double>& noisy_prev,
                       double rho_prev, bool* imputed) {
  if (imputed != nullptr) *imputed = false;
  auto margin_of = [&](const NGram& part) {
    auto it = noisy_prev.find(part);
    if (it == noisy_prev.end()) {
      if (imputed != nullptr) *imputed = true;
      return 0.0;
    }
    return it->second - rho_prev;
  };
  return std::min(margin_of(gram.Prefix()), margin_of(gram.Suffix()));
}

NGramMap<double> ComputeMargins(std::span<const NGram> candidates,
                                const NGramMap<double>& noisy_prev,
                                double rho_prev, std::size_t* imputed_count) {
  NGramMap<double> margins;
  margins.reserve(candidates.size());
  std::size_t imputed_total = 0;
  for (const NGram& gram : candidates) {
    bool imputed = false;
    margins[gram] = CandidateMargin(gram, noisy_prev, rho_prev, &imputed);
    if (imputed) ++imputed_total;
  }
  if (imputed_count != nullptr) *imputed_count = imputed_total;
  return margins;
}

bool FipKeeps(double margin, double tolerance, double sigma_prev) {
  if (std::isinf(tolerance)) return true;
  return margin > -tolerance * sigma_prev;
}

std::vector<NGram> FipPrune(std::span<const NGram> candidates,
                            const NGramMap<double>& margins, double tolerance,
                            double sigma_prev) {
  std::vector<NGram> kept;
  for (const NGram& gram : candidates) {
    auto it = margins.find(gram);
    const double margin = it == margins.end() ? 0.0 : it->second;
    if (FipKeeps(margin, tolerance, sigma_prev)) kept.push_back(gram);
  }
  return kept;
}

HtRule HtRule::Create(std::span<const double> margins, double rho_base,
                      double gamma) {
  std::vector<double> positive;
  for (double margin : margins) {
    if (margin > 0.0) positive.push_back(margin);
  }
  double median = 1.0;
  if (!positive.empty()) {
    std::sort(positive.begin(), positive.end());
    const std::size_t mid = positive.size() / 2;
    median = positive.size() % 2 == 1
                 ? positive[mid]
                 : 0.5 * (positive[mid - 1] + positive[mid]);
  }
  return HtRule(rho_base, gamma, median);
}

double HtRule::Threshold(double margin) const {
  const double reduction = gamma_ * std::max(0.0, margin) / median_;
  return rho_base_ - std::min(reduction, rho_base_ / 2.0);
}

NGramMap<double> HtThresholds(std::span<const NGram> candidates,
                              const NGramMap<double>& margins, double rho_base,
                              double gamma) {
  std::vector<double> values;
  values.reserve(candidates.size());
  for (const NGram& gram : candidates) {
    auto it = margins.find(gram);
    values.push_back(it == margins.end() ? 0.0 : it->second);
  }
  const HtRule rule = HtRule::Create(values, rho_base, gamma);
  NGramMap<double> thresholds;
  thresholds.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    thresholds[candidates[i]] = rule.Threshold(values[i]);
  }
  return thresholds;
}

void ExplicitCandidates::ForEach(
    absl::FunctionRef<void(const NGram&, double)> fn) const {
  for (const NGram& gram : candidates_) {
    auto it = thresholds_.find(gram);
    if (it != thresholds_.end()) fn(gram, it->second);
  }
}

std::optional<double> ExplicitCandidates::ThresholdOf(
    const NGram& gram) const {
  auto it = thresholds_.find(gram);
  if (it == thresholds_.end()) return std::nullopt;
  return it->second;
}

absl::StatusOr<LevelRelease> RunLevel(const ThresholdedCandidates& candidates,
                                      const NGramHistogram& histogram,
                                      double sigma, Rng& rng) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma must be finite and >= 0, got ", sigma));
  }
  LevelRelease out;
  out.sigma = sigma;

  for (const NGram& gram : histogram.SortedSupport()) {
    const std::optional<double> tau = candidates.ThresholdOf(gram);
    if (!tau.has_value()) {
      return absl::FailedPreconditionError(
          "observed item has no threshold; the histogram must be restricted "
          "to the candidate set");
    }
    const double noisy = histogram.Get(gram) + sigma * StandardNormal(rng);
    out.noisy_values[gram] = noisy;
    out.thresholds[gram] = *tau;
    if (noisy > *tau) out.released.push_back(gram);
  }
  out.diagnostics.observed = histogram.size();

  // Unobserved candidates, grouped by bit-identical threshold.
  std::vector<ThresholdGroup> groups;
  absl::flat_hash_map<std::uint64_t, std::size_t> group_of;
  std::size_t candidate_count = 0;
  candidates.ForEach([&](const NGram& gram, double tau) {
    ++candidate_count;
    if (histogram.Contains(gram)) return;
    auto [it, inserted] =
        group_of.try_emplace(std::bit_cast<std::uint64_t>(tau), groups.size());
    if (inserted) groups.push_back(ThresholdGroup{.tau = tau, .size = 0, .chosen = {}, .seen = 0, .next = 0});
    ++groups[it->second].size;
  });
  out.candidate_count = candidate_count;
  out.diagnostics.threshold_groups = groups.size();

  bool any_chosen = false;
  for (ThresholdGroup& group : groups) {
    const double p = ZeroMassPassProbability(group.tau, sigma);
    const std::int64_t count = SampleBinomial(group.size, p, rng);
    group.chosen = UniformRanks(group.size, count, rng);
    any_chosen = any_chosen || !group.chosen.empty();
  }
  if (any_chosen) {
    candidates.ForEach([&](const NGram& gram, double tau) {
      if (histogram.Contains(gram)) return;
      ThresholdGroup& group =
          groups[group_of.at(std::bit_cast<std::uint64_t>(tau))];
      const std::int64_t rank = group.seen++;
      if (group.next < group.chosen.size() &&
          group.chosen[group.next] == rank) {
        ++group.next;
        out.released.push_back(gram);
        out.noisy_values[gram] = TailSample(tau, sigma, rng);
        out.thresholds[gram] = tau;
      }
    });
  }
  std::sort(out.released.begin(), out.released.end());
  return out;
}

absl::StatusOr<LevelRelease> RunLevel(std::span<const NGram> candidates,
                                      const NGramHistogram& histogram,
                                      const NGramMap<double>& thresholds,
                                      double sigma, Rng& rng) {
  return RunLevel(ExplicitCandidates(candidates, thresholds), histogram, sigma,
                  rng);
}

absl::StatusOr<std::vector<NGram>> DenseReferenceLevel(
    std::span<const NGram> candidates, const NGramHistogram& histogram,
    const NGramMap<double>& thresholds, double sigma, Rng& rng) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma must be finite and >= 0, got ", sigma));
  }
  std::vector<NGram> released;
  for (const NGram& gram : candidates) {
    auto it = thresholds.find(gram);
    if (it == thresholds.end()) {
      return absl::FailedPreconditionError("candidate has no threshold");
    }
    const double noisy = histogram.Get(gram) + sigma * StandardNormal(rng);
    if (noisy > it->second) released.push_back(gram);
  }
  std::sort(released.begin(), released.end());
  return released;
}

std::size_t DpneResult::TotalReleased() const {
  std::size_t total = 0;
  for (const LevelRelease& level : levels) total += level.released.size();
  return total;
}

std::size_t DpneResult::TotalGenuine() const {
  std::size_t total = 0;
  for (const LevelRelease& level : levels) total += level.diagnostics.genuine;
  return total;
}

std::size_t DpneResult::TotalSpurious() const {
  std::size_t total = 0;
  for (const LevelRelease& level : levels) total += level.diagnostics.spurious;
  return total;
}

absl::StatusOr<DpneResult> RunAfpDpne(const Corpus& corpus,
                                      const DpneConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  if (absl::Status s = corpus.Validate(); !s.ok()) return s;
  absl::StatusOr<PrivacyParams> params = PrivacyParams::Create(
      config.epsilon, config.delta, /*sensitivity=*/1.0, config.max_length);
  if (!params.ok()) return params.status();
  absl::StatusOr<CalibrationResult> calibration = Calibrate(*params);
  if (!calibration.ok()) return calibration.status();

  DpneResult result;
  result.sigma_star = calibration->sigma_star;
  result.sigma_per_level = calibration->sigma_per_level;
  const double sigma = config.noiseless ? 0.0 : calibration->sigma_per_level;

  // Level 1: threshold the weighted unigram histogram at rho_1.
  {
    std::vector<std::vector<NGram>> user_grams(corpus.users.size());
    NGramSet truth;
    for (std::size_t i = 0; i < corpus.users.size(); ++i) {
      user_grams[i] = ExtractNgrams(corpus.users[i].tokens, 1);
      truth.insert(user_grams[i].begin(), user_grams[i].end());
    }
    const NGramHistogram histogram = BuildWeightedHistogram<NGram>(
        user_grams, config.contribution_bounds[0],
        MixSeed(config.seed, MixSeed(kTruncationStream, 1)));
    double rho1 = 0.0;
    if (!config.noiseless) {
      absl::StatusOr<double> rho = Rho1(sigma, params->delta_spill,
                                        config.contribution_bounds[0]);
      if (!rho.ok()) return rho.status();
      rho1 = *rho;
    }
    const std::vector<NGram> support = histogram.SortedSupport();
    NGramMap<double> thresholds;
    thresholds.reserve(support.size());
    for (const NGram& gram : support) thresholds[gram] = rho1;
    Rng rng = MakeRng(config.seed, MixSeed(kNoiseStream, 1));
    absl::StatusOr<LevelRelease> level =
        RunLevel(support, histogram, thresholds, sigma, rng);
    if (!level.ok()) return level.status();
    level->level = 1;
    level->rho_base = rho1;
    level->structural_count = support.size();
    CountGenuine(truth, *level);
    result.levels.push_back(*std::move(level));
  }

  for (int k = 2; k <= config.max_length; ++k) {
    const LevelRelease& prev = result.levels.back();
    LevelRelease level;
    level.level = k;
    level.sigma = sigma;
    if (prev.released.empty()) {
      result.levels.push_back(std::move(level));
      continue;
    }
    const StructuralCandidates structural(prev.released,
                                          result.levels.front().released);
    const double rho_prev = prev.rho_base;

    // Pass 1: size of V_k and V_k', positive margins of V_k'.
    std::size_t structural_count = 0;
    std::size_t kept_count = 0;
    std::size_t imputed_count = 0;
    std::vector<double> kept_margins;
    structural.ForEach([&](const NGram& gram) {
      ++structural_count;
      bool imputed = false;
      const double margin =
          CandidateMargin(gram, prev.noisy_values, rho_prev, &imputed);
      if (imputed) ++imputed_count;
      if (FipKeeps(margin, config.fip_tolerance, sigma)) {
        ++kept_count;
        if (margin > 0.0) kept_margins.push_back(margin);
      }
    });
    level.structural_count = structural_count;
    level.diagnostics.imputed_margins = imputed_count;
    if (kept_count == 0) {
      result.levels.push_back(std::move(level));
      continue;
    }

    double rho_base = 0.0;
    if (!config.noiseless) {
      absl::StatusOr<double> rho =
          RhoKgramBase(sigma, config.spurious_fraction,
                       static_cast<double>(prev.released.size()),
                       static_cast<double>(kept_count));
      if (!rho.ok()) return rho.status();
      rho_base = *rho;
    }
    const HtRule rule = HtRule::Create(kept_margins, rho_base,
                                       config.ht_discount);
    const PipelineCandidates candidates(structural, prev.noisy_values,
                                        rho_prev, config.fip_tolerance, sigma,
                                        rule);

    // Each user's distinct k-grams that survive pruning.
    std::vector<std::vector<NGram>> user_grams(corpus.users.size());
    NGramSet truth;
    for (std::size_t i = 0; i < corpus.users.size(); ++i) {
      for (NGram& gram : ExtractNgrams(corpus.users[i].tokens, k)) {
        const bool candidate = candidates.ThresholdOf(gram).has_value();
        truth.insert(gram);
        if (candidate) user_grams[i].push_back(std::move(gram));
      }
    }
    const NGramHistogram histogram = BuildWeightedHistogram<NGram>(
        user_grams, config.contribution_bounds[k - 1],
        MixSeed(config.seed, MixSeed(kTruncationStream, k)));
    Rng rng = MakeRng(config.seed, MixSeed(kNoiseStream, k));
    absl::StatusOr<LevelRelease> run =
        RunLevel(candidates, histogram, sigma, rng);
    if (!run.ok()) return run.status();
    run->level = k;
    run->rho_base = rho_base;
    run->structural_count = structural_count;
    run->diagnostics.imputed_margins = imputed_count;
    CountGenuine(truth, *run);
    result.levels.push_back(*std::move(run));
  }
  return result;
}

absl::StatusOr<AdaptiveCounterexample> AdaptiveCounterexampleRatio(
    double sigma, double rho, int delta0, std::optional<double> discount) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma must be positive and finite, got ", sigma));
  }
  if (!std::isfinite(rho)) {
    return absl::InvalidArgumentError("rho must be finite");
  }
  if (delta0 < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta0 must be >= 1, got ", delta0));
  }
  const double lowered = discount.value_or(rho / 2.0);
  const double weight = 1.0 / std::sqrt(static_cast<double>(delta0));
  AdaptiveCounterexample out;
  out.p_in = NormalSf((rho - lowered - weight) / sigma);
  out.p_out = NormalSf(rho / sigma);
  out.ratio = out.p_in / out.p_out;
  out.uniform_ratio = NormalSf((rho - weight) / sigma) / out.p_out;
  return out;
}

absl::StatusOr<EquivalenceResult> RunEquivalenceTest(
    const EquivalenceCase& test_case, int trials, std::uint64_t seed) {
  const std::size_t n = test_case.histogram_values.size();
  if (n == 0 || n > 16 || test_case.thresholds.size() != n) {
    return absl::InvalidArgumentError(
        "need between 1 and 16 candidates, each with a threshold");
  }
  if (trials < 1) {
    return absl::InvalidArgumentError("trials must be >= 1");
  }
  std::vector<NGram> grams;
  NGramHistogram histogram;
  NGramMap<double> thresholds;
  absl::flat_hash_map<NGram, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    NGram gram{static_cast<TokenId>(i)};
    grams.push_back(gram);
    index[gram] = i;
    thresholds[gram] = test_case.thresholds[i];
    if (test_case.histogram_values[i] > 0.0) {
      histogram.Set(gram, test_case.histogram_values[i]);
    }
  }
  auto mask_of = [&](const std::vector<NGram>& released) {
    std::size_t mask = 0;
    for (const NGram& gram : released) mask |= std::size_t{1} << index[gram];
    return mask;
  };

  EquivalenceResult out;
  out.efficient_counts.assign(std::size_t{1} << n, 0);
  out.dense_counts.assign(std::size_t{1} << n, 0);
  Rng efficient_rng = MakeRng(seed, 1);
  Rng dense_rng = MakeRng(seed, 2);
  for (int t = 0; t < trials; ++t) {
    absl::StatusOr<LevelRelease> efficient = RunLevel(
        grams, histogram, thresholds, test_case.sigma, efficient_rng);
    if (!efficient.ok()) return efficient.status();
    ++out.efficient_counts[mask_of(efficient->released)];
    absl::StatusOr<std::vector<NGram>> dense = DenseReferenceLevel(
        grams, histogram, thresholds, test_case.sigma, dense_rng);
    if (!dense.ok()) return dense.status();
    ++out.dense_counts[mask_of(*dense)];
  }
  const ChiSquareResult chi =
      ChiSquareHomogeneity(out.efficient_counts, out.dense_counts);
  out.statistic = chi.statistic;
  out.degrees_of_freedom = chi.degrees_of_freedom;
  out.p_value = chi.p_value;
  return out;
}

std::vector<EquivalenceCase> DefaultEquivalenceCases() {
  return {
      // One shared threshold, mixed observed and unobserved.
      {{0.0, 0.0, 0.0, 1.2, 0.4, 0.0}, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5}, 1.0},
      // Two threshold groups among unobserved items.
      {{0.0, 0.0, 0.0, 0.0, 0.8, 0.0}, {0.3, 0.3, 1.0, 1.0, 0.3, 0.3}, 1.0},
      // All unobserved, each in its own group.
      {{0.0, 0.0, 0.0, 0.0}, {-0.2, 0.1, 0.6, 1.1}, 0.8},
      // High thresholds, rare unobserved releases.
      {{0.0, 0.0, 0.0, 0.0, 0.0, 2.5, 2.0, 0.0},
       {1.5, 1.5, 1.5, 1.5, 1.5, 2.2, 2.2, 2.2},
       1.0},
      // Negative threshold: unobserved items pass more often than not.
      {{0.0, 0.0, 0.0, 0.7, 0.0}, {-0.4, -0.4, 0.2, 0.2, 0.2}, 0.6},
  };
}

}  // namespace dpngram

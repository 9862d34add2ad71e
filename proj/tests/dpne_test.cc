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
#include <random>
#include <vector>

#include "absl/status/status.h"
#include "dpngram/normal.h"
#include "dpngram/synthetic.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace dpngram {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;
using ::testing::UnorderedElementsAreArray;

constexpr TokenId a = 0, b = 1, c = 2;

// Every length-k gram over tokens 0..alphabet-1, ascending.
std::vector<NGram> AllGrams(int alphabet, int k) {
  std::vector<NGram> out = {NGram()};
  for (int i = 0; i < k; ++i) {
    std::vector<NGram> next;
    for (const NGram& prefix : out) {
      for (int t = 0; t < alphabet; ++t) {
        next.push_back(prefix.Extend(static_cast<TokenId>(t)));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<NGram> RandomSubset(const std::vector<NGram>& all, double keep,
                                Rng& rng) {
  std::vector<NGram> out;
  std::bernoulli_distribution coin(keep);
  for (const NGram& gram : all) {
    if (coin(rng)) out.push_back(gram);
  }
  return out;
}

NGramHistogram HistogramOf(std::vector<std::pair<NGram, double>> entries) {
  NGramHistogram h;
  for (const auto& [gram, value] : entries) h.Set(gram, value);
  return h;
}

// ---------------------------------------------------------------------------
// Structural candidates

TEST(StructuralCandidatesTest, BigramsFromUnigrams) {
  std::vector<NGram> s1 = {NGram{a}, NGram{b}};
  StructuralCandidates v2(s1, s1);
  EXPECT_EQ(v2.level(), 2);
  EXPECT_THAT(v2.Materialize(), ElementsAre(NGram{a, a}, NGram{a, b},
                                            NGram{b, a}, NGram{b, b}));
  EXPECT_EQ(v2.Count(), 4u);
}

TEST(StructuralCandidatesTest, EmptyPreviousRelease) {
  std::vector<NGram> s1 = {NGram{a}};
  StructuralCandidates v(std::vector<NGram>{}, s1);
  EXPECT_THAT(v.Materialize(), IsEmpty());
  EXPECT_FALSE(v.Contains(NGram{a, a}));
}

TEST(StructuralCandidatesTest, LoneBigramHasNoTrigram) {
  std::vector<NGram> prev = {NGram{a, b}};
  std::vector<NGram> s1 = {NGram{a}, NGram{b}, NGram{c}};
  StructuralCandidates v3(prev, s1);
  EXPECT_THAT(v3.Materialize(), IsEmpty());
}

TEST(StructuralCandidatesTest, MatchesExhaustiveEnumeration) {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int alphabet = 1 + trial % 3;
    const int k = 2 + trial % 3;
    const std::vector<NGram> s1 =
        RandomSubset(AllGrams(alphabet, 1), 0.8, rng);
    const std::vector<NGram> prev =
        k == 2 ? s1 : RandomSubset(AllGrams(alphabet, k - 1), 0.6, rng);
    const NGramSet prev_set(prev.begin(), prev.end());
    const NGramSet s1_set(s1.begin(), s1.end());
    std::vector<NGram> expected;
    for (const NGram& w : AllGrams(alphabet, k)) {
      if (prev_set.contains(w.Prefix()) && prev_set.contains(w.Suffix()) &&
          s1_set.contains(NGram{w.back()})) {
        expected.push_back(w);
      }
    }
    StructuralCandidates v(prev, s1);
    EXPECT_EQ(v.Materialize(), expected) << "trial " << trial;
    EXPECT_EQ(v.Count(), expected.size());
    const NGramSet expected_set(expected.begin(), expected.end());
    for (const NGram& w : AllGrams(alphabet, k)) {
      EXPECT_EQ(v.Contains(w), expected_set.contains(w));
    }
  }
}

// ---------------------------------------------------------------------------
// Margins and pruning

TEST(MarginTest, MinimumOfPrefixAndSuffix) {
  NGramMap<double> noisy = {{NGram{a, b}, 12.0}, {NGram{b, c}, 10.5}};
  EXPECT_DOUBLE_EQ(CandidateMargin(NGram{a, b, c}, noisy, 10.0), 0.5);
}

TEST(MarginTest, MissingLookupIsImputedAsZero) {
  NGramMap<double> noisy = {{NGram{a, b}, 12.0}};
  bool imputed = false;
  EXPECT_DOUBLE_EQ(CandidateMargin(NGram{a, b, c}, noisy, 10.0, &imputed),
                   0.0);
  EXPECT_TRUE(imputed);
  noisy[NGram{a, b}] = 7.0;
  EXPECT_DOUBLE_EQ(CandidateMargin(NGram{a, b, c}, noisy, 10.0), -3.0);
}

TEST(MarginTest, BothAtThresholdGiveZero) {
  NGramMap<double> noisy = {{NGram{a}, 4.0}, {NGram{b}, 4.0}};
  bool imputed = true;
  EXPECT_DOUBLE_EQ(CandidateMargin(NGram{a, b}, noisy, 4.0, &imputed), 0.0);
  EXPECT_FALSE(imputed);
}

TEST(MarginTest, ComputeMarginsCountsImputations) {
  NGramMap<double> noisy = {{NGram{a}, 3.0}, {NGram{b}, 5.0}};
  std::vector<NGram> candidates = {NGram{a, b}, NGram{b, c}, NGram{c, c}};
  std::size_t imputed = 0;
  NGramMap<double> margins = ComputeMargins(candidates, noisy, 4.0, &imputed);
  EXPECT_DOUBLE_EQ((margins[NGram{a, b}]), -1.0);
  EXPECT_DOUBLE_EQ((margins[NGram{b, c}]), 0.0);
  EXPECT_DOUBLE_EQ((margins[NGram{c, c}]), 0.0);
  EXPECT_EQ(imputed, 2u);
}

TEST(FipTest, InfiniteToleranceKeepsEverything) {
  std::vector<NGram> candidates = {NGram{a, a}, NGram{a, b}};
  NGramMap<double> margins = {{NGram{a, a}, -1e9}, {NGram{a, b}, -5.0}};
  EXPECT_EQ(FipPrune(candidates, margins, kNoPruning, 3.0), candidates);
}

TEST(FipTest, StrictInequality) {
  std::vector<NGram> candidates = {NGram{a, a}, NGram{a, b}};
  NGramMap<double> margins = {{NGram{a, a}, -1.0}, {NGram{a, b}, -1.0}};
  EXPECT_THAT(FipPrune(candidates, margins, 0.0, 2.0), IsEmpty());
  EXPECT_FALSE(FipKeeps(-2.0, 1.0, 2.0));
  EXPECT_TRUE(FipKeeps(-1.999, 1.0, 2.0));
}

TEST(FipTest, MatchesNaiveFilter) {
  Rng rng(41);
  std::normal_distribution<double> margin(0.0, 3.0);
  const std::vector<NGram> all = AllGrams(4, 3);
  for (double m : {0.0, 0.5, 1.0, 2.0}) {
    NGramMap<double> margins;
    for (const NGram& w : all) margins[w] = margin(rng);
    std::vector<NGram> expected;
    for (const NGram& w : all) {
      if (margins[w] > -m * 1.5) expected.push_back(w);
    }
    const std::vector<NGram> kept = FipPrune(all, margins, m, 1.5);
    EXPECT_EQ(kept, expected);
    EXPECT_LE(kept.size(), all.size());
  }
}

// ---------------------------------------------------------------------------
// Heterogeneous thresholds

TEST(HtTest, NonPositiveMarginGetsBaseThreshold) {
  std::vector<double> margins = {-1.0, 0.0, 2.0};
  const HtRule rule = HtRule::Create(margins, 8.0, 0.3);
  EXPECT_DOUBLE_EQ(rule.Threshold(-1.0), 8.0);
  EXPECT_DOUBLE_EQ(rule.Threshold(0.0), 8.0);
}

TEST(HtTest, CapBindsForHugeMargins) {
  std::vector<double> margins = {1.0};
  const HtRule rule = HtRule::Create(margins, 8.0, 0.3);
  EXPECT_DOUBLE_EQ(rule.Threshold(10.0 * 1.0 / 0.3 * 100), 4.0);
}

TEST(HtTest, ZeroGammaIsUniform) {
  std::vector<double> margins = {0.5, 3.0, 9.0};
  const HtRule rule = HtRule::Create(margins, 6.0, 0.0);
  for (double m : {-2.0, 0.0, 0.5, 3.0, 9.0, 1e6}) {
    EXPECT_DOUBLE_EQ(rule.Threshold(m), 6.0);
  }
}

TEST(HtTest, MedianOfPositiveMargins) {
  std::vector<double> odd = {-5.0, 1.0, 3.0, 10.0};
  EXPECT_DOUBLE_EQ(HtRule::Create(odd, 1.0, 0.3).median_positive_margin(),
                   3.0);
  std::vector<double> even = {2.0, 4.0, -1.0, 6.0, 8.0};
  EXPECT_DOUBLE_EQ(HtRule::Create(even, 1.0, 0.3).median_positive_margin(),
                   5.0);
  std::vector<double> none = {-1.0, 0.0};
  EXPECT_DOUBLE_EQ(HtRule::Create(none, 1.0, 0.3).median_positive_margin(),
                   1.0);
}

TEST(HtTest, DiscountScalesWithMedian) {
  std::vector<double> margins = {2.0};
  const HtRule rule = HtRule::Create(margins, 10.0, 0.3);
  // 10 - 0.3 * 2 / 2.
  EXPECT_DOUBLE_EQ(rule.Threshold(2.0), 9.7);
}

TEST(HtTest, ThresholdsStayWithinBounds) {
  Rng rng(43);
  std::normal_distribution<double> margin(0.5, 4.0);
  const std::vector<NGram> all = AllGrams(5, 2);
  for (double gamma : {0.0, 0.3, 1.0}) {
    NGramMap<double> margins;
    for (const NGram& w : all) margins[w] = margin(rng);
    const NGramMap<double> tau = HtThresholds(all, margins, 7.0, gamma);
    ASSERT_EQ(tau.size(), all.size());
    for (const auto& [w, t] : tau) {
      EXPECT_GE(t, 3.5);
      EXPECT_LE(t, 7.0);
    }
  }
}

TEST(HtTest, ThresholdsIgnoreCandidateOrder) {
  Rng rng(47);
  std::vector<NGram> all = AllGrams(4, 2);
  std::uniform_real_distribution<double> margin(-2.0, 4.0);
  NGramMap<double> margins;
  for (const NGram& w : all) margins[w] = margin(rng);
  const NGramMap<double> before = HtThresholds(all, margins, 5.0, 0.3);
  std::shuffle(all.begin(), all.end(), rng);
  const NGramMap<double> after = HtThresholds(all, margins, 5.0, 0.3);
  for (const auto& [w, t] : before) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(t),
              std::bit_cast<std::uint64_t>(after.at(w)));
  }
}

TEST(HtTest, EqualMarginsGiveIdenticalBits) {
  std::vector<double> margins = {0.1, 0.7, 0.7, 2.3};
  const HtRule rule = HtRule::Create(margins, 5.5, 0.3);
  const double m = 0.1 + 0.6;
  EXPECT_EQ(std::bit_cast<std::uint64_t>(rule.Threshold(m)),
            std::bit_cast<std::uint64_t>(rule.Threshold(m)));
}

// ---------------------------------------------------------------------------
// Level sampler

TEST(RunLevelTest, HighThresholdOnMillionUnobservedReleasesNothing) {
  std::vector<NGram> candidates;
  NGramMap<double> tau;
  for (TokenId i = 0; i < 1000; ++i) {
    for (TokenId j = 0; j < 1000; ++j) {
      candidates.push_back(NGram{i, j});
      tau[candidates.back()] = 10.0;
    }
  }
  Rng rng(1);
  absl::StatusOr<LevelRelease> release =
      RunLevel(candidates, NGramHistogram(), tau, 1.0, rng);
  ASSERT_TRUE(release.ok());
  EXPECT_THAT(release->released, IsEmpty());
  EXPECT_EQ(release->candidate_count, 1000000u);
  EXPECT_EQ(release->diagnostics.threshold_groups, 1u);
}

TEST(RunLevelTest, ObservedItemFarAboveThreshold) {
  const double sigma = 1.5;
  std::vector<NGram> candidates = {NGram{a}};
  NGramMap<double> tau = {{NGram{a}, 3.0}};
  const NGramHistogram h = HistogramOf({{NGram{a}, 3.0 + 6 * sigma}});
  Rng rng(2);
  int released = 0;
  for (int t = 0; t < 1000; ++t) {
    released += RunLevel(candidates, h, tau, sigma, rng)->released.size();
  }
  EXPECT_GE(released, 998);
}

TEST(RunLevelTest, NearZeroNoiseIsExactThresholding) {
  std::vector<NGram> candidates = {NGram{a}, NGram{b}, NGram{c},
                                   NGram{a, a}, NGram{a, b}};
  NGramMap<double> tau = {{NGram{a}, 1.0},    {NGram{b}, 2.0},
                          {NGram{c}, 0.5},    {NGram{a, a}, 0.5},
                          {NGram{a, b}, 0.5}};
  const NGramHistogram h =
      HistogramOf({{NGram{a}, 1.5}, {NGram{b}, 1.5}, {NGram{c}, 0.6}});
  Rng rng(3);
  absl::StatusOr<LevelRelease> release =
      RunLevel(candidates, h, tau, 1e-9, rng);
  ASSERT_TRUE(release.ok());
  EXPECT_THAT(release->released, ElementsAre(NGram{a}, NGram{c}));
  Rng dense_rng(3);
  EXPECT_EQ(*DenseReferenceLevel(candidates, h, tau, 1e-9, dense_rng),
            release->released);
}

TEST(RunLevelTest, ObservedItemWithoutThresholdIsAnError) {
  std::vector<NGram> candidates = {NGram{a}};
  NGramMap<double> tau = {{NGram{a}, 1.0}};
  const NGramHistogram h = HistogramOf({{NGram{b}, 2.0}});
  Rng rng(4);
  EXPECT_EQ(RunLevel(candidates, h, tau, 1.0, rng).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_FALSE(DenseReferenceLevel(std::vector<NGram>{NGram{b}}, h, tau, 1.0,
                                   rng)
                   .ok());
}

TEST(RunLevelTest, SingleUnobservedItemIsBernoulli) {
  const double tau_value = 0.8, sigma = 1.0;
  std::vector<NGram> candidates = {NGram{a}};
  NGramMap<double> tau = {{NGram{a}, tau_value}};
  const double p = NormalSf(tau_value / sigma);
  Rng rng(5);
  const int trials = 100000;
  int released = 0;
  for (int t = 0; t < trials; ++t) {
    released += RunLevel(candidates, NGramHistogram(), tau, sigma, rng)
                    ->released.size();
  }
  EXPECT_NEAR(released, trials * p, 3 * std::sqrt(trials * p * (1 - p)));
}

TEST(RunLevelTest, ReleasedItemsExceedTheirThresholds) {
  std::vector<NGram> candidates;
  NGramMap<double> tau;
  NGramHistogram h;
  for (TokenId i = 0; i < 200; ++i) {
    candidates.push_back(NGram{i});
    tau[NGram{i}] = (i % 3) * 0.5 - 0.3;
    if (i % 4 == 0) h.Set(NGram{i}, 0.7);
  }
  Rng rng(6);
  absl::StatusOr<LevelRelease> release = RunLevel(candidates, h, tau, 1.0, rng);
  ASSERT_TRUE(release.ok());
  EXPECT_FALSE(release->released.empty());
  EXPECT_TRUE(std::is_sorted(release->released.begin(),
                             release->released.end()));
  for (const NGram& w : release->released) {
    ASSERT_TRUE(release->noisy_values.contains(w));
    EXPECT_GT(release->noisy_values.at(w), release->thresholds.at(w));
  }
  EXPECT_EQ(release->diagnostics.observed, 50u);
  EXPECT_EQ(release->diagnostics.threshold_groups, 3u);
}

TEST(RunLevelTest, MatchesDenseReferenceOnSharedThreshold) {
  EquivalenceCase test_case;
  test_case.histogram_values = {0.9, 1.6, 0.0, 0.0, 0.0, 0.0};
  test_case.thresholds = {1.2, 1.2, 1.2, 1.2, 1.2, 1.2};
  test_case.sigma = 1.0;
  absl::StatusOr<EquivalenceResult> result =
      RunEquivalenceTest(test_case, 100000, 11);
  ASSERT_TRUE(result.ok());
  EXPECT_GT(result->p_value, 0.01);
  EXPECT_GT(result->degrees_of_freedom, 10);
}

TEST(RunLevelTest, MatchesDenseReferenceOnDefaultCases) {
  const std::vector<EquivalenceCase> cases = DefaultEquivalenceCases();
  ASSERT_EQ(cases.size(), 5u);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    EXPECT_LE(cases[i].thresholds.size(), 8u);
    absl::StatusOr<EquivalenceResult> result =
        RunEquivalenceTest(cases[i], 100000, MixSeed(99, i));
    ASSERT_TRUE(result.ok());
    EXPECT_GT(result->p_value, 0.01) << "case " << i;
  }
}

TEST(RunLevelTest, LoweringThresholdNeverRemovesAnObservedItem) {
  std::vector<NGram> candidates;
  NGramMap<double> tau;
  NGramHistogram h;
  for (TokenId i = 0; i < 100; ++i) {
    candidates.push_back(NGram{i});
    tau[NGram{i}] = 2.0;
    h.Set(NGram{i}, 0.02 * (i + 1));
  }
  NGramMap<double> lowered = tau;
  for (TokenId i = 0; i < 100; i += 3) lowered[NGram{i}] = 1.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r1(seed);
    Rng r2(seed);
    const std::vector<NGram> base =
        RunLevel(candidates, h, tau, 1.0, r1)->released;
    const std::vector<NGram> more =
        RunLevel(candidates, h, lowered, 1.0, r2)->released;
    for (const NGram& w : base) {
      EXPECT_TRUE(std::binary_search(more.begin(), more.end(), w));
    }
  }
}

TEST(RunLevelTest, DenseReferenceIsMonotoneInThresholds) {
  std::vector<NGram> candidates;
  NGramMap<double> tau;
  NGramHistogram h;
  for (TokenId i = 0; i < 50; ++i) {
    candidates.push_back(NGram{i});
    tau[NGram{i}] = 1.5;
    if (i % 2 == 0) h.Set(NGram{i}, 1.0);
  }
  NGramMap<double> lowered = tau;
  for (TokenId i = 0; i < 50; i += 5) lowered[NGram{i}] = 0.75;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r1(seed);
    Rng r2(seed);
    const auto base = *DenseReferenceLevel(candidates, h, tau, 1.0, r1);
    const auto more = *DenseReferenceLevel(candidates, h, lowered, 1.0, r2);
    for (const NGram& w : base) {
      EXPECT_TRUE(std::binary_search(more.begin(), more.end(), w));
    }
  }
}

// ---------------------------------------------------------------------------
// Full pipeline

Corpus SmallZipf(std::size_t users, std::uint64_t seed) {
  return *GenerateCorpus(CorpusKind::kZipf, users, 60, seed);
}

TEST(AfpDpneTest, ConfigValidation) {
  DpneConfig config = DpneConfig::WithUniformBound(10);
  EXPECT_TRUE(config.Validate().ok());
  config.contribution_bounds.pop_back();
  EXPECT_FALSE(config.Validate().ok());
  config = DpneConfig::WithUniformBound(10);
  config.epsilon = 0.0;
  EXPECT_FALSE(config.Validate().ok());
  config = DpneConfig::WithUniformBound(10);
  config.spurious_fraction = 0.0;
  EXPECT_FALSE(config.Validate().ok());
  config = DpneConfig::WithUniformBound(0);
  EXPECT_FALSE(config.Validate().ok());
  config = DpneConfig::WithUniformBound(10, 0);
  EXPECT_FALSE(config.Validate().ok());
}

TEST(AfpDpneTest, DefaultsMatchPublishedSettings) {
  const DpneConfig config = DpneConfig::WithUniformBound(100);
  EXPECT_EQ(config.max_length, 6);
  EXPECT_DOUBLE_EQ(config.delta, std::exp(-10.0));
  EXPECT_DOUBLE_EQ(config.spurious_fraction, 0.01);
  EXPECT_DOUBLE_EQ(config.ht_discount, 0.3);
  EXPECT_DOUBLE_EQ(config.fip_tolerance, 1.0);
}

TEST(AfpDpneTest, SingleLevelIsUnigramSetUnion) {
  const Corpus corpus = SmallZipf(3000, 1);
  DpneConfig config = DpneConfig::WithUniformBound(50, 1);
  config.epsilon = 4.0;
  absl::StatusOr<DpneResult> result = RunAfpDpne(corpus, config);
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result->levels.size(), 1u);
  const LevelRelease& level = result->levels[0];
  EXPECT_FALSE(level.released.empty());
  EXPECT_EQ(level.diagnostics.spurious, 0u);
  EXPECT_NEAR(result->sigma_per_level, result->sigma_star, 1e-12);
}

TEST(AfpDpneTest, EmptyCorpusGivesEmptyReleases) {
  absl::StatusOr<DpneResult> result =
      RunAfpDpne(Corpus(), DpneConfig::WithUniformBound(10));
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->TotalReleased(), 0u);
  EXPECT_EQ(result->levels.size(), 6u);
}

TEST(AfpDpneTest, ReleaseInvariants) {
  const Corpus corpus = SmallZipf(4000, 2);
  DpneConfig config = DpneConfig::WithUniformBound(40);
  config.epsilon = 4.0;
  absl::StatusOr<DpneResult> result = RunAfpDpne(corpus, config);
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result->levels.size(), 6u);
  EXPECT_NEAR(result->sigma_per_level, result->sigma_star * std::sqrt(6.0),
              1e-12);
  EXPECT_GT(result->levels[1].released.size(), 0u);

  for (std::size_t k = 1; k <= result->levels.size(); ++k) {
    const LevelRelease& level = result->levels[k - 1];
    EXPECT_EQ(level.level, static_cast<int>(k));
    EXPECT_EQ(level.diagnostics.genuine + level.diagnostics.spurious,
              level.released.size());
    EXPECT_EQ(level.diagnostics.imputed_margins, 0u);
    for (const NGram& w : level.released) {
      ASSERT_EQ(w.size(), k);
      EXPECT_GT(level.noisy_values.at(w), level.thresholds.at(w));
    }
    for (const auto& [w, tau] : level.thresholds) {
      EXPECT_GE(tau, level.rho_base / 2);
      EXPECT_LE(tau, level.rho_base);
    }
    if (k >= 2) {
      const auto& prev = result->levels[k - 2].released;
      EXPECT_LE(level.candidate_count, level.structural_count);
      for (const NGram& w : level.released) {
        EXPECT_TRUE(std::binary_search(prev.begin(), prev.end(), w.Prefix()));
        EXPECT_TRUE(std::binary_search(prev.begin(), prev.end(), w.Suffix()));
      }
    }
  }
}

TEST(AfpDpneTest, SpuriousItemsAreUnobservedCandidates) {
  const Corpus corpus = SmallZipf(3000, 3);
  DpneConfig config = DpneConfig::WithUniformBound(40, 3);
  config.epsilon = 2.0;
  config.spurious_fraction = 0.3;  // many spurious releases
  absl::StatusOr<DpneResult> result = RunAfpDpne(corpus, config);
  ASSERT_TRUE(result.ok());
  NGramSet truth;
  for (const UserText& user : corpus.users) {
    for (int k = 1; k <= 3; ++k) {
      for (const NGram& w : ExtractNgrams(user.tokens, k)) truth.insert(w);
    }
  }
  std::size_t spurious = 0;
  for (const LevelRelease& level : result->levels) {
    for (const NGram& w : level.released) {
      if (!truth.contains(w)) ++spurious;
    }
  }
  EXPECT_EQ(spurious, result->TotalSpurious());
  EXPECT_GT(spurious, 0u);
}

TEST(AfpDpneTest, DeterministicForSeed) {
  const Corpus corpus = SmallZipf(1500, 4);
  DpneConfig config = DpneConfig::WithUniformBound(30, 4);
  config.seed = 123;
  absl::StatusOr<DpneResult> first = RunAfpDpne(corpus, config);
  absl::StatusOr<DpneResult> second = RunAfpDpne(corpus, config);
  ASSERT_TRUE(first.ok());
  ASSERT_TRUE(second.ok());
  for (std::size_t k = 0; k < first->levels.size(); ++k) {
    EXPECT_EQ(first->levels[k].released, second->levels[k].released);
  }
}

TEST(AfpDpneTest, NoiselessModeReleasesGroundTruth) {
  const Corpus corpus = SmallZipf(200, 5);
  DpneConfig config = DpneConfig::WithUniformBound(1000, 4);
  config.noiseless = true;
  absl::StatusOr<DpneResult> result = RunAfpDpne(corpus, config);
  ASSERT_TRUE(result.ok());
  for (int k = 1; k <= 4; ++k) {
    NGramSet truth;
    for (const UserText& user : corpus.users) {
      for (const NGram& w : ExtractNgrams(user.tokens, k)) truth.insert(w);
    }
    const LevelRelease& level = result->levels[k - 1];
    EXPECT_THAT(level.released,
                UnorderedElementsAreArray(truth.begin(), truth.end()));
    EXPECT_EQ(level.diagnostics.spurious, 0u);
  }
}

TEST(AfpDpneTest, UniformBaselineUsesBaseThreshold) {
  const Corpus corpus = SmallZipf(2000, 6);
  DpneConfig config = DpneConfig::WithUniformBound(40, 3);
  config.ht_discount = 0.0;
  config.fip_tolerance = kNoPruning;
  absl::StatusOr<DpneResult> result = RunAfpDpne(corpus, config);
  ASSERT_TRUE(result.ok());
  for (const LevelRelease& level : result->levels) {
    if (level.level >= 2) {
      EXPECT_EQ(level.candidate_count, level.structural_count);
    }
    for (const auto& [w, tau] : level.thresholds) {
      EXPECT_EQ(tau, level.rho_base);
    }
  }
}

// ---------------------------------------------------------------------------
// Adaptive thresholding counterexample

TEST(AdaptiveTest, PublishedInstance) {
  absl::StatusOr<AdaptiveCounterexample> result =
      AdaptiveCounterexampleRatio(2.54, 10.0, 100);
  ASSERT_TRUE(result.ok());
  EXPECT_NEAR(result->p_in, 0.0269, 5e-4);
  EXPECT_NEAR(result->p_out / 4.13e-5, 1.0, 0.02);
  EXPECT_NEAR(result->ratio, 651, 5);
  EXPECT_NEAR(result->uniform_ratio, 1.18, 0.02);
}

TEST(AdaptiveTest, ClosedForm) {
  const double sigma = 1.3, rho = 4.0;
  absl::StatusOr<AdaptiveCounterexample> result =
      AdaptiveCounterexampleRatio(sigma, rho, 25);
  ASSERT_TRUE(result.ok());
  EXPECT_DOUBLE_EQ(result->p_in, NormalCdf((0.2 - rho / 2) / sigma));
  EXPECT_DOUBLE_EQ(result->p_out, NormalCdf(-rho / sigma));
}

TEST(AdaptiveTest, NoDiscountMatchesUniform) {
  absl::StatusOr<AdaptiveCounterexample> result =
      AdaptiveCounterexampleRatio(2.54, 10.0, 100, 0.0);
  ASSERT_TRUE(result.ok());
  EXPECT_DOUBLE_EQ(result->ratio, result->uniform_ratio);
}

TEST(AdaptiveTest, RejectsInvalidArguments) {
  EXPECT_FALSE(AdaptiveCounterexampleRatio(0.0, 10.0, 100).ok());
  EXPECT_FALSE(AdaptiveCounterexampleRatio(1.0, 10.0, 0).ok());
}

}  // namespace
}  // namespace dpngram

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

#include "dpngram/synthetic.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/str_cat.h"
#include "dpngram/rng.h"

namespace dpngram {
namespace {

constexpr std::uint64_t kUserStream = 0x75736572ULL;
constexpr std::uint64_t kPhraseStream = 0x706872617365ULL;

double Uniform01(Rng& rng) { return std::generate_canonical<double, 64>(rng); }

// Inverse-CDF sampler for a finite Zipf law over ranks 0..n-1.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent) : pmf_(n), cdf_(n) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      pmf_[r] = std::pow(static_cast<double>(r + 1), -exponent);
      total += pmf_[r];
    }
    double running = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      pmf_[r] /= total;
      running += pmf_[r];
      cdf_[r] = running;
    }
    cdf_.back() = 1.0;
  }

  std::size_t size() const { return pmf_.size(); }
  double Pmf(std::size_t r) const { return pmf_[r]; }

  std::size_t Sample(Rng& rng) const {
    const double u = Uniform01(rng);
    return static_cast<std::size_t>(
        std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  }

 private:
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

// Metropolis-Hastings chain with a Zipf stationary law and a proposal that
// mixes local rank moves with independent draws.
class RankChain {
 public:
  RankChain(const ZipfSampler& zipf, double locality, int window)
      : zipf_(zipf), locality_(locality), window_(window) {}

  std::size_t Start(Rng& rng) const { return zipf_.Sample(rng); }

  std::size_t Step(std::size_t x, Rng& rng) const {
    std::size_t y = x;
    if (Uniform01(rng) < locality_) {
      const int offset =
          std::uniform_int_distribution<int>(1, window_)(rng) *
          (Uniform01(rng) < 0.5 ? -1 : 1);
      const long long candidate = static_cast<long long>(x) + offset;
      if (candidate < 0 || candidate >= static_cast<long long>(zipf_.size())) {
        return x;
      }
      y = static_cast<std::size_t>(candidate);
    } else {
      y = zipf_.Sample(rng);
    }
    if (y == x) return x;
    const double forward = zipf_.Pmf(x) * Proposal(x, y);
    const double backward = zipf_.Pmf(y) * Proposal(y, x);
    return Uniform01(rng) * forward < backward ? y : x;
  }

 private:
  double Proposal(std::size_t from, std::size_t to) const {
    const std::size_t gap = from > to ? from - to : to - from;
    const double local =
        gap <= static_cast<std::size_t>(window_) ? 1.0 / (2.0 * window_) : 0.0;
    return locality_ * local + (1.0 - locality_) * zipf_.Pmf(to);
  }

  const ZipfSampler& zipf_;
  double locality_;
  int window_;
};

int UserLength(const SyntheticKnobs& knobs, Rng& rng) {
  return std::uniform_int_distribution<int>(knobs.min_length,
                                            knobs.max_length)(rng);
}

}  // namespace

absl::StatusOr<CorpusKind> ParseCorpusKind(const std::string& name) {
  if (name == "zipf") return CorpusKind::kZipf;
  if (name == "clustered") return CorpusKind::kClustered;
  if (name == "heavy_tail") return CorpusKind::kHeavyTail;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown corpus kind '", name, "'; expected zipf, clustered or heavy_tail"));
}

std::string CorpusKindName(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::kZipf:
      return "zipf";
    case CorpusKind::kClustered:
      return "clustered";
    case CorpusKind::kHeavyTail:
      return "heavy_tail";
  }
  return "unknown";
}

absl::Status SyntheticKnobs::Validate() const {
  if (exponent.has_value() && !(*exponent > 0.0)) {
    return absl::InvalidArgumentError("exponent must be positive");
  }
  if (min_length < 1 || max_length < min_length) {
    return absl::InvalidArgumentError(
        absl::StrCat("need 1 <= min_length <= max_length, got ", min_length,
                     " and ", max_length));
  }
  if (!(locality >= 0.0 && locality <= 1.0)) {
    return absl::InvalidArgumentError("locality must lie in [0, 1]");
  }
  if (window < 1) return absl::InvalidArgumentError("window must be >= 1");
  if (topics < 1) return absl::InvalidArgumentError("topics must be >= 1");
  if (phrases_per_topic < 1) {
    return absl::InvalidArgumentError("phrases_per_topic must be >= 1");
  }
  if (min_phrase_length < 1 || max_phrase_length < min_phrase_length) {
    return absl::InvalidArgumentError(
        "need 1 <= min_phrase_length <= max_phrase_length");
  }
  if (!(phrase_probability >= 0.0 && phrase_probability <= 1.0) ||
      !(topic_affinity >= 0.0 && topic_affinity <= 1.0)) {
    return absl::InvalidArgumentError(
        "phrase_probability and topic_affinity must lie in [0, 1]");
  }
  return absl::OkStatus();
}

absl::StatusOr<Corpus> GenerateCorpus(CorpusKind kind, std::size_t n_users,
                                      std::size_t vocab_size,
                                      std::uint64_t seed,
                                      const SyntheticKnobs& knobs) {
  if (n_users < 1) return absl::InvalidArgumentError("n_users must be >= 1");
  if (vocab_size < 2) {
    return absl::InvalidArgumentError("vocab_size must be >= 2");
  }
  if (absl::Status s = knobs.Validate(); !s.ok()) return s;
  if (kind == CorpusKind::kClustered &&
      static_cast<std::size_t>(knobs.topics) > vocab_size) {
    return absl::InvalidArgumentError("more topics than vocabulary words");
  }
  const double exponent =
      knobs.exponent.value_or(kind == CorpusKind::kHeavyTail ? 1.5 : 1.07);

  Corpus corpus;
  for (std::size_t r = 0; r < vocab_size; ++r) {
    corpus.vocab.Intern(absl::StrCat("w", r));
  }
  corpus.users.resize(n_users);
  const ZipfSampler zipf(vocab_size, exponent);

  if (kind != CorpusKind::kClustered) {
    const RankChain chain(zipf, knobs.locality, knobs.window);
    for (std::size_t i = 0; i < n_users; ++i) {
      Rng rng = MakeRng(seed, MixSeed(kUserStream, i));
      UserText& user = corpus.users[i];
      user.user_id = absl::StrCat("user", i);
      const int length = UserLength(knobs, rng);
      std::size_t rank = chain.Start(rng);
      user.tokens.push_back(static_cast<TokenId>(rank));
      while (static_cast<int>(user.tokens.size()) < length) {
        rank = chain.Step(rank, rng);
        user.tokens.push_back(static_cast<TokenId>(rank));
      }
    }
    return corpus;
  }

  // Topic t owns the ranks congruent to t modulo the topic count.
  const std::size_t topics = static_cast<std::size_t>(knobs.topics);
  std::vector<std::vector<TokenId>> topic_words(topics);
  for (std::size_t r = 0; r < vocab_size; ++r) {
    topic_words[r % topics].push_back(static_cast<TokenId>(r));
  }
  std::vector<ZipfSampler> topic_zipf;
  for (const auto& words : topic_words) {
    topic_zipf.emplace_back(words.size(), exponent);
  }
  std::vector<std::vector<std::vector<TokenId>>> phrases(topics);
  Rng phrase_rng = MakeRng(seed, kPhraseStream);
  for (std::size_t t = 0; t < topics; ++t) {
    for (int j = 0; j < knobs.phrases_per_topic; ++j) {
      const int length = std::uniform_int_distribution<int>(
          knobs.min_phrase_length, knobs.max_phrase_length)(phrase_rng);
      std::vector<TokenId> phrase;
      for (int p = 0; p < length; ++p) {
        phrase.push_back(topic_words[t][topic_zipf[t].Sample(phrase_rng)]);
      }
      phrases[t].push_back(std::move(phrase));
    }
  }
  const ZipfSampler phrase_zipf(static_cast<std::size_t>(knobs.phrases_per_topic),
                                exponent);
  for (std::size_t i = 0; i < n_users; ++i) {
    Rng rng = MakeRng(seed, MixSeed(kUserStream, i));
    UserText& user = corpus.users[i];
    user.user_id = absl::StrCat("user", i);
    const std::size_t topic =
        std::uniform_int_distribution<std::size_t>(0, topics - 1)(rng);
    const std::size_t length = static_cast<std::size_t>(UserLength(knobs, rng));
    while (user.tokens.size() < length) {
      if (Uniform01(rng) < knobs.phrase_probability) {
        const auto& phrase = phrases[topic][phrase_zipf.Sample(rng)];
        for (TokenId token : phrase) {
          if (user.tokens.size() == length) break;
          user.tokens.push_back(token);
        }
      } else if (Uniform01(rng) < knobs.topic_affinity) {
        user.tokens.push_back(topic_words[topic][topic_zipf[topic].Sample(rng)]);
      } else {
        user.tokens.push_back(static_cast<TokenId>(zipf.Sample(rng)));
      }
    }
  }
  return corpus;
}

absl::StatusOr<std::vector<std::vector<std::uint32_t>>> GenerateZipfItemSets(
    std::size_t n_users, std::size_t universe, std::uint64_t seed,
    const ParetoKnobs& knobs) {
  if (universe < 1) return absl::InvalidArgumentError("universe must be >= 1");
  if (!(knobs.shape > 0.0) || knobs.min_size < 1 ||
      knobs.max_size < knobs.min_size || !(knobs.exponent > 0.0)) {
    return absl::InvalidArgumentError(
        "need shape > 0, 1 <= min_size <= max_size, exponent > 0");
  }
  const ZipfSampler zipf(universe, knobs.exponent);
  const std::size_t cap =
      std::min(static_cast<std::size_t>(knobs.max_size), universe);
  std::vector<std::vector<std::uint32_t>> sets(n_users);
  for (std::size_t i = 0; i < n_users; ++i) {
    Rng rng = MakeRng(seed, MixSeed(kUserStream, i));
    const double u = UniformOpenClosed(rng);
    const double raw = knobs.min_size * std::pow(u, -1.0 / knobs.shape);
    const std::size_t size = static_cast<std::size_t>(
        std::min(std::floor(raw), static_cast<double>(cap)));
    absl::flat_hash_set<std::uint32_t> items;
    while (items.size() < size) {
      items.insert(static_cast<std::uint32_t>(zipf.Sample(rng)));
    }
    sets[i].assign(items.begin(), items.end());
    std::sort(sets[i].begin(), sets[i].end());
  }
  return sets;
}

double RankFrequencySlope(const Corpus& corpus) {
  std::vector<double> counts(corpus.vocab.size(), 0.0);
  for (const UserText& user : corpus.users) {
    for (TokenId token : user.tokens) {
      if (token < counts.size()) counts[token] += 1.0;
    }
  }
  std::sort(counts.begin(), counts.end(), std::greater<>());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double n = 0.0;
  for (std::size_t r = 0; r < counts.size() && counts[r] > 0.0; ++r) {
    const double x = std::log(static_cast<double>(r + 1));
    const double y = std::log(counts[r]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1.0;
  }
  const double denom = n * sxx - sx * sx;
  if (n < 2.0 || denom <= 0.0) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace dpngram

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

#include "dpngram/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "dpngram/ngram.h"
#include "dpngram/rng.h"

namespace dpngram {
namespace {

double LogBinomialPmf(int r, int k, double log_q, double log_1mq) {
  return std::lgamma(r + 1.0) - std::lgamma(k + 1.0) - std::lgamma(r - k + 1.0) +
         k * log_q + (r - k) * log_1mq;
}

double LogSumExp(std::span<const double> terms) {
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  const double peak = *std::max_element(terms.begin(), terms.end());
  if (std::isinf(peak)) return peak;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

// exp of the log pmf at k, with the degenerate q in {0, 1} handled exactly.
double BinomialPmf(int r, int k, double q) {
  if (q <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (q >= 1.0) return k == r ? 1.0 : 0.0;
  return std::exp(LogBinomialPmf(r, k, std::log(q), std::log1p(-q)));
}

struct RunOutcome {
  std::vector<bool> included;
  std::vector<double> scores;
  std::vector<Guess> guesses;
  absl::Status status;
};

RunOutcome AuditOneRun(const Corpus& corpus, const DpneConfig& config,
                       const AuditOptions& options, int run) {
  RunOutcome out;
  const std::uint64_t run_seed = MixSeed(options.seed, run);
  absl::StatusOr<PlantedCorpus> planted =
      PlantCanaries(corpus, options.canaries, MixSeed(run_seed, 1));
  if (!planted.ok()) {
    out.status = planted.status();
    return out;
  }
  DpneConfig run_config = config;
  run_config.seed = MixSeed(run_seed, 2);
  absl::StatusOr<DpneResult> result = RunAfpDpne(planted->corpus, run_config);
  if (!result.ok()) {
    out.status = result.status();
    return out;
  }
  for (const std::vector<TokenId>& text : planted->canary_texts) {
    out.scores.push_back(
        static_cast<double>(CanaryScore(text, result->levels)));
  }
  const int r = options.guesses > 0 ? options.guesses : options.canaries / 2;
  absl::StatusOr<std::vector<Guess>> guesses = GuessFromScores(out.scores, r);
  if (!guesses.ok()) {
    out.status = guesses.status();
    return out;
  }
  out.guesses = *std::move(guesses);
  out.included = std::move(planted->included);
  return out;
}

}  // namespace

absl::StatusOr<PlantedCorpus> PlantCanaries(const Corpus& corpus, int m,
                                            std::uint64_t seed) {
  if (m < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("canary count must be >= 1, got ", m));
  }
  PlantedCorpus out;
  out.corpus = corpus;
  Rng rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < m; ++i) {
    UserText canary;
    canary.user_id = absl::StrCat("canary", i);
    for (int j = 0; j < kCanaryLength; ++j) {
      const std::string word = absl::StrCat("canary", i, "_", j);
      if (corpus.vocab.Contains(word)) {
        return absl::FailedPreconditionError(
            absl::StrCat("corpus already contains canary token ", word));
      }
      canary.tokens.push_back(out.corpus.vocab.Intern(word));
    }
    const bool include = coin(rng);
    out.included.push_back(include);
    out.canary_texts.push_back(canary.tokens);
    if (include) out.corpus.users.push_back(std::move(canary));
  }
  if (absl::Status s = out.corpus.Validate(); !s.ok()) return s;
  return out;
}

std::size_t CanaryScore(std::span<const TokenId> text,
                        std::span<const LevelRelease> levels) {
  std::size_t score = 0;
  for (const LevelRelease& level : levels) {
    if (level.released.empty()) continue;
    const int k = static_cast<int>(level.released.front().size());
    for (const NGram& gram : ExtractNgrams(text, k)) {
      if (std::binary_search(level.released.begin(), level.released.end(),
                             gram)) {
        ++score;
      }
    }
  }
  return score;
}

absl::StatusOr<std::vector<Guess>> GuessFromScores(
    std::span<const double> scores, int r) {
  if (r < 0 || static_cast<std::size_t>(r) > scores.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "guess count must lie in [0, ", scores.size(), "], got ", r));
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  const std::size_t half = static_cast<std::size_t>(r) / 2;
  std::vector<Guess> guesses;
  for (std::size_t i = 0; i < half; ++i) {
    guesses.push_back({.index = order[i], .included = true});
  }
  for (std::size_t i = order.size() - half; i < order.size(); ++i) {
    guesses.push_back({.index = order[i], .included = false});
  }
  return guesses;
}

double BinomialUpperTail(int r, int v, double q) {
  if (v <= 0) return 1.0;
  if (v > r) return 0.0;
  if (q <= 0.0) return 0.0;
  if (q >= 1.0) return 1.0;
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  std::vector<double> terms;
  terms.reserve(r - v + 1);
  for (int k = v; k <= r; ++k) {
    terms.push_back(LogBinomialPmf(r, k, log_q, log_1mq));
  }
  return std::min(1.0, std::exp(LogSumExp(terms)));
}

absl::StatusOr<double> AuditPValue(int v, int r, double epsilon, double delta,
                                   int m, std::optional<double> fixed_alpha) {
  if (r < 0 || v < 0 || v > r) {
    return absl::InvalidArgumentError(
        absl::StrCat("need 0 <= v <= r, got v=", v, " r=", r));
  }
  if (!(epsilon >= 0.0) || !(delta >= 0.0) || m < 0) {
    return absl::InvalidArgumentError(
        "epsilon, delta and m must be non-negative");
  }
  const double q = std::isinf(epsilon) ? 1.0 : 1.0 / (1.0 + std::exp(-epsilon));
  const double beta = BinomialUpperTail(r, v, q);
  double alpha = 0.0;
  if (fixed_alpha.has_value()) {
    alpha = *fixed_alpha;
  } else {
    // Window mass Pr[v - i <= Bin < v] only grows until i = v, after which
    // dividing by i can only shrink it.
    double window = 0.0;
    for (int i = 1; i <= std::min(m, v); ++i) {
      window += BinomialPmf(r, v - i, q);
      alpha = std::max(alpha, window / i);
    }
  }
  return std::min(1.0, beta + 2.0 * m * delta * alpha);
}

absl::StatusOr<AuditRecord> RunAudit(const Corpus& corpus,
                                     const DpneConfig& config,
                                     const AuditOptions& options) {
  if (options.runs < 1) {
    return absl::InvalidArgumentError("audit needs at least one run");
  }
  if (absl::Status s = config.Validate(); !s.ok()) return s;

  std::vector<RunOutcome> outcomes(options.runs);
  const int threads = std::clamp(options.threads, 1, options.runs);
  if (threads == 1) {
    for (int run = 0; run < options.runs; ++run) {
      outcomes[run] = AuditOneRun(corpus, config, options, run);
    }
  } else {
    std::vector<std::jthread> workers;
    for (int w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        for (int run = w; run < options.runs; run += threads) {
          outcomes[run] = AuditOneRun(corpus, config, options, run);
        }
      });
    }
  }

  AuditRecord record;
  record.runs = options.runs;
  record.epsilon = config.epsilon;
  record.delta = config.delta;
  for (RunOutcome& outcome : outcomes) {
    if (!outcome.status.ok()) return outcome.status;
    const std::size_t offset = record.inclusion_bits.size();
    for (const Guess& guess : outcome.guesses) {
      const bool truth = outcome.included[guess.index];
      if (truth == guess.included) ++record.correct;
      record.guesses.push_back(
          {.index = offset + guess.index, .included = guess.included});
    }
    record.inclusion_bits.insert(record.inclusion_bits.end(),
                                 outcome.included.begin(),
                                 outcome.included.end());
    record.scores.insert(record.scores.end(), outcome.scores.begin(),
                         outcome.scores.end());
  }
  record.m = static_cast<int>(record.inclusion_bits.size());
  record.total_guesses = static_cast<int>(record.guesses.size());
  absl::StatusOr<double> p =
      AuditPValue(record.correct, record.total_guesses, config.epsilon,
                  config.delta, record.m, options.fixed_alpha);
  if (!p.ok()) return p.status();
  record.p_value = *p;
  record.pass = record.p_value >= options.significance;
  return record;
}

}  // namespace dpngram

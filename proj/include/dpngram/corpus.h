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

#ifndef DPNGRAM_CORPUS_H_
#define DPNGRAM_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace dpngram {

using TokenId = std::uint32_t;

// Bidirectional token <-> string table. Ids are dense and assigned in
// insertion order.
class Vocabulary {
 public:
  TokenId Intern(absl::string_view word);
  bool Contains(absl::string_view word) const;
  const std::string& Word(TokenId id) const { return words_[id]; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.words_ == b.words_;
  }

 private:
  std::vector<std::string> words_;
  absl::flat_hash_map<std::string, TokenId> index_;
};

struct UserText {
  std::string user_id;
  std::vector<TokenId> tokens;

  friend bool operator==(const UserText&, const UserText&) = default;
};

struct Corpus {
  std::vector<UserText> users;
  Vocabulary vocab;

  // Unique user ids and every token inside the vocabulary.
  absl::Status Validate() const;

  // Distinct tokens of each user, sorted; the DPSU view of the corpus.
  std::vector<std::vector<TokenId>> ItemSets() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

inline constexpr int kCorpusFormatVersion = 1;

// Newline-delimited JSON: an optional header {"format_version": 1} followed by
// one {"user_id": "...", "tokens": ["...", ...]} record per line.
absl::StatusOr<Corpus> LoadCorpus(const std::string& path);
absl::Status SaveCorpus(const Corpus& corpus, const std::string& path);

// One document per line, lowercased and split on whitespace. User ids are
// "u<line number>". Blank lines are skipped. `max_users` of 0 means no limit.
absl::StatusOr<Corpus> LoadPlainTextCorpus(const std::string& path,
                                           std::size_t max_users = 0);

}  // namespace dpngram

#endif  // DPNGRAM_CORPUS_H_

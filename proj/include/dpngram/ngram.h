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

#ifndef DPNGRAM_NGRAM_H_
#define DPNGRAM_NGRAM_H_

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/container/inlined_vector.h"
#include "dpngram/corpus.h"

namespace dpngram {

// An ordered sequence of tokens. Grams up to length 6 are stored inline.
class NGram {
 public:
  using Storage = absl::InlinedVector<TokenId, 6>;

  NGram() = default;
  NGram(std::initializer_list<TokenId> tokens) : tokens_(tokens) {}
  explicit NGram(std::span<const TokenId> tokens)
      : tokens_(tokens.begin(), tokens.end()) {}

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  TokenId operator[](std::size_t i) const { return tokens_[i]; }
  TokenId back() const { return tokens_.back(); }
  std::span<const TokenId> tokens() const { return tokens_; }

  // tokens[0 .. k-2] and tokens[1 .. k-1]; empty for unigrams.
  NGram Prefix() const { return Slice(0, size() == 0 ? 0 : size() - 1); }
  NGram Suffix() const { return Slice(size() == 0 ? 0 : 1, size()); }

  NGram Extend(TokenId token) const {
    NGram out = *this;
    out.tokens_.push_back(token);
    return out;
  }

  friend bool operator==(const NGram& a, const NGram& b) {
    return a.tokens_ == b.tokens_;
  }
  friend std::strong_ordering operator<=>(const NGram& a, const NGram& b) {
    return std::lexicographical_compare_three_way(
        a.tokens_.begin(), a.tokens_.end(), b.tokens_.begin(),
        b.tokens_.end());
  }
  template <typename H>
  friend H AbslHashValue(H h, const NGram& g) {
    return H::combine(std::move(h), g.tokens_);
  }

 private:
  NGram Slice(std::size_t begin, std::size_t end) const {
    NGram out;
    out.tokens_.assign(tokens_.begin() + begin, tokens_.begin() + end);
    return out;
  }

  Storage tokens_;
};

using NGramSet = absl::flat_hash_set<NGram>;
template <typename V>
using NGramMap = absl::flat_hash_map<NGram, V>;

// Distinct contiguous length-k subsequences of `text`, ascending. Empty when
// k < 1 or k exceeds the text length.
std::vector<NGram> ExtractNgrams(std::span<const TokenId> text, int k);

// Space-joined words, for reports and logs.
std::string FormatNGram(const NGram& gram, const Vocabulary& vocab);

}  // namespace dpngram

#endif  // DPNGRAM_NGRAM_H_

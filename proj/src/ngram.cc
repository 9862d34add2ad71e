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

#include "dpngram/ngram.h"

#include <algorithm>
#include <string>
#include <vector>

#include "absl/strings/str_join.h"

namespace dpngram {

std::vector<NGram> ExtractNgrams(std::span<const TokenId> text, int k) {
  std::vector<NGram> grams;
  if (k < 1 || static_cast<std::size_t>(k) > text.size()) return grams;
  grams.reserve(text.size() - k + 1);
  for (std::size_t i = 0; i + k <= text.size(); ++i) {
    grams.emplace_back(text.subspan(i, k));
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

std::string FormatNGram(const NGram& gram, const Vocabulary& vocab) {
  std::vector<absl::string_view> words;
  for (TokenId token : gram.tokens()) {
    words.push_back(token < vocab.size() ? absl::string_view(vocab.Word(token))
                                         : absl::string_view("<?>"));
  }
  return absl::StrJoin(words, " ");
}

}  // namespace dpngram

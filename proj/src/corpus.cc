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

#include "dpngram/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"

namespace dpngram {

using json = nlohmann::json;

TokenId Vocabulary::Intern(absl::string_view word) {
  auto it = index_.find(word);
  if (it != index_.end()) return it->second;
  const TokenId id = static_cast<TokenId>(words_.size());
  words_.emplace_back(word);
  index_.emplace(words_.back(), id);
  return id;
}

bool Vocabulary::Contains(absl::string_view word) const {
  return index_.contains(word);
}

absl::Status Corpus::Validate() const {
  absl::flat_hash_set<std::string_view> ids;
  for (const UserText& user : users) {
    if (!ids.insert(user.user_id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate user_id '", user.user_id, "'"));
    }
    for (TokenId token : user.tokens) {
      if (token >= vocab.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "user '", user.user_id, "' references token ", token,
            " outside a vocabulary of ", vocab.size()));
      }
    }
  }
  return absl::OkStatus();
}

std::vector<std::vector<TokenId>> Corpus::ItemSets() const {
  std::vector<std::vector<TokenId>> sets;
  sets.reserve(users.size());
  for (const UserText& user : users) {
    std::vector<TokenId> items = user.tokens;
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    sets.push_back(std::move(items));
  }
  return sets;
}

absl::StatusOr<Corpus> LoadCorpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  Corpus corpus;
  absl::flat_hash_set<std::string> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object()) {
      return absl::DataLossError(
          absl::StrCat(path, ":", line_number, ": malformed JSON record"));
    }
    if (record.contains("format_version") && !record.contains("user_id")) {
      if (!record["format_version"].is_number_integer() ||
          record["format_version"].get<int>() != kCorpusFormatVersion) {
        return absl::DataLossError(absl::StrCat(
            path, ":", line_number, ": unsupported format_version"));
      }
      continue;
    }
    if (!record.contains("user_id") || !record["user_id"].is_string()) {
      return absl::DataLossError(absl::StrCat(
          path, ":", line_number, ": missing string field \"user_id\""));
    }
    if (!record.contains("tokens") || !record["tokens"].is_array()) {
      return absl::DataLossError(absl::StrCat(
          path, ":", line_number, ": missing array field \"tokens\""));
    }
    UserText user;
    user.user_id = record["user_id"].get<std::string>();
    if (!seen.insert(user.user_id).second) {
      return absl::DataLossError(absl::StrCat(path, ":", line_number,
                                              ": duplicate user_id '",
                                              user.user_id, "'"));
    }
    for (const json& token : record["tokens"]) {
      if (!token.is_string()) {
        return absl::DataLossError(absl::StrCat(
            path, ":", line_number, ": tokens must be strings"));
      }
      user.tokens.push_back(
          corpus.vocab.Intern(token.get_ref<const std::string&>()));
    }
    corpus.users.push_back(std::move(user));
  }
  if (in.bad()) {
    return absl::DataLossError(absl::StrCat("read error on ", path));
  }
  return corpus;
}

absl::Status SaveCorpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << json{{"format_version", kCorpusFormatVersion}}.dump() << '\n';
  for (const UserText& user : corpus.users) {
    json tokens = json::array();
    for (TokenId token : user.tokens) tokens.push_back(corpus.vocab.Word(token));
    out << json{{"user_id", user.user_id}, {"tokens", std::move(tokens)}}.dump()
        << '\n';
  }
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write error on ", path));
  return absl::OkStatus();
}

absl::StatusOr<Corpus> LoadPlainTextCorpus(const std::string& path,
                                           std::size_t max_users) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  Corpus corpus;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (max_users != 0 && corpus.users.size() >= max_users) break;
    absl::AsciiStrToLower(&line);
    UserText user;
    for (absl::string_view word :
         absl::StrSplit(line, absl::ByAnyChar(" \t\r\f\v"), absl::SkipEmpty())) {
      user.tokens.push_back(corpus.vocab.Intern(word));
    }
    if (user.tokens.empty()) continue;
    user.user_id = absl::StrCat("u", line_number);
    corpus.users.push_back(std::move(user));
  }
  if (in.bad()) {
    return absl::DataLossError(absl::StrCat("read error on ", path));
  }
  return corpus;
}

}  // namespace dpngram

// Copyright 2026 The adgraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace adgraph::model {

inline constexpr std::int32_t kPad = 0;
inline constexpr std::int32_t kUnk = 1;

// Whitespace tokens, ASCII-lowercased. Mask tokens such as [PHONE] stay
// uppercase and are cut out of the word they are glued to; escaped literals
// ([[PHONE]]) are ordinary text.
std::vector<std::string> tokenize(std::string_view text);

class Vocab {
 public:
  Vocab();  // PAD and UNK only

  // Tokens with frequency >= min_freq, most frequent first, ties by bytes.
  static Vocab build(const std::vector<std::vector<std::string>>& documents, std::size_t min_freq);
  static Vocab from_tokens(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(std::int32_t id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  std::int32_t id(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Ids of at most max_tokens tokens (0 = no limit).
  std::vector<std::int32_t> encode(const std::vector<std::string>& tokens,
                                   std::size_t max_tokens = 0) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> index_;
};

}  // namespace adgraph::model

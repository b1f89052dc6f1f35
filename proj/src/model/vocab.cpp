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

#include "adgraph/model/vocab.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "adgraph/entity.hpp"
#include "adgraph/text.hpp"

namespace adgraph::model {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Length of the mask token starting at word[i], or 0.
std::size_t mask_at(std::string_view word, std::size_t i) {
  if (word[i] != '[') return 0;
  for (EntityCategory c : kAllCategories) {
    const std::string_view tok = mask_token(c);
    if (word.substr(i, tok.size()) != tok) continue;
    const bool escaped = i > 0 && word[i - 1] == '[' && i + tok.size() < word.size() &&
                         word[i + tok.size()] == ']';
    if (!escaped) return tok.size();
  }
  return 0;
}

void split_word(std::string_view word, std::vector<std::string>& out) {
  std::size_t start = 0;
  for (std::size_t i = 0; i < word.size();) {
    const std::size_t len = mask_at(word, i);
    if (len == 0) {
      ++i;
      continue;
    }
    if (i > start) out.push_back(ascii_lower(word.substr(start, i - start)));
    out.emplace_back(word.substr(i, len));
    i += len;
    start = i;
  }
  if (start < word.size()) out.push_back(ascii_lower(word.substr(start)));
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) split_word(text.substr(i, j - i), out);
    i = j;
  }
  return out;
}

Vocab::Vocab() : tokens_{"<pad>", "<unk>"} {
  index_["<pad>"] = kPad;
  index_["<unk>"] = kUnk;
}

Vocab Vocab::build(const std::vector<std::vector<std::string>>& documents, std::size_t min_freq) {
  std::map<std::string, std::size_t> freq;
  for (const auto& doc : documents) {
    for (const auto& t : doc) ++freq[t];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [t, f] : freq) {
    if (f >= std::max<std::size_t>(1, min_freq) && t != "<pad>" && t != "<unk>") kept.emplace_back(t, f);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  for (auto& [t, f] : kept) tokens.push_back(t);
  return from_tokens(std::move(tokens));
}

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
  Vocab v;
  for (auto& t : tokens) {
    if (t == "<pad>" || t == "<unk>") continue;
    if (!v.index_.emplace(t, static_cast<std::int32_t>(v.tokens_.size())).second) {
      throw std::invalid_argument("duplicate vocabulary token: " + t);
    }
    v.tokens_.push_back(std::move(t));
  }
  return v;
}

std::int32_t Vocab::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

std::vector<std::int32_t> Vocab::encode(const std::vector<std::string>& tokens,
                                        std::size_t max_tokens) const {
  const std::size_t n = max_tokens ? std::min(max_tokens, tokens.size()) : tokens.size();
  std::vector<std::int32_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(id(tokens[i]));
  return out;
}

}  // namespace adgraph::model

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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adgraph {

// Unit-cost edit distance over Unicode scalar values, two-row DP.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

// Ukkonen band of half-width k with early exit. Returns min(d, k + 1).
std::size_t levenshtein_bounded(std::u32string_view a, std::u32string_view b, std::size_t k);

// 1 - d / max(|a|, |b|); two empty strings are identical (1.0).
double similarity(std::u32string_view a, std::u32string_view b);
double similarity(std::string_view utf8_a, std::string_view utf8_b);

// Largest d with 1 - d / max_len >= gate, evaluated in double exactly as
// similarity() does; nullopt when even d = 0 fails (gate > 1).
std::optional<std::size_t> max_edits_for_gate(std::size_t max_len, double gate);

// Myers/Hyyro bit-vector distance against a fixed pattern.
class BitPattern {
 public:
  explicit BitPattern(std::u32string_view pattern);

  std::size_t size() const { return m_; }
  std::size_t distance(std::u32string_view text) const;
  // distance(text) <= k, with early exit on either side.
  bool within(std::u32string_view text, std::size_t k) const;

 private:
  std::size_t row_of(char32_t c) const;

  std::size_t m_ = 0;
  std::size_t words_ = 0;
  unsigned last_shift_ = 0;
  std::vector<std::uint64_t> peq_;  // rows of words_; row 0 matches nothing
  std::array<std::uint32_t, 128> ascii_row_{};
  std::vector<std::pair<char32_t, std::uint32_t>> other_rows_;  // sorted
};

std::size_t levenshtein_bitparallel(std::u32string_view a, std::u32string_view b);

// similarity(a, b) >= gate without computing the exact distance when the
// length filter already decides it.
bool similar_at_least(std::u32string_view a, std::u32string_view b, double gate);

// Greedy near-duplicate screen: a text is admitted iff it is below the gate
// against every previously admitted text.
class SimilarityScreen {
 public:
  explicit SimilarityScreen(double gate) : gate_(gate) {}

  bool similar_to_any(std::u32string_view text) const;
  bool admit_if_novel(std::u32string_view text);
  std::size_t admitted() const { return texts_.size(); }
  std::uint64_t comparisons() const { return comparisons_; }

 private:
  using Histogram = std::array<std::uint16_t, 64>;
  static Histogram histogram(std::u32string_view s);

  double gate_;
  std::vector<std::u32string> texts_;
  std::vector<Histogram> hists_;
  std::map<std::size_t, std::vector<std::size_t>> by_length_;
  mutable std::uint64_t comparisons_ = 0;
};

}  // namespace adgraph

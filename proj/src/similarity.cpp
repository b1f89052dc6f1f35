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

#include "adgraph/similarity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "adgraph/text.hpp"

namespace adgraph {

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] != b[j - 1] ? 1 : 0);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t levenshtein_bounded(std::u32string_view a, std::u32string_view b, std::size_t k) {
  const std::size_t n = a.size(), m = b.size();
  const std::size_t cap = k + 1;
  if ((n > m ? n - m : m - n) > k) return cap;
  std::vector<std::size_t> prev(m + 1, cap), cur(m + 1, cap);
  for (std::size_t j = 0; j <= std::min(m, k); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t lo = i > k ? i - k : 0;
    const std::size_t hi = std::min(m, i + k);
    std::size_t row_min = cap;
    std::size_t start = lo;
    if (lo == 0) {
      cur[0] = i;
      row_min = i;
      start = 1;
    } else {
      cur[lo - 1] = cap;
    }
    for (std::size_t j = start; j <= hi; ++j) {
      std::size_t v = prev[j - 1] + (a[i - 1] != b[j - 1] ? 1 : 0);
      v = std::min({v, prev[j] + 1, cur[j - 1] + 1, cap});
      cur[j] = v;
      row_min = std::min(row_min, v);
    }
    if (row_min > k) return cap;
    std::swap(prev, cur);
  }
  return std::min(prev[m], cap);
}

double similarity(std::u32string_view a, std::u32string_view b) {
  const std::size_t max_len = std::max(a.size(), b.size());
  if (max_len == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein_bitparallel(a, b)) / static_cast<double>(max_len);
}

double similarity(std::string_view utf8_a, std::string_view utf8_b) {
  return similarity(utf8_decode(utf8_a), utf8_decode(utf8_b));
}

std::optional<std::size_t> max_edits_for_gate(std::size_t max_len, double gate) {
  if (max_len == 0) return gate <= 1.0 ? std::optional<std::size_t>(0) : std::nullopt;
  const double len = static_cast<double>(max_len);
  auto ok = [&](std::size_t d) { return 1.0 - static_cast<double>(d) / len >= gate; };
  if (!ok(0)) return std::nullopt;
  const double est = std::floor((1.0 - gate) * len);
  std::size_t k = est <= 0.0 ? 0 : std::min(max_len, static_cast<std::size_t>(est));
  while (k < max_len && ok(k + 1)) ++k;
  while (k > 0 && !ok(k)) --k;
  return k;
}

BitPattern::BitPattern(std::u32string_view pattern) : m_(pattern.size()) {
  words_ = std::max<std::size_t>(1, (m_ + 63) / 64);
  last_shift_ = m_ == 0 ? 0 : static_cast<unsigned>((m_ - 1) % 64);
  peq_.assign(words_, 0);
  std::vector<char32_t> distinct(pattern.begin(), pattern.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (char32_t c : distinct) {
    const auto row = static_cast<std::uint32_t>(peq_.size() / words_);
    peq_.resize(peq_.size() + words_, 0);
    if (c < 128) {
      ascii_row_[c] = row;
    } else {
      other_rows_.emplace_back(c, row);
    }
  }
  for (std::size_t i = 0; i < m_; ++i) {
    peq_[row_of(pattern[i]) * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
  }
}

std::size_t BitPattern::row_of(char32_t c) const {
  if (c < 128) return ascii_row_[c];
  auto it = std::lower_bound(other_rows_.begin(), other_rows_.end(), c,
                             [](const auto& e, char32_t v) { return e.first < v; });
  return (it != other_rows_.end() && it->first == c) ? it->second : 0;
}

namespace {

// One 64-row block of one DP column. (hp, hn) carry the horizontal delta
// (+1, -1 or 0) entering at the top; on return they hold the delta leaving
// at the row selected by `out_shift`.
inline void advance_block(std::uint64_t& pv, std::uint64_t& mv, std::uint64_t eq, std::uint64_t& hp,
                          std::uint64_t& hn, unsigned out_shift) {
  const std::uint64_t xv = eq | mv;
  eq |= hn;
  const std::uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
  std::uint64_t ph = mv | ~(xh | pv);
  std::uint64_t mh = pv & xh;
  const std::uint64_t hp_out = (ph >> out_shift) & 1;
  const std::uint64_t hn_out = (mh >> out_shift) & 1;
  ph = (ph << 1) | hp;
  mh = (mh << 1) | hn;
  pv = mh | ~(xv | ph);
  mv = ph & xv;
  hp = hp_out;
  hn = hn_out;
}

}  // namespace

std::size_t BitPattern::distance(std::u32string_view text) const {
  if (m_ == 0) return text.size();
  std::vector<std::uint64_t> pv(words_, ~std::uint64_t{0}), mv(words_, 0);
  std::size_t score = m_;
  for (char32_t c : text) {
    const std::uint64_t* eq = &peq_[row_of(c) * words_];
    std::uint64_t hp = 1, hn = 0;
    for (std::size_t w = 0; w + 1 < words_; ++w) advance_block(pv[w], mv[w], eq[w], hp, hn, 63);
    advance_block(pv[words_ - 1], mv[words_ - 1], eq[words_ - 1], hp, hn, last_shift_);
    score = score + hp - hn;
  }
  return score;
}

bool BitPattern::within(std::u32string_view text, std::size_t k) const {
  const std::size_t n = text.size();
  if (m_ == 0) return n <= k;
  if ((n > m_ ? n - m_ : m_ - n) > k) return false;
  constexpr std::size_t kStackWords = 16;
  std::array<std::uint64_t, kStackWords> pv_stack, mv_stack;
  std::vector<std::uint64_t> pv_heap, mv_heap;
  std::uint64_t* pv = pv_stack.data();
  std::uint64_t* mv = mv_stack.data();
  if (words_ > kStackWords) {
    pv_heap.resize(words_);
    mv_heap.resize(words_);
    pv = pv_heap.data();
    mv = mv_heap.data();
  }
  std::fill(pv, pv + words_, ~std::uint64_t{0});
  std::fill(mv, mv + words_, 0);

  long long score = static_cast<long long>(m_);
  const long long lim = static_cast<long long>(k);
  const std::size_t last = words_ - 1;
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t* eq = &peq_[row_of(text[j]) * words_];
    std::uint64_t hp = 1, hn = 0;
    for (std::size_t w = 0; w < last; ++w) advance_block(pv[w], mv[w], eq[w], hp, hn, 63);
    advance_block(pv[last], mv[last], eq[last], hp, hn, last_shift_);
    score += static_cast<long long>(hp) - static_cast<long long>(hn);

    const std::size_t cols = j + 1;
    const std::size_t rest = n - cols;
    if (static_cast<long long>(score) - static_cast<long long>(rest) > lim) return false;
    if (score + static_cast<long long>(rest) <= lim) return true;
    // Any path to the corner crosses this column, and the cheapest crossing
    // is on the diagonal ending at (m, n): D[m - rest][cols] bounds the answer.
    if ((cols & 3) == 0 && rest < m_) {
      const std::size_t row = m_ - rest;
      long long d = static_cast<long long>(cols);
      const std::size_t full = row / 64;
      for (std::size_t w = 0; w < full; ++w) {
        d += std::popcount(pv[w]) - std::popcount(mv[w]);
      }
      if (const std::size_t tail = row % 64) {
        const std::uint64_t mask = (std::uint64_t{1} << tail) - 1;
        d += std::popcount(pv[full] & mask) - std::popcount(mv[full] & mask);
      }
      if (d > lim) return false;
    }
  }
  return score <= lim;
}

std::size_t levenshtein_bitparallel(std::u32string_view a, std::u32string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  return BitPattern(a).distance(b);
}

bool similar_at_least(std::u32string_view a, std::u32string_view b, double gate) {
  const auto k = max_edits_for_gate(std::max(a.size(), b.size()), gate);
  if (!k) return false;
  if ((a.size() > b.size() ? a.size() - b.size() : b.size() - a.size()) > *k) return false;
  if (a.size() > b.size()) std::swap(a, b);
  return BitPattern(a).within(b, *k);
}

SimilarityScreen::Histogram SimilarityScreen::histogram(std::u32string_view s) {
  Histogram h{};
  for (char32_t c : s) {
    auto& slot = h[static_cast<std::uint32_t>(c) % 64];
    if (slot < 0xFFFF) ++slot;
  }
  return h;
}

bool SimilarityScreen::similar_to_any(std::u32string_view text) const {
  const std::size_t len = text.size();
  // Lengths are scanned outward from len; near duplicates sit close by, and
  // the length gap alone ends each direction.
  const Histogram h = histogram(text);
  std::optional<BitPattern> pattern;
  auto check = [&](std::size_t idx) {
    const std::u32string& other = texts_[idx];
    const std::size_t max_len = std::max(len, other.size());
    const auto k = max_edits_for_gate(max_len, gate_);
    if (!k) return false;
    // Bag distance over 64 residue classes bounds the edit distance below.
    std::size_t plus = 0, minus = 0;
    const Histogram& o = hists_[idx];
    for (std::size_t i = 0; i < 64; ++i) {
      if (h[i] > o[i]) {
        plus += h[i] - o[i];
      } else {
        minus += o[i] - h[i];
      }
    }
    if (std::max(plus, minus) > *k) return false;
    ++comparisons_;
    if (!pattern) pattern.emplace(text);
    return pattern->within(other, *k);
  };
  auto gap_ok = [&](std::size_t t) {
    const std::size_t max_len = std::max(len, t);
    const auto k = max_edits_for_gate(max_len, gate_);
    return k && (len > t ? len - t : t - len) <= *k;
  };
  auto up = by_length_.lower_bound(len);
  auto down = std::make_reverse_iterator(up);
  bool up_open = true, down_open = true;
  while (up_open || down_open) {
    if (up_open) {
      if (up == by_length_.end() || !gap_ok(up->first)) {
        up_open = false;
      } else {
        for (std::size_t idx : up->second) {
          if (check(idx)) return true;
        }
        ++up;
      }
    }
    if (down_open) {
      if (down == by_length_.rend() || !gap_ok(down->first)) {
        down_open = false;
      } else {
        for (std::size_t idx : down->second) {
          if (check(idx)) return true;
        }
        ++down;
      }
    }
  }
  return false;
}

bool SimilarityScreen::admit_if_novel(std::u32string_view text) {
  if (similar_to_any(text)) return false;
  by_length_[text.size()].push_back(texts_.size());
  texts_.emplace_back(text);
  hists_.push_back(histogram(text));
  return true;
}

}  // namespace adgraph

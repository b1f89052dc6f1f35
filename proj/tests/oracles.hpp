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

// Slow reference implementations used as test oracles. They share no code
// with the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

inline std::size_t edit_distance(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

inline double similarity(const std::u32string& a, const std::u32string& b) {
  const std::size_t m = std::max(a.size(), b.size());
  if (m == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(m);
}

// Random string over a mixed alphabet: ASCII, accented Latin, CJK and emoji,
// drawn from a small pool so that pairs share characters.
inline std::u32string random_unicode(std::mt19937_64& rng, std::size_t max_len) {
  static const std::u32string pool = U"abcdeFGH 012.,!éüñßж漢字😀🔥💋";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  const std::size_t alpha = 2 + rng() % (pool.size() - 1);
  std::u32string s(len(rng), U' ');
  for (auto& c : s) c = pool[rng() % alpha];
  return s;
}

// Component label = smallest node reachable, by breadth-first search.
inline std::vector<std::uint32_t> bfs_components(std::size_t n,
                                                 const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::uint32_t> label(n, UINT32_MAX);
  for (std::uint32_t s = 0; s < n; ++s) {
    if (label[s] != UINT32_MAX) continue;
    std::queue<std::uint32_t> q;
    q.push(s);
    label[s] = s;
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      for (auto w : adj[v]) {
        if (label[w] == UINT32_MAX) {
          label[w] = s;
          q.push(w);
        }
      }
    }
  }
  return label;
}

// Two-sided exact signed-rank p-value by enumerating all 2^n sign vectors
// of the observed (mid)ranks. Zero differences are dropped first.
inline double signed_rank_p_enumerated(const std::vector<double>& diffs) {
  std::vector<double> d;
  for (double x : diffs) {
    if (x != 0.0) d.push_back(x);
  }
  const std::size_t n = d.size();
  if (n == 0) return 1.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return std::abs(d[i]) < std::abs(d[j]); });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }
  double total = 0.0, plus = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += rank[i];
    if (d[i] > 0) plus += rank[i];
  }
  const double observed = std::min(plus, total - plus);
  std::uint64_t extreme = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) w += rank[i];
    }
    if (std::min(w, total - w) <= observed + 1e-9) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(std::uint64_t{1} << n);
}

// Probability that a random positive outscores a random negative, ties 1/2.
inline double auc_pairs(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0.0;
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] == 1) ++pos; else ++neg;
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] == 1) continue;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / (static_cast<double>(pos) * static_cast<double>(neg));
}

inline double f1_at(const std::vector<double>& s, const std::vector<int>& y, double t) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool p = s[i] >= t;
    if (p && y[i] == 1) ++tp;
    else if (p) ++fp;
    else if (y[i] == 1) ++fn;
  }
  return tp == 0 ? 0.0 : 2 * tp / (2 * tp + fp + fn);
}

// Best F1 over every observed score used as a threshold; ties keep the
// larger threshold.
inline std::pair<double, double> best_threshold(const std::vector<double>& s, const std::vector<int>& y) {
  double best_t = 0, best_f = -1;
  for (double t : s) {
    const double f = f1_at(s, y, t);
    if (f > best_f || (f == best_f && t > best_t)) {
      best_f = f;
      best_t = t;
    }
  }
  return {best_t, best_f};
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("adgraph_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace oracle

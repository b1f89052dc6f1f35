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

#include <doctest.h>

#include <random>

#include "adgraph/similarity.hpp"
#include "adgraph/text.hpp"
#include "oracles.hpp"

using namespace adgraph;

namespace {

// a mutated copy of s, so that near pairs are common
std::u32string mutate(std::mt19937_64& g, std::u32string s, std::size_t edits) {
  static const std::u32string pool = U"xyz é😀";
  for (std::size_t i = 0; i < edits; ++i) {
    const auto pos = s.empty() ? 0 : g() % (s.size() + 1);
    switch (g() % 3) {
      case 0: s.insert(s.begin() + static_cast<long>(pos), pool[g() % pool.size()]); break;
      case 1: if (pos < s.size()) s.erase(pos, 1); break;
      default: if (pos < s.size()) s[pos] = pool[g() % pool.size()];
    }
  }
  return s;
}

}  // namespace

TEST_CASE("known distances") {
  CHECK(levenshtein(U"kitten", U"sitting") == 3);
  CHECK(levenshtein(U"", U"abc") == 3);
  CHECK(levenshtein(U"flaw", U"lawn") == 2);
  // one scalar value is one edit, whatever its UTF-8 width
  CHECK(levenshtein(U"a😀b", U"ab") == 1);
  CHECK(similarity(std::string_view(""), std::string_view("")) == 1.0);
  CHECK(similarity(U"abcd", U"abce") == 0.75);
  CHECK(similarity(std::string_view("é😀"), std::string_view("e😀")) == 0.5);
}

TEST_CASE("all distance kernels agree with the DP oracle") {
  std::mt19937_64 g(101);
  for (int it = 0; it < 6000; ++it) {
    const auto a = oracle::random_unicode(g, it % 10 == 0 ? 300 : 40);
    const auto b = g() % 2 ? mutate(g, a, g() % 8) : oracle::random_unicode(g, 40);
    const auto want = oracle::edit_distance(a, b);
    REQUIRE(levenshtein(a, b) == want);
    REQUIRE(levenshtein_bitparallel(a, b) == want);
    const std::size_t k = g() % 12;
    CHECK(levenshtein_bounded(a, b, k) == std::min(want, k + 1));
    const BitPattern p(a);
    CHECK(p.distance(b) == want);
    CHECK(p.within(b, k) == (want <= k));
    CHECK(similarity(a, b) == oracle::similarity(a, b));
  }
}

TEST_CASE("gate arithmetic matches similarity exactly") {
  for (std::size_t len = 0; len < 400; ++len) {
    for (double gate : {0.0, 0.3, 0.5, 0.5000001, 0.7, 0.9, 1.0}) {
      const auto k = max_edits_for_gate(len, gate);
      REQUIRE(k);
      const double l = static_cast<double>(len);
      if (len > 0) {
        CHECK(1.0 - static_cast<double>(*k) / l >= gate);
        if (*k < len) CHECK(1.0 - static_cast<double>(*k + 1) / l < gate);
      }
    }
  }
  CHECK_FALSE(max_edits_for_gate(10, 1.5));
  CHECK(max_edits_for_gate(10, 0.5) == 5u);
  CHECK(max_edits_for_gate(11, 0.5) == 5u);
}

TEST_CASE("similar_at_least is similarity >= gate") {
  std::mt19937_64 g(202);
  for (int it = 0; it < 5000; ++it) {
    const auto a = oracle::random_unicode(g, 60);
    const auto b = mutate(g, a, g() % 40);
    for (double gate : {0.3, 0.5, 0.8}) {
      CHECK(similar_at_least(a, b, gate) == (oracle::similarity(a, b) >= gate));
    }
  }
}

TEST_CASE("screen admits exactly the greedy set") {
  std::mt19937_64 g(303);
  for (int round = 0; round < 20; ++round) {
    std::vector<std::u32string> base, texts;
    for (int i = 0; i < 8; ++i) base.push_back(oracle::random_unicode(g, 50));
    for (int i = 0; i < 120; ++i) texts.push_back(mutate(g, base[g() % base.size()], g() % 30));
    SimilarityScreen screen(0.5);
    std::vector<std::u32string> admitted;
    for (const auto& t : texts) {
      bool similar = false;
      for (const auto& a : admitted) similar |= oracle::similarity(t, a) >= 0.5;
      const bool got = screen.admit_if_novel(t);
      REQUIRE(got == !similar);
      if (got) admitted.push_back(t);
    }
    CHECK(screen.admitted() == admitted.size());
    for (std::size_t i = 0; i < admitted.size(); ++i) {
      for (std::size_t j = i + 1; j < admitted.size(); ++j) {
        CHECK(oracle::similarity(admitted[i], admitted[j]) < 0.5);
      }
    }
  }
}

TEST_CASE("empty texts") {
  SimilarityScreen screen(0.5);
  CHECK(screen.admit_if_novel(U""));
  CHECK_FALSE(screen.admit_if_novel(U""));
  CHECK(screen.admit_if_novel(U"abc"));
}

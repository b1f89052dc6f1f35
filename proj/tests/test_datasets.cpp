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

#include <fstream>
#include <random>

#include "adgraph/datasets.hpp"
#include "adgraph/text.hpp"
#include "oracles.hpp"

using namespace adgraph;

namespace {

struct Fixture {
  std::vector<AdRecord> ads;
  RelatednessGraph graph;
  std::vector<LabeledComponent> labels;
};

// Clusters of near-identical texts joined by a shared phone, plus loners.
Fixture make_fixture(std::uint64_t seed, std::size_t clusters, std::size_t loners) {
  std::mt19937_64 g(seed);
  Fixture f;
  auto text = [&](std::size_t n) {
    std::u32string s = oracle::random_unicode(g, n);
    return utf8_encode(s);
  };
  for (std::size_t c = 0; c < clusters; ++c) {
    const std::string base = text(40);
    const std::size_t size = 2 + g() % 5;
    for (std::size_t i = 0; i < size; ++i) {
      AdRecord a;
      a.description = g() % 2 ? base + " " + std::to_string(i) : text(40);
      CanonicalEntity e;
      e.category = EntityCategory::PhoneNumber;
      e.value = "+1555" + std::to_string(1000000 + c);
      a.entities.push_back(e);
      f.ads.push_back(std::move(a));
    }
  }
  for (std::size_t i = 0; i < loners; ++i) {
    AdRecord a;
    a.description = text(40);
    f.ads.push_back(std::move(a));
  }
  for (std::uint32_t i = 0; i < f.ads.size(); ++i) f.ads[i].ad_id = i;
  f.graph = build_graph(f.ads, GraphOptions{});
  for (const auto& c : f.graph.components) {
    LabeledComponent l;
    l.component_id = c.id;
    l.size = c.members.size();
    if (c.members.size() > 1 && g() % 2) l.identifiers = IdentifierWitness{EntityCategory::PhoneNumber, 2};
    f.labels.push_back(l);
  }
  return f;
}

std::vector<Component> sized(std::initializer_list<std::size_t> sizes) {
  std::vector<Component> out;
  NodeId next = 0;
  for (std::size_t s : sizes) {
    Component c;
    c.id = next;
    for (std::size_t i = 0; i < s; ++i) c.members.push_back(next++);
    out.push_back(c);
  }
  return out;
}

}  // namespace

TEST_CASE("split keeps components whole and lands near the target") {
  std::mt19937_64 g(1);
  for (int it = 0; it < 50; ++it) {
    std::vector<std::size_t> sizes;
    std::size_t total = 0;
    for (int i = 0; i < 400; ++i) {
      sizes.push_back(1 + (g() % 10 == 0 ? g() % 30 : 0));
      total += sizes.back();
    }
    std::vector<Component> comps;
    NodeId next = 0;
    for (auto s : sizes) {
      Component c;
      c.id = next;
      for (std::size_t i = 0; i < s; ++i) c.members.push_back(next++);
      comps.push_back(c);
    }
    const auto split = split_components(comps, 0.8, g());
    CHECK(split.train_ads + split.test_ads == total);
    CHECK(std::abs(split.achieved - 0.8) < 0.02);
    for (const auto& c : comps) {
      for (auto m : c.members) CHECK(split.ad_side[m] == split.component_side.at(c.id));
    }
  }
}

TEST_CASE("split is a pure function of the seed") {
  const auto comps = sized({3, 1, 1, 7, 2, 2, 1, 5, 1, 1, 4});
  const auto a = split_components(comps, 0.8, 42);
  const auto b = split_components(comps, 0.8, 42);
  CHECK(a.ad_side == b.ad_side);
  bool differs = false;
  for (std::uint64_t s = 0; s < 20 && !differs; ++s) differs = split_components(comps, 0.8, s).ad_side != a.ad_side;
  CHECK(differs);
}

TEST_CASE("giant component goes to train; a lone component too") {
  const auto comps = sized({1500, 100, 200, 50, 10});
  const auto split = split_components(comps, 0.8, 3);
  REQUIRE(split.forced_giant);
  CHECK(*split.forced_giant == 0);
  CHECK(split.component_side.at(0) == Side::Train);

  const auto one = split_components(sized({9}), 0.8, 3);
  CHECK(one.train_ads == 9);
  CHECK(one.test_ads == 0);
  CHECK_FALSE(one.warnings.empty());
  CHECK_THROWS_AS(split_components(comps, 1.0, 0), std::invalid_argument);
}

TEST_CASE("split.csv round trip") {
  const auto comps = sized({2, 3, 1, 1, 4});
  const auto split = split_components(comps, 0.6, 8);
  const auto dir = oracle::scratch_dir("split");
  write_split_csv(dir / "split.csv", split, comps);
  const auto sides = read_split_csv(dir / "split.csv");
  CHECK(sides == split.component_side);
  CHECK(assignment_from_sides(comps, sides, 0.6).ad_side == split.ad_side);
  std::filesystem::remove_all(dir);
}

TEST_CASE("OAD pairs: in-side edges minus near duplicates, balanced by non-edges") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto f = make_fixture(seed, 40, 60);
    const auto split = split_components(f.graph.components, 0.8, seed);
    const auto oad = emit_oad(f.graph, f.ads, split, OadOptions{0.5, false, seed});
    CHECK(oad.cross_side_edges == 0);
    for (Side side : kSides) {
      const int si = static_cast<int>(side);
      std::size_t pos = 0, neg = 0, want_pos = 0;
      for (const auto& e : f.graph.edges) {
        if (split.ad_side[e.a] != side) continue;
        if (oracle::similarity(utf8_decode(f.ads[e.a].description), utf8_decode(f.ads[e.b].description)) < 0.5) {
          ++want_pos;
        }
      }
      std::set<std::pair<NodeId, NodeId>> seen;
      for (const auto& p : oad.pairs[si]) {
        CHECK(p.a < p.b);
        CHECK(split.ad_side[p.a] == side);
        CHECK(split.ad_side[p.b] == side);
        CHECK(p.positive == f.graph.has_edge(p.a, p.b));
        CHECK(seen.insert({p.a, p.b}).second);
        (p.positive ? pos : neg)++;
      }
      CHECK(pos == want_pos);
      CHECK(oad.stats[si].positives == pos);
      if (pos > 0) CHECK(neg == pos);
    }
  }
}

TEST_CASE("OAD negatives are seeded") {
  const auto f = make_fixture(9, 40, 60);
  const auto split = split_components(f.graph.components, 0.8, 9);
  const auto a = emit_oad(f.graph, f.ads, split, OadOptions{0.5, false, 1});
  const auto b = emit_oad(f.graph, f.ads, split, OadOptions{0.5, false, 1});
  const auto c = emit_oad(f.graph, f.ads, split, OadOptions{0.5, false, 2});
  auto key = [](const OadDataset& d) {
    std::vector<std::pair<NodeId, NodeId>> v;
    for (const auto& s : d.pairs) for (const auto& p : s) v.emplace_back(p.a, p.b);
    return v;
  };
  CHECK(key(a) == key(b));
  CHECK(key(a) != key(c));
}

TEST_CASE("HTRP: greedy in ad order, admitted set is pairwise dissimilar") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto f = make_fixture(seed, 30, 50);
    const auto split = split_components(f.graph.components, 0.8, seed);
    const auto htrp = emit_htrp(f.ads, f.graph.component_of, f.labels, split, HtrpOptions{});
    std::map<NodeId, bool> verdict;
    for (const auto& l : f.labels) verdict[l.component_id] = l.positive();
    for (Side side : kSides) {
      const int si = static_cast<int>(side);
      std::vector<NodeId> admitted;
      for (NodeId v = 0; v < f.ads.size(); ++v) {
        if (split.ad_side[v] != side) continue;
        bool near = false;
        for (NodeId a : admitted) {
          near |= oracle::similarity(utf8_decode(f.ads[v].description), utf8_decode(f.ads[a].description)) >= 0.5;
        }
        if (!near) admitted.push_back(v);
      }
      REQUIRE(htrp.examples[si].size() == admitted.size());
      for (std::size_t i = 0; i < admitted.size(); ++i) {
        CHECK(htrp.examples[si][i].ad_id == admitted[i]);
        CHECK(htrp.examples[si][i].positive == verdict.at(f.graph.component_of[admitted[i]]));
      }
      const auto& st = htrp.stats[si];
      CHECK(st.admitted + st.discarded_similar == st.candidates);
      CHECK(st.positives + st.negatives == st.admitted);
    }
  }
}

TEST_CASE("HTRP per-class gate admits at least as many") {
  const auto f = make_fixture(4, 30, 50);
  const auto split = split_components(f.graph.components, 0.8, 4);
  const auto joint = emit_htrp(f.ads, f.graph.component_of, f.labels, split, HtrpOptions{0.5, false});
  const auto per = emit_htrp(f.ads, f.graph.component_of, f.labels, split, HtrpOptions{0.5, true});
  for (int s = 0; s < 2; ++s) CHECK(per.stats[s].admitted >= joint.stats[s].admitted);
}

TEST_CASE("mask prevalence counts tokens per example") {
  std::vector<AdRecord> ads(3);
  for (std::uint32_t i = 0; i < 3; ++i) ads[i].ad_id = i;
  ads[0].masked_description = "[PHONE] and [PHONE] [NAME]";
  ads[1].masked_description = "nothing";
  ads[2].masked_description = "[[PHONE]] [PHONE]";
  HtrpDataset h;
  h.examples[0] = {{0, true, Side::Train}, {1, true, Side::Train}, {2, false, Side::Train}};
  const auto p = mask_prevalence(h, ads);
  const auto& pos_phone = p.cells[0][1][index_of(EntityCategory::PhoneNumber)];
  CHECK(pos_phone.tokens == 2);
  CHECK(pos_phone.examples == 2);
  CHECK(pos_phone.value() == 1.0);
  CHECK(p.cells[0][0][index_of(EntityCategory::PhoneNumber)].tokens == 1);
  CHECK_FALSE(p.cells[1][0][0].defined());
}

TEST_CASE("dataset jsonl uses the masked text") {
  std::vector<AdRecord> ads(2);
  ads[0].ad_id = 0;
  ads[0].description = "call 5551234567";
  ads[0].masked_description = "call [PHONE]";
  ads[1].ad_id = 1;
  ads[1].description = "plain";
  const std::vector<HtrpExample> ex = {{0, true, Side::Train}, {1, false, Side::Train}};
  const auto dir = oracle::scratch_dir("jsonl");
  write_htrp_jsonl(dir / "h.jsonl", ex, ads);
  std::ifstream in(dir / "h.jsonl");
  std::string l1, l2;
  std::getline(in, l1);
  std::getline(in, l2);
  const auto j1 = nlohmann::json::parse(l1), j2 = nlohmann::json::parse(l2);
  CHECK(j1.at("text") == "call [PHONE]");
  CHECK(j1.at("label") == 1);
  CHECK(j2.at("text") == "plain");
  CHECK(j2.at("label") == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("signed-rank test: exact p against enumeration") {
  const std::vector<double> x9 = {1, 2, 3, 4, 5, 6, 7, 8, 9}, zero9(9, 0.0);
  const auto r9 = wilcoxon_signed_rank(x9, zero9);
  CHECK(r9.exact);
  CHECK(r9.statistic == 0.0);
  CHECK(r9.p_value == doctest::Approx(2.0 / 512.0).epsilon(1e-12));

  std::mt19937_64 g(77);
  for (int it = 0; it < 300; ++it) {
    const std::size_t n = 1 + g() % 12;
    std::vector<double> x(n), y(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(g() % 7);
      y[i] = static_cast<double>(g() % 7);
      d[i] = x[i] - y[i];
    }
    const auto r = wilcoxon_signed_rank(x, y);
    if (r.all_zero) continue;
    CHECK(r.p_value == doctest::Approx(oracle::signed_rank_p_enumerated(d)).epsilon(1e-12));
    CHECK(r.w_plus + r.w_minus == doctest::Approx(r.n * (r.n + 1) / 2.0));
  }
}

TEST_CASE("signed-rank test: normal approximation for large n") {
  std::mt19937_64 g(78);
  std::normal_distribution<double> nd(0.3, 1.0);
  std::vector<double> x(40), y(40, 0.0);
  for (auto& v : x) v = nd(g);
  const auto r = wilcoxon_signed_rank(x, y);
  CHECK_FALSE(r.exact);
  // no ties: mean n(n+1)/4, variance n(n+1)(2n+1)/24, continuity 0.5
  const double mean = 40.0 * 41.0 / 4.0, sd = std::sqrt(40.0 * 41.0 * 81.0 / 24.0);
  const double z = (std::abs(r.statistic - mean) - 0.5) / sd;
  CHECK(r.p_value == doctest::Approx(std::erfc(z / std::sqrt(2.0))).epsilon(1e-12));
  CHECK_THROWS(wilcoxon_signed_rank(std::vector<double>{1}, std::vector<double>{}));
  CHECK(wilcoxon_signed_rank(std::vector<double>{1, 2}, std::vector<double>{1, 2}).all_zero);
}

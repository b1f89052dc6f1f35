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

#include <algorithm>
#include <random>

#include "adgraph/graph.hpp"
#include "adgraph/graph_io.hpp"
#include "oracles.hpp"

using namespace adgraph;

namespace {

CanonicalEntity ent(EntityCategory c, std::string v) {
  CanonicalEntity e;
  e.category = c;
  e.value = std::move(v);
  return e;
}

// n ads sharing identifiers drawn from small pools.
std::vector<AdRecord> random_corpus(std::mt19937_64& g, std::size_t n) {
  std::vector<AdRecord> ads(n);
  for (std::size_t i = 0; i < n; ++i) {
    ads[i].ad_id = static_cast<std::uint32_t>(i);
    ads[i].description = "ad " + std::to_string(i);
    const int k = static_cast<int>(g() % 3);
    for (int j = 0; j < k; ++j) {
      switch (g() % 4) {
        case 0: ads[i].entities.push_back(ent(EntityCategory::PhoneNumber, "+1555000" + std::to_string(g() % 40))); break;
        case 1: ads[i].entities.push_back(ent(EntityCategory::Snapchat, "s" + std::to_string(g() % 40))); break;
        case 2: ads[i].entities.push_back(ent(EntityCategory::NameNickname, "n" + std::to_string(g() % 5))); break;
        default: ads[i].image_hashes.insert("h" + std::to_string(g() % 60));
      }
    }
  }
  return ads;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_of(const RelatednessGraph& g) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (const auto& e : g.edges) out.emplace_back(e.a, e.b);
  return out;
}

}  // namespace

TEST_CASE("union-find components match breadth-first search") {
  std::mt19937_64 g(3);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 1 + g() % 80;
    std::vector<std::pair<NodeId, NodeId>> edges;
    const std::size_t m = g() % (n + 10);
    for (std::size_t i = 0; i < m; ++i) {
      edges.emplace_back(static_cast<NodeId>(g() % n), static_cast<NodeId>(g() % n));
    }
    const auto uf = connected_components(n, edges);
    const auto bfs = oracle::bfs_components(n, edges);
    CHECK(uf == bfs);
  }
}

TEST_CASE("graph: edges exist exactly for shared connectors") {
  std::mt19937_64 g(7);
  for (int it = 0; it < 30; ++it) {
    const auto ads = random_corpus(g, 120);
    const auto graph = build_graph(ads, GraphOptions{});
    for (std::size_t a = 0; a < ads.size(); ++a) {
      for (std::size_t b = a + 1; b < ads.size(); ++b) {
        bool shared = false;
        for (const auto& x : ads[a].entities) {
          if (x.category == EntityCategory::NameNickname) continue;
          for (const auto& y : ads[b].entities) shared |= x.category == y.category && x.value == y.value;
        }
        for (const auto& h : ads[a].image_hashes) shared |= ads[b].image_hashes.count(h) > 0;
        REQUIRE(graph.has_edge(static_cast<NodeId>(a), static_cast<NodeId>(b)) == shared);
      }
    }
    CHECK(graph.component_of == oracle::bfs_components(ads.size(), pairs_of(graph)));
    for (const auto& e : graph.edges) {
      CHECK(e.a < e.b);
      CHECK(!e.evidence.empty());
      CHECK(std::is_sorted(e.evidence.begin(), e.evidence.end()));
    }
  }
}

TEST_CASE("graph: names never connect, images can be switched off") {
  std::vector<AdRecord> ads(2);
  ads[0].ad_id = 0;
  ads[1].ad_id = 1;
  ads[0].entities.push_back(ent(EntityCategory::NameNickname, "ana"));
  ads[1].entities.push_back(ent(EntityCategory::NameNickname, "ana"));
  ads[0].image_hashes = {"x"};
  ads[1].image_hashes = {"x"};
  CHECK(build_graph(ads, GraphOptions{}).edges.size() == 1);
  GraphOptions no_images;
  no_images.use_images = false;
  CHECK(build_graph(ads, no_images).edges.empty());
}

TEST_CASE("graph: a shared connector makes a clique, or a star above the cap") {
  std::vector<AdRecord> ads(6);
  for (std::uint32_t i = 0; i < 6; ++i) {
    ads[i].ad_id = i;
    ads[i].entities.push_back(ent(EntityCategory::PhoneNumber, "+15550001111"));
  }
  const auto clique = build_graph(ads, GraphOptions{});
  CHECK(clique.edges.size() == 15);
  CHECK(clique.components.size() == 1);
  GraphOptions capped;
  capped.star_cap = 4;
  const auto star = build_graph(ads, capped);
  CHECK(star.edges.size() == 5);
  for (const auto& e : star.edges) CHECK(e.a == 0);
  CHECK(star.component_of == clique.component_of);
}

TEST_CASE("graph: input order does not change the result") {
  std::mt19937_64 g(9);
  auto ads = random_corpus(g, 200);
  const auto base = build_graph(ads, GraphOptions{});
  std::shuffle(ads.begin(), ads.end(), g);
  const auto shuffled = build_graph(ads, GraphOptions{});
  CHECK(pairs_of(base) == pairs_of(shuffled));
  CHECK(base.component_of == shuffled.component_of);
  CHECK(base.connector_keys == shuffled.connector_keys);
}

TEST_CASE("component ids are the smallest member") {
  std::mt19937_64 g(13);
  const auto ads = random_corpus(g, 300);
  const auto graph = build_graph(ads, GraphOptions{});
  std::size_t total = 0;
  for (const auto& c : graph.components) {
    CHECK(c.id == *std::min_element(c.members.begin(), c.members.end()));
    for (auto m : c.members) CHECK(graph.component_of[m] == c.id);
    total += c.members.size();
  }
  CHECK(total == ads.size());
}

TEST_CASE("size buckets") {
  CHECK(size_bucket(1) == SizeBucket::One);
  CHECK(size_bucket(2) == SizeBucket::TwoToTen);
  CHECK(size_bucket(10) == SizeBucket::TwoToTen);
  CHECK(size_bucket(11) == SizeBucket::ElevenToHundred);
  CHECK(size_bucket(100) == SizeBucket::ElevenToHundred);
  CHECK(size_bucket(101) == SizeBucket::HundredOneToThousand);
  CHECK(size_bucket(1000) == SizeBucket::HundredOneToThousand);
  CHECK(size_bucket(1001) == SizeBucket::OverThousand);
}

TEST_CASE("graph.bin and components.csv round trip") {
  std::mt19937_64 g(17);
  const auto ads = random_corpus(g, 150);
  const auto graph = build_graph(ads, GraphOptions{});
  const auto dir = oracle::scratch_dir("graph_io");
  write_graph(dir / "graph.bin", graph);
  const auto back = read_graph(dir / "graph.bin");
  CHECK(back.node_count == graph.node_count);
  CHECK(back.connector_keys == graph.connector_keys);
  CHECK(back.connector_members == graph.connector_members);
  CHECK(pairs_of(back) == pairs_of(graph));
  for (std::size_t i = 0; i < graph.edges.size(); ++i) CHECK(back.edges[i].evidence == graph.edges[i].evidence);
  CHECK(back.component_of == graph.component_of);

  std::vector<std::uint64_t> o1, o2;
  std::vector<NodeId> t1, t2;
  graph.adjacency(o1, t1);
  back.adjacency(o2, t2);
  CHECK(o1 == o2);
  CHECK(t1 == t2);

  write_components_csv(dir / "components.csv", graph);
  CHECK(read_components_csv(dir / "components.csv") == graph.component_of);

  // truncation is detected
  std::filesystem::resize_file(dir / "graph.bin", std::filesystem::file_size(dir / "graph.bin") - 3);
  CHECK_THROWS_AS(read_graph(dir / "graph.bin"), GraphFormatError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("dot rendering refuses large components") {
  std::vector<AdRecord> ads(5);
  for (std::uint32_t i = 0; i < 5; ++i) {
    ads[i].ad_id = i;
    ads[i].image_hashes = {"same"};
  }
  const auto graph = build_graph(ads, GraphOptions{});
  const auto dot = component_dot(graph, 0);
  CHECK(dot.find("graph") != std::string::npos);
  CHECK(dot.find("n0 -- n4") != std::string::npos);
  CHECK_THROWS(component_dot(graph, 0, 3));
}

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

#include "adgraph/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace adgraph {

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
  for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<NodeId>(i);
}

NodeId UnionFind::find(NodeId x) {
  NodeId root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    const NodeId next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

bool UnionFind::unite(NodeId a, NodeId b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  return true;
}

namespace {

std::vector<NodeId> smallest_member_labels(UnionFind& uf) {
  const std::size_t n = uf.size();
  std::vector<NodeId> min_of_root(n, static_cast<NodeId>(n));
  for (std::size_t v = 0; v < n; ++v) {
    const NodeId r = uf.find(static_cast<NodeId>(v));
    min_of_root[r] = std::min(min_of_root[r], static_cast<NodeId>(v));
  }
  std::vector<NodeId> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = min_of_root[uf.find(static_cast<NodeId>(v))];
  return out;
}

std::uint64_t pair_key(NodeId a, NodeId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

std::vector<NodeId> connected_components(std::size_t node_count,
                                         std::span<const std::pair<NodeId, NodeId>> edges) {
  UnionFind uf(node_count);
  for (const auto& [a, b] : edges) uf.unite(a, b);
  return smallest_member_labels(uf);
}

std::vector<NodeId> components_from_groups(std::size_t node_count,
                                           std::span<const std::vector<NodeId>> groups) {
  UnionFind uf(node_count);
  for (const auto& g : groups) {
    for (std::size_t i = 1; i < g.size(); ++i) uf.unite(g[0], g[i]);
  }
  return smallest_member_labels(uf);
}

std::vector<Component> component_index(std::span<const NodeId> component_of) {
  std::map<NodeId, std::vector<NodeId>> groups;
  for (std::size_t v = 0; v < component_of.size(); ++v) {
    groups[component_of[v]].push_back(static_cast<NodeId>(v));
  }
  std::vector<Component> out;
  out.reserve(groups.size());
  for (auto& [id, members] : groups) out.push_back({id, std::move(members)});
  return out;
}

RelatednessGraph build_graph(std::span<const AdRecord> corpus, const GraphOptions& options) {
  RelatednessGraph g;
  g.node_count = corpus.size();

  const std::set<EntityCategory> wanted(options.connector_categories.begin(),
                                        options.connector_categories.end());
  std::map<std::string, std::set<NodeId>> groups;
  for (const AdRecord& ad : corpus) {
    for (const auto& e : ad.entities) {
      if (wanted.count(e.category)) groups[e.key()].insert(ad.ad_id);
    }
    if (options.use_images) {
      for (const auto& h : ad.image_hashes) groups["image:" + h].insert(ad.ad_id);
    }
  }

  g.connector_keys.reserve(groups.size());
  g.connector_members.reserve(groups.size());
  for (auto& [key, members] : groups) {
    g.connector_keys.push_back(key);
    g.connector_members.emplace_back(members.begin(), members.end());
  }

  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> evidence;
  for (std::uint32_t c = 0; c < g.connector_members.size(); ++c) {
    const auto& m = g.connector_members[c];
    if (m.size() < 2) continue;
    if (options.star_cap != 0 && m.size() > options.star_cap) {
      for (std::size_t j = 1; j < m.size(); ++j) evidence[pair_key(m[0], m[j])].push_back(c);
      continue;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) evidence[pair_key(m[i], m[j])].push_back(c);
    }
  }
  g.edges.reserve(evidence.size());
  for (auto& [key, ev] : evidence) {
    std::sort(ev.begin(), ev.end());
    g.edges.push_back({static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu),
                       std::move(ev)});
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge& x, const Edge& y) {
    return pair_key(x.a, x.b) < pair_key(y.a, y.b);
  });

  g.component_of = components_from_groups(g.node_count, g.connector_members);
  g.components = component_index(g.component_of);
  return g;
}

const Edge* RelatednessGraph::find_edge(NodeId a, NodeId b) const {
  if (a > b) std::swap(a, b);
  const std::uint64_t key = pair_key(a, b);
  auto it = std::lower_bound(edges.begin(), edges.end(), key,
                             [](const Edge& e, std::uint64_t k) { return pair_key(e.a, e.b) < k; });
  if (it == edges.end() || it->a != a || it->b != b) return nullptr;
  return &*it;
}

bool RelatednessGraph::has_edge(NodeId a, NodeId b) const { return find_edge(a, b) != nullptr; }

void RelatednessGraph::adjacency(std::vector<std::uint64_t>& offsets,
                                 std::vector<NodeId>& targets) const {
  offsets.assign(node_count + 1, 0);
  for (const auto& e : edges) {
    ++offsets[e.a + 1];
    ++offsets[e.b + 1];
  }
  for (std::size_t v = 0; v < node_count; ++v) offsets[v + 1] += offsets[v];
  targets.assign(offsets[node_count], 0);
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& e : edges) {
    targets[cursor[e.a]++] = e.b;
    targets[cursor[e.b]++] = e.a;
  }
  for (std::size_t v = 0; v < node_count; ++v) {
    std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[v]),
              targets.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]));
  }
}

std::size_t RelatednessGraph::linking_connector_count() const {
  return static_cast<std::size_t>(std::count_if(connector_members.begin(), connector_members.end(),
                                                [](const auto& m) { return m.size() >= 2; }));
}

SizeBucket size_bucket(std::size_t size) {
  if (size <= 1) return SizeBucket::One;
  if (size <= 10) return SizeBucket::TwoToTen;
  if (size <= 100) return SizeBucket::ElevenToHundred;
  if (size <= 1000) return SizeBucket::HundredOneToThousand;
  return SizeBucket::OverThousand;
}

std::string_view size_bucket_label(SizeBucket b) {
  switch (b) {
    case SizeBucket::One: return "1";
    case SizeBucket::TwoToTen: return "2-10";
    case SizeBucket::ElevenToHundred: return "11-100";
    case SizeBucket::HundredOneToThousand: return "101-1000";
    case SizeBucket::OverThousand: return "1000+";
  }
  return "?";
}

ComponentStats component_stats(const RelatednessGraph& graph, std::span<const AdRecord> corpus) {
  ComponentStats s;
  s.component_count = graph.components.size();
  for (const auto& c : graph.components) {
    ++s.histogram[static_cast<std::size_t>(size_bucket(c.members.size()))];
    s.largest = std::max(s.largest, c.members.size());
    std::set<std::string_view> provenances;
    for (NodeId v : c.members) {
      for (const auto& p : corpus[v].provenances) provenances.insert(p);
    }
    if (provenances.size() >= 2) ++s.mixed_provenance;
  }
  return s;
}

ordered_json to_json(const ComponentStats& s) {
  ordered_json j;
  ordered_json hist;
  for (std::size_t b = 0; b < kSizeBucketCount; ++b) {
    hist[std::string(size_bucket_label(static_cast<SizeBucket>(b)))] = s.histogram[b];
  }
  j["size_histogram"] = std::move(hist);
  j["components"] = s.component_count;
  j["largest_component"] = s.largest;
  j["mixed_provenance_components"] = s.mixed_provenance;
  return j;
}

}  // namespace adgraph

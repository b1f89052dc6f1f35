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
#include <span>
#include <string>
#include <vector>

#include "adgraph/corpus.hpp"
#include "adgraph/entity.hpp"

namespace adgraph {

using NodeId = std::uint32_t;

// Disjoint-set forest with union by rank and path compression.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  NodeId find(NodeId x);
  bool unite(NodeId a, NodeId b);
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<NodeId> parent_;
  std::vector<std::uint8_t> rank_;
};

struct Edge {
  NodeId a = 0;  // a < b
  NodeId b = 0;
  std::vector<std::uint32_t> evidence;  // connector ids, ascending
};

struct Component {
  NodeId id = 0;  // smallest member
  std::vector<NodeId> members;
};

struct GraphOptions {
  std::vector<EntityCategory> connector_categories = {
      EntityCategory::PhoneNumber, EntityCategory::Email, EntityCategory::Onlyfans,
      EntityCategory::Snapchat, EntityCategory::Twitter};
  bool use_images = true;
  // Connector groups larger than this become stars centred on their
  // smallest member instead of cliques. 0 disables the cap.
  std::size_t star_cap = 0;
};

struct RelatednessGraph {
  std::size_t node_count = 0;
  // Typed connector values ("phone:+1...", "image:ab12..."), sorted. Values
  // seen in a single ad are kept; they simply never produce an edge.
  std::vector<std::string> connector_keys;
  std::vector<std::vector<NodeId>> connector_members;
  std::vector<Edge> edges;  // sorted by (a, b)
  std::vector<NodeId> component_of;
  std::vector<Component> components;  // sorted by id

  bool has_edge(NodeId a, NodeId b) const;
  const Edge* find_edge(NodeId a, NodeId b) const;
  // CSR adjacency: neighbours of v are targets[offsets[v] .. offsets[v+1]).
  void adjacency(std::vector<std::uint64_t>& offsets, std::vector<NodeId>& targets) const;
  std::size_t linking_connector_count() const;
};

RelatednessGraph build_graph(std::span<const AdRecord> corpus, const GraphOptions& options);

// Partition by union-find over an explicit edge list; ids are the smallest
// member of each component.
std::vector<NodeId> connected_components(std::size_t node_count,
                                         std::span<const std::pair<NodeId, NodeId>> edges);

// Same partition computed from connector groups without materialized edges.
std::vector<NodeId> components_from_groups(std::size_t node_count,
                                           std::span<const std::vector<NodeId>> groups);

std::vector<Component> component_index(std::span<const NodeId> component_of);

enum class SizeBucket { One, TwoToTen, ElevenToHundred, HundredOneToThousand, OverThousand };
inline constexpr std::size_t kSizeBucketCount = 5;
SizeBucket size_bucket(std::size_t size);
std::string_view size_bucket_label(SizeBucket b);

struct ComponentStats {
  std::array<std::size_t, kSizeBucketCount> histogram{};
  std::size_t mixed_provenance = 0;
  std::size_t component_count = 0;
  std::size_t largest = 0;
};

ComponentStats component_stats(const RelatednessGraph& graph, std::span<const AdRecord> corpus);

ordered_json to_json(const ComponentStats& stats);

}  // namespace adgraph

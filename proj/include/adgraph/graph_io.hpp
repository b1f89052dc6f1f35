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

#include <filesystem>
#include <stdexcept>
#include <string>

#include "adgraph/graph.hpp"

namespace adgraph {

class GraphFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// graph.bin, all integers little-endian:
//
//   char[8]  magic "ADGRAPH\0"
//   u32      version (1)
//   u32      node_count
//   u32      connector_count
//   u64      edge_count
//   connector_count x { u32 key_len, key bytes, u32 member_count, u32 members[] }
//   u64      offsets[node_count + 1]            CSR row offsets
//   u32      neighbours[2 * edge_count]         ascending within a row
//   edge_count x { u32 a, u32 b, u32 n, u32 connector_ids[n] }   a < b
//   u32      component_of[node_count]
void write_graph(const std::filesystem::path& path, const RelatednessGraph& graph);
RelatednessGraph read_graph(const std::filesystem::path& path);

// "ad_id,component_id" with a header row.
void write_components_csv(const std::filesystem::path& path, const RelatednessGraph& graph);
std::vector<NodeId> read_components_csv(const std::filesystem::path& path);

// Graphviz rendering of one component; refuses components above max_nodes.
std::string component_dot(const RelatednessGraph& graph, NodeId component_id,
                          std::size_t max_nodes = 50);

}  // namespace adgraph

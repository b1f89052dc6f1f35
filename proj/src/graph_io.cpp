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

#include "adgraph/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "adgraph/text.hpp"

namespace adgraph {
namespace {

constexpr char kMagic[8] = {'A', 'D', 'G', 'R', 'A', 'P', 'H', '\0'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void u32(std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(b, 4);
  }
  void u64(std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(b, 8);
  }
  void bytes(std::string_view s) { out_.write(s.data(), static_cast<std::streamsize>(s.size())); }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  std::uint32_t u32() {
    unsigned char b[4];
    read(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    unsigned char b[8];
    read(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  std::string bytes(std::size_t n) {
    std::string s(n, '\0');
    read(reinterpret_cast<unsigned char*>(s.data()), n);
    return s;
  }

 private:
  void read(unsigned char* dst, std::size_t n) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw GraphFormatError("truncated graph file");
  }
  std::istream& in_;
};

}  // namespace

void write_graph(const std::filesystem::path& path, const RelatednessGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphFormatError("cannot write " + path.string());
  Writer w(out);
  w.bytes(std::string_view(kMagic, 8));
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(g.node_count));
  w.u32(static_cast<std::uint32_t>(g.connector_keys.size()));
  w.u64(g.edges.size());
  for (std::size_t c = 0; c < g.connector_keys.size(); ++c) {
    w.u32(static_cast<std::uint32_t>(g.connector_keys[c].size()));
    w.bytes(g.connector_keys[c]);
    w.u32(static_cast<std::uint32_t>(g.connector_members[c].size()));
    for (NodeId v : g.connector_members[c]) w.u32(v);
  }
  std::vector<std::uint64_t> offsets;
  std::vector<NodeId> targets;
  g.adjacency(offsets, targets);
  for (auto o : offsets) w.u64(o);
  for (auto t : targets) w.u32(t);
  for (const auto& e : g.edges) {
    w.u32(e.a);
    w.u32(e.b);
    w.u32(static_cast<std::uint32_t>(e.evidence.size()));
    for (auto id : e.evidence) w.u32(id);
  }
  for (auto c : g.component_of) w.u32(c);
  if (!out) throw GraphFormatError("write failed for " + path.string());
}

RelatednessGraph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphFormatError("cannot open " + path.string());
  Reader r(in);
  if (r.bytes(8) != std::string_view(kMagic, 8)) throw GraphFormatError("bad magic in " + path.string());
  if (r.u32() != kVersion) throw GraphFormatError("unsupported graph version");
  RelatednessGraph g;
  g.node_count = r.u32();
  const std::uint32_t connectors = r.u32();
  const std::uint64_t edge_count = r.u64();
  g.connector_keys.reserve(connectors);
  g.connector_members.reserve(connectors);
  for (std::uint32_t c = 0; c < connectors; ++c) {
    g.connector_keys.push_back(r.bytes(r.u32()));
    std::vector<NodeId> members(r.u32());
    for (auto& v : members) v = r.u32();
    g.connector_members.push_back(std::move(members));
  }
  for (std::size_t i = 0; i <= g.node_count; ++i) r.u64();
  for (std::uint64_t i = 0; i < 2 * edge_count; ++i) r.u32();
  g.edges.resize(edge_count);
  for (auto& e : g.edges) {
    e.a = r.u32();
    e.b = r.u32();
    e.evidence.resize(r.u32());
    for (auto& id : e.evidence) {
      id = r.u32();
      if (id >= connectors) throw GraphFormatError("edge evidence out of range");
    }
    if (e.a >= e.b || e.b >= g.node_count) throw GraphFormatError("malformed edge");
  }
  g.component_of.resize(g.node_count);
  for (auto& c : g.component_of) c = r.u32();
  g.components = component_index(g.component_of);
  return g;
}

void write_components_csv(const std::filesystem::path& path, const RelatednessGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphFormatError("cannot write " + path.string());
  out << "ad_id,component_id\n";
  for (std::size_t v = 0; v < g.node_count; ++v) out << v << ',' << g.component_of[v] << '\n';
}

std::vector<NodeId> read_components_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GraphFormatError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (trim(line) != "ad_id,component_id") throw GraphFormatError("unexpected header in " + path.string());
  std::vector<NodeId> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw GraphFormatError("malformed row in " + path.string());
    const auto ad = std::stoul(line.substr(0, comma));
    if (ad != out.size()) throw GraphFormatError("components.csv rows out of order");
    out.push_back(static_cast<NodeId>(std::stoul(line.substr(comma + 1))));
  }
  return out;
}

std::string component_dot(const RelatednessGraph& g, NodeId component_id, std::size_t max_nodes) {
  auto it = std::lower_bound(g.components.begin(), g.components.end(), component_id,
                             [](const Component& c, NodeId id) { return c.id < id; });
  if (it == g.components.end() || it->id != component_id) {
    throw GraphFormatError("no component " + std::to_string(component_id));
  }
  if (it->members.size() > max_nodes) {
    throw GraphFormatError("component " + std::to_string(component_id) + " has " +
                           std::to_string(it->members.size()) + " nodes; DOT export is capped at " +
                           std::to_string(max_nodes));
  }
  std::ostringstream os;
  os << "graph component_" << component_id << " {\n";
  for (NodeId v : it->members) os << "  n" << v << " [label=\"" << v << "\"];\n";
  for (const auto& e : g.edges) {
    if (g.component_of[e.a] != component_id) continue;
    os << "  n" << e.a << " -- n" << e.b << " [label=\"";
    for (std::size_t i = 0; i < e.evidence.size(); ++i) {
      if (i) os << "\\n";
      os << g.connector_keys[e.evidence[i]];
    }
    os << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace adgraph

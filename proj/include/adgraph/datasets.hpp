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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adgraph/corpus.hpp"
#include "adgraph/graph.hpp"
#include "adgraph/labeler.hpp"
#include "adgraph/wilcoxon.hpp"

namespace adgraph {

enum class Side : std::uint8_t { Train = 0, Test = 1 };
inline constexpr std::array<Side, 2> kSides = {Side::Train, Side::Test};
std::string_view side_name(Side s);
std::optional<Side> parse_side(std::string_view s);

// Components larger than this are placed in train before the shuffle fill.
inline constexpr std::size_t kGiantComponentSize = 1000;

struct SplitAssignment {
  std::map<NodeId, Side> component_side;
  std::vector<Side> ad_side;
  std::size_t train_ads = 0;
  std::size_t test_ads = 0;
  double target = 0.8;
  double achieved = 0.0;
  std::optional<NodeId> forced_giant;
  std::vector<std::string> warnings;
};

SplitAssignment split_components(std::span<const Component> components, double target,
                                 std::uint64_t seed);

// Rebuilds per-ad sides from a component table, e.g. after reading split.csv.
SplitAssignment assignment_from_sides(std::span<const Component> components,
                                      const std::map<NodeId, Side>& sides, double target);

// Text used by every emitted dataset: the masked description when present.
const std::string& dataset_text(const AdRecord& ad);

struct OadPair {
  NodeId a = 0;  // a < b
  NodeId b = 0;
  bool positive = false;
  Side side = Side::Train;
};

struct OadSideStats {
  std::size_t edges = 0;
  std::size_t positives = 0;
  std::size_t discarded_similar = 0;
  std::size_t negatives = 0;
  std::size_t negatives_rejected_similar = 0;
  std::size_t candidate_nodes = 0;
};

struct OadOptions {
  double gate = 0.5;
  bool gate_negatives = false;
  std::uint64_t seed = 2;
};

struct OadDataset {
  std::array<std::vector<OadPair>, 2> pairs;  // per side, sorted by (a, b)
  std::array<OadSideStats, 2> stats;
  std::size_t cross_side_edges = 0;  // always 0 for a component split
  std::vector<std::string> warnings;
};

OadDataset emit_oad(const RelatednessGraph& graph, std::span<const AdRecord> corpus,
                    const SplitAssignment& split, const OadOptions& options);

struct HtrpExample {
  NodeId ad_id = 0;
  bool positive = false;
  Side side = Side::Train;
};

struct HtrpSideStats {
  std::size_t candidates = 0;
  std::size_t admitted = 0;
  std::size_t discarded_similar = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::uint64_t comparisons = 0;
};

struct HtrpOptions {
  double gate = 0.5;
  // Screen each class only against admitted ads of the same class.
  bool per_class_gate = false;
};

struct HtrpDataset {
  std::array<std::vector<HtrpExample>, 2> examples;  // per side, ascending ad_id
  std::array<HtrpSideStats, 2> stats;
  std::vector<std::string> warnings;
};

HtrpDataset emit_htrp(std::span<const AdRecord> corpus, std::span<const NodeId> component_of,
                      std::span<const LabeledComponent> labels, const SplitAssignment& split,
                      const HtrpOptions& options);

struct PrevalenceCell {
  std::size_t tokens = 0;
  std::size_t examples = 0;
  bool defined() const { return examples > 0; }
  double value() const { return examples ? static_cast<double>(tokens) / examples : 0.0; }
};

// cells[side][class][category]; class 1 is positive.
struct MaskPrevalence {
  std::array<std::array<std::array<PrevalenceCell, kCategoryCount>, 2>, 2> cells{};
};

MaskPrevalence mask_prevalence(const HtrpDataset& htrp, std::span<const AdRecord> corpus);

struct BiasReport {
  MaskPrevalence prevalence;
  std::array<std::optional<WilcoxonResult>, 2> tests;  // absent when a class is empty
};

BiasReport bias_report(const HtrpDataset& htrp, std::span<const AdRecord> corpus);

ordered_json to_json(const SplitAssignment& split);
ordered_json to_json(const OadDataset& oad);  // stats only
ordered_json to_json(const HtrpDataset& htrp);  // stats only
ordered_json to_json(const BiasReport& report);

void write_split_csv(const std::filesystem::path& path, const SplitAssignment& split,
                     std::span<const Component> components);
std::map<NodeId, Side> read_split_csv(const std::filesystem::path& path);

// {"ad_id_a","ad_id_b","text_a","text_b","label"} per line.
void write_oad_jsonl(const std::filesystem::path& path, std::span<const OadPair> pairs,
                     std::span<const AdRecord> corpus);
// {"ad_id","text","label"} per line.
void write_htrp_jsonl(const std::filesystem::path& path, std::span<const HtrpExample> examples,
                      std::span<const AdRecord> corpus);

}  // namespace adgraph

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
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "adgraph/corpus.hpp"
#include "adgraph/geo.hpp"
#include "adgraph/graph.hpp"

namespace adgraph {

struct HeuristicConfig {
  double distance_miles = 300.0;
  std::size_t phone_email_threshold = 2;
  std::size_t other_threshold = 3;
  // Categories counted by the identifier heuristic. NameNickname and
  // Location are ignored even if listed.
  std::vector<EntityCategory> identifier_categories = {
      EntityCategory::PhoneNumber, EntityCategory::Email, EntityCategory::Onlyfans,
      EntityCategory::Snapchat, EntityCategory::Twitter};
};

struct DistanceWitness {
  std::string location_a;
  std::string location_b;
  double miles = 0.0;
};

struct IdentifierWitness {
  EntityCategory category = EntityCategory::PhoneNumber;
  std::size_t count = 0;
};

struct LabeledComponent {
  NodeId component_id = 0;
  std::size_t size = 0;
  std::optional<DistanceWitness> distance;        // set iff the heuristic fired
  std::optional<IdentifierWitness> identifiers;   // set iff the heuristic fired
  std::size_t resolved_locations = 0;

  bool distance_fired() const { return distance.has_value(); }
  bool identifiers_fired() const { return identifiers.has_value(); }
  bool positive() const { return distance_fired() || identifiers_fired(); }
};

// Unique canonical locations and hard identifiers across a component.
struct ComponentEvidence {
  std::set<std::string> locations;
  std::array<std::set<std::string>, kCategoryCount> identifiers;
};

ComponentEvidence aggregate_evidence(std::span<const NodeId> members,
                                     std::span<const AdRecord> corpus);

std::size_t identifier_threshold(EntityCategory category, const HeuristicConfig& config);

// Farthest pair among the points if it exceeds threshold_miles. A bound on
// the bounding box skips the quadratic scan when no pair can qualify.
std::optional<DistanceWitness> farthest_pair_over(
    const std::vector<std::pair<std::string, GeoPoint>>& points, double threshold_miles);

// Resolved points are looked up by canonical location string; locations
// absent from `geo` take no part.
LabeledComponent label_component(NodeId component_id, std::span<const NodeId> members,
                                 std::span<const AdRecord> corpus,
                                 const std::map<std::string, GeoPoint>& geo,
                                 const HeuristicConfig& config);

// Every distinct canonical location in the corpus, sorted.
std::vector<std::string> corpus_locations(std::span<const AdRecord> corpus);

struct OverlapReport {
  std::size_t distance_only = 0;
  std::size_t identifiers_only = 0;
  std::size_t both = 0;
  std::size_t negative = 0;
};

OverlapReport heuristic_overlap(std::span<const LabeledComponent> labels);
ordered_json to_json(const OverlapReport& report);
std::string overlap_summary_text(const OverlapReport& report);

// component_id,size,positive,distance_fired,identifiers_fired,location_a,
// location_b,miles,identifier_category,identifier_count
void write_labels_csv(const std::filesystem::path& path, std::span<const LabeledComponent> labels);
std::vector<LabeledComponent> read_labels_csv(const std::filesystem::path& path);

}  // namespace adgraph

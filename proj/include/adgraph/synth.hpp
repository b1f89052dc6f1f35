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

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "adgraph/corpus.hpp"
#include "adgraph/geo.hpp"
#include "adgraph/ner_eval.hpp"

namespace adgraph {

struct SynthOptions {
  std::size_t ads = 10000;  // raw records, reposts included
  std::size_t clusters = 50;
  std::uint64_t seed = 7;
  double repost_mean = 10.0;  // raw records per distinct description
  std::size_t min_cluster = 3;
  std::size_t max_cluster = 12;
  double near_duplicate_rate = 0.25;
  // Background ads that reuse an earlier background text with one sentence
  // changed and fresh identifiers.
  double template_reuse_rate = 0.35;
  double noise_span_rate = 0.3;
  double obfuscation_rate = 0.2;
  double partner_rate = 0.3;
};

enum class ClusterKind { MultiPhone, Traveling, Both, Handles, LocalNegative };
std::string_view cluster_kind_name(ClusterKind k);

struct PlantedCluster {
  std::size_t index = 0;
  ClusterKind kind = ClusterKind::MultiPhone;
  // First post id of every distinct ad in the cluster.
  std::vector<std::string> post_ids;
  std::set<std::string> phones;
  std::set<std::string> emails;
  std::map<std::string, std::set<std::string>> handles;  // category key -> values
  std::set<std::string> locations;
  double max_miles = 0.0;
  bool expect_distance = false;
  bool expect_identifiers = false;

  bool expect_positive() const { return expect_distance || expect_identifiers; }
};

struct SynthCorpus {
  SynthOptions options;
  std::vector<RawAd> raw;           // shuffled feed order
  std::vector<SpanRecord> spans;    // keyed by post_id
  std::map<std::string, std::vector<GeoCandidate>> geo;
  std::vector<PlantedCluster> clusters;
  std::vector<std::string> background_post_ids;  // first post id per singleton
  std::size_t distinct_ads = 0;
};

// Deterministic in the options. Cluster truth uses the default heuristic
// thresholds (2 phones/emails, 3 handles, 300 miles).
SynthCorpus generate_synth(const SynthOptions& options);

ordered_json truth_json(const SynthCorpus& corpus);

// raw.jsonl, spans.jsonl, geo_fixture.jsonl, truth.json
void write_synth(const std::filesystem::path& dir, const SynthCorpus& corpus);

}  // namespace adgraph

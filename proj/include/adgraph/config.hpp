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
#include <stdexcept>
#include <string>
#include <vector>

#include "adgraph/entity.hpp"

namespace adgraph {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Which input JSON key feeds each RawAd field.
struct SchemaMap {
  std::string post_id = "post_id";
  std::string description = "description";
  std::string title = "title";
  std::string location_strings = "locations";
  std::string posting_dates = "dates";
  std::string structured_phones = "phones";
  std::string image_hashes = "images";
  std::string provenance = "provenance";

  bool operator==(const SchemaMap&) const = default;
};

// Every tunable of the pipeline. Defaults mirror the published thresholds
// where one exists: min span score 0.9, alpha 0.5, 300 miles, 2 distinct
// phones/emails, 3 distinct handles, 80% train, similarity gate 0.5.
struct PipelineConfig {
  bool dedup_trim = false;

  double ner_min_score = 0.9;
  double ner_alpha = 0.5;
  bool ner_conventional = false;
  bool phone_oh_as_zero = false;
  bool mask_rejected = true;

  std::vector<EntityCategory> graph_connectors = {
      EntityCategory::PhoneNumber, EntityCategory::Email,
      EntityCategory::Onlyfans, EntityCategory::Snapchat,
      EntityCategory::Twitter};
  bool graph_use_images = true;
  std::size_t graph_star_cap = 0;

  double label_distance_miles = 300.0;
  std::size_t label_phone_email_threshold = 2;
  std::size_t label_other_threshold = 3;

  std::string geo_base_url;
  std::size_t geo_max_inflight = 4;
  std::size_t geo_retries = 3;
  std::size_t geo_backoff_ms = 200;

  double split_target = 0.8;
  double similarity_gate = 0.5;
  bool oad_gate_negatives = false;
  bool htrp_per_class_gate = false;

  std::size_t model_dim = 32;
  std::size_t model_hidden = 64;
  std::size_t model_epochs = 10;
  std::size_t model_batch = 32;
  double model_lr = 0.05;
  double model_momentum = 0.9;
  std::size_t model_min_freq = 1;
  std::size_t model_max_tokens = 256;
  double model_validation = 0.05;

  std::size_t ig_steps = 64;
  std::string ig_baseline = "pad_embedding";
  bool ig_use_probability = false;

  std::uint64_t seed_split = 1;
  std::uint64_t seed_oad = 2;
  std::uint64_t seed_train = 3;
  std::uint64_t seed_synth = 7;

  SchemaMap ingest_map;

  std::string paths_run_root = "runs";

  bool operator==(const PipelineConfig&) const = default;
};

// Parses flat `key = value` text; '#' starts a comment. Unknown keys and
// malformed values raise ConfigError naming the line.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);

// Canonical text form: every key, fixed order. parse_config(serialize(c)) == c.
std::string serialize_config(const PipelineConfig& config);

void set_config_value(PipelineConfig& config, const std::string& key,
                      const std::string& value);
std::string get_config_value(const PipelineConfig& config,
                             const std::string& key);
std::vector<std::string> config_keys();

// Hex FNV-1a over the canonical form minus `paths.*` keys; names the run
// directory and is logged by every stage.
std::string config_hash(const PipelineConfig& config);

void override_seeds(PipelineConfig& config, std::uint64_t seed);

}  // namespace adgraph

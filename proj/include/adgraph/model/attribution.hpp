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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "adgraph/model/classifier.hpp"

namespace adgraph::model {

enum class Baseline : std::uint8_t { PadEmbedding, Zeros };

struct IgOptions {
  std::size_t steps = 64;
  Baseline baseline = Baseline::PadEmbedding;
  // Attribute the target-class probability instead of its logit.
  bool use_probability = false;
};

struct AttributionRecord {
  std::vector<std::string> tokens;
  std::vector<std::int32_t> ids;
  std::size_t dim = 0;
  std::vector<double> feature_attr;  // a_i, tokens x dim
  std::vector<double> attr;          // attr_i
  int target_class = 1;
  double f_input = 0.0;
  double f_baseline = 0.0;
  double convergence_delta = 0.0;
  std::optional<int> true_label;
  int predicted_label = 0;
  double positive_probability = 0.0;

  double total_attribution() const;  // sum of a_ij
};

// Value of F (target logit or probability) and dF/d(embeddings).
double target_value(const TinyClassifier& model, const Embedded& x, int target,
                    bool use_probability, std::vector<double>* gradient);

Embedded baseline_for(const TinyClassifier& model, std::size_t length, Baseline baseline);

// Straight-line path from the baseline, trapezoidal rule over `steps`
// intervals. Single-text models only.
AttributionRecord integrated_gradients(const TinyClassifier& model,
                                       std::span<const std::int32_t> ids,
                                       std::vector<std::string> tokens, int target,
                                       const IgOptions& options);

struct AttributionInput {
  std::vector<std::int32_t> ids;
  std::vector<std::string> tokens;
  std::optional<int> label;
};

// Records are independent, so inputs are spread over worker threads; output
// order follows input order.
std::vector<AttributionRecord> attribute_all(const TinyClassifier& model,
                                             std::span<const AttributionInput> inputs,
                                             int target, const IgOptions& options,
                                             std::size_t threads = 0);

struct NgramScore {
  std::vector<std::string> ngram;
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::size_t occurrences = 0;

  std::string text() const;
};

// Aggregates the summed attribution of every n-token window by exact token
// tuple, ranked by mean descending (ties by tuple).
std::vector<NgramScore> ngram_attributions(std::span<const AttributionRecord> records,
                                           std::size_t n, std::size_t min_occurrences = 1);

// Same aggregation over raw occurrence values.
NgramScore aggregate_occurrences(std::vector<std::string> ngram, std::span<const double> values);

// Per-mask-token attribution averages across records, in category order;
// tokens that never occur are omitted.
std::vector<NgramScore> mask_token_attributions(std::span<const AttributionRecord> records);

nlohmann::ordered_json to_json(const AttributionRecord& record);
AttributionRecord attribution_from_json(const nlohmann::json& j);
void write_attributions_jsonl(const std::filesystem::path& path,
                              std::span<const AttributionRecord> records);
std::vector<AttributionRecord> read_attributions_jsonl(const std::filesystem::path& path);

}  // namespace adgraph::model

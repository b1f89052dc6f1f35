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
#include <optional>
#include <stdexcept>
#include <string>

#include "adgraph/config.hpp"
#include "adgraph/corpus.hpp"

namespace adgraph {

// A stage input is missing or unusable; the CLI maps this to exit code 1.
class StageInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunContext {
  PipelineConfig config;
  std::filesystem::path run_dir;
};

// <paths.run_root>/<config hash>
std::filesystem::path default_run_dir(const PipelineConfig& config);

// Artifact names inside a run directory.
namespace artifacts {
inline constexpr const char* kCorpus = "corpus.jsonl";
inline constexpr const char* kExtracted = "masked.jsonl";
inline constexpr const char* kGraph = "graph.bin";
inline constexpr const char* kComponents = "components.csv";
inline constexpr const char* kLabels = "labels.csv";
inline constexpr const char* kGeoCache = "geocode_cache.jsonl";
inline constexpr const char* kSplit = "split.csv";
inline constexpr const char* kBias = "bias_report.json";
inline constexpr const char* kAttributions = "attributions.jsonl";
}  // namespace artifacts

enum class Task { Htrp, Oad };
std::string_view task_name(Task t);
std::optional<Task> parse_task(std::string_view s);

// Every stage writes <name>_stats.json into the run directory and returns
// the same object.
ordered_json stage_ingest(const RunContext& ctx, const std::filesystem::path& raw);
ordered_json stage_extract(const RunContext& ctx, const std::optional<std::filesystem::path>& spans);
ordered_json stage_eval_ner(const RunContext& ctx, const std::filesystem::path& gold,
                            const std::filesystem::path& pred);
ordered_json stage_build_graph(const RunContext& ctx);

struct GeoSource {
  std::optional<std::filesystem::path> fixture;  // offline answers
  std::optional<std::filesystem::path> cache;   // defaults to the run directory
};
ordered_json stage_label(const RunContext& ctx, const GeoSource& geo);
ordered_json stage_split(const RunContext& ctx);
ordered_json stage_emit_oad(const RunContext& ctx);
ordered_json stage_emit_htrp(const RunContext& ctx);
ordered_json stage_bias_report(const RunContext& ctx);

ordered_json stage_train(const RunContext& ctx, Task task);
ordered_json stage_evaluate(const RunContext& ctx, Task task);

struct AttributeOptions {
  std::optional<std::filesystem::path> dataset;  // defaults to htrp_test.jsonl
  std::size_t limit = 100;
  int target = 1;
};
ordered_json stage_attribute(const RunContext& ctx, const AttributeOptions& options);

struct RankOptions {
  std::size_t n = 1;
  std::size_t top = 10;
  std::size_t min_occurrences = 1;
};
ordered_json stage_rank_ngrams(const RunContext& ctx, const RankOptions& options);

}  // namespace adgraph

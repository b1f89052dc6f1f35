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
#include <span>
#include <string>
#include <vector>

#include "adgraph/corpus.hpp"
#include "adgraph/entity.hpp"

namespace adgraph {

// Correct, incorrect, partial, missing and spurious match counts.
struct MatchCounts {
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  std::size_t partial = 0;
  std::size_t missing = 0;
  std::size_t spurious = 0;

  std::size_t gold_total() const { return correct + incorrect + partial + missing; }
  std::size_t pred_total() const { return correct + incorrect + partial + spurious; }

  MatchCounts& operator+=(const MatchCounts& o);
  bool operator==(const MatchCounts&) const = default;
};

enum class MatchKind { Correct, Incorrect, Partial, Missing, Spurious };

struct Assignment {
  MatchKind kind;
  std::optional<std::size_t> gold;  // index into the gold list
  std::optional<std::size_t> pred;  // index into the prediction list
};

using PerClassCounts = std::array<MatchCounts, kCategoryCount>;

struct MatchResult {
  MatchCounts counts;
  // C, P and M are filed under the gold class, as is I; S under the
  // predicted class. Summing over classes gives `counts`.
  PerClassCounts per_class{};
  std::vector<Assignment> assignments;
};

// Phased greedy matching within one document: exact span and type, then
// exact span with another type, then same-type overlap (largest overlap
// first, then earliest predicted start). Each entity is used at most once.
MatchResult match_entities(std::span<const RawSpan> gold, std::span<const RawSpan> pred);

struct ScoreOptions {
  double alpha = 0.5;
  // Swap M and S between the denominators (MUC-style convention).
  bool conventional = false;
};

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Set when a denominator was zero and the metric was defined as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool empty = false;
};

// Prec = (C + aP) / (C + I + P + M), Rec = (C + aP) / (C + I + P + S).
Scores score(const MatchCounts& counts, const ScoreOptions& options = {});

struct NerReport {
  PerClassCounts per_class{};
  std::array<Scores, kCategoryCount> per_class_scores{};
  MatchCounts overall;
  Scores overall_scores;
  std::size_t documents = 0;
  bool empty = true;
};

NerReport micro_average(std::span<const PerClassCounts> per_doc, const ScoreOptions& options = {});

// One span line from a JSONL span file. Documents are keyed by `ad_id`
// (integer), falling back to `post_id` or `doc_id` (string).
struct SpanRecord {
  std::string doc_key;
  std::optional<std::int64_t> ad_id;
  std::optional<std::string> post_id;
  RawSpan span;
};

std::vector<SpanRecord> read_span_file(const std::filesystem::path& path);
void write_span_file(const std::filesystem::path& path, std::span<const SpanRecord> spans);

// Groups by doc_key and matches every document present in either list.
// Predictions must score strictly above min_score (gold is never filtered).
NerReport evaluate_spans(std::span<const SpanRecord> gold, std::span<const SpanRecord> pred,
                         double min_score, const ScoreOptions& options);

ordered_json to_json(const NerReport& report, const ScoreOptions& options);
// Class,Precision,Recall,F1 rows followed by the micro average.
std::string report_csv(const NerReport& report);

}  // namespace adgraph

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

#include <cstddef>
#include <optional>
#include <span>

#include <json.hpp>

namespace adgraph::model {

// Area under the ROC curve from the Mann-Whitney statistic with midranks for
// ties; undefined when either class is absent.
std::optional<double> roc_auc(std::span<const double> scores, std::span<const int> labels);

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// Predicts positive iff score >= threshold.
Confusion confusion_at(std::span<const double> scores, std::span<const int> labels,
                       double threshold);
double f1_of(const Confusion& c);

struct ThresholdChoice {
  double threshold = 0.5;
  double f1 = 0.0;
};

// Best F1 over the distinct scores as thresholds; ties go to the larger
// threshold. An empty input yields {0.5, 0}.
ThresholdChoice best_f1_threshold(std::span<const double> scores, std::span<const int> labels);

struct EvalMetrics {
  std::size_t n = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  double threshold = 0.5;
  std::optional<double> auc;
  double balanced_accuracy = 0.0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

EvalMetrics evaluate_scores(std::span<const double> scores, std::span<const int> labels,
                            double threshold);

nlohmann::ordered_json to_json(const EvalMetrics& m);

}  // namespace adgraph::model

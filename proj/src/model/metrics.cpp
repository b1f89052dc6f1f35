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

#include "adgraph/model/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace adgraph::model {
namespace {

void check_sizes(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in size");
}

}  // namespace

std::optional<double> roc_auc(std::span<const double> scores, std::span<const int> labels) {
  check_sizes(scores, labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Doubled midranks keep the statistic integral.
  unsigned long long rank2_pos = 0, pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const unsigned long long rank2 = (i + 1) + (j + 1);
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) {
        rank2_pos += rank2;
        ++pos;
      }
    }
    i = j + 1;
  }
  const unsigned long long neg = n - pos;
  if (pos == 0 || neg == 0) return std::nullopt;
  const unsigned long long u2 = rank2_pos - pos * (pos + 1);
  return static_cast<double>(u2) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

Confusion confusion_at(std::span<const double> scores, std::span<const int> labels,
                       double threshold) {
  check_sizes(scores, labels);
  Confusion c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) {
      ++(predicted ? c.tp : c.fn);
    } else {
      ++(predicted ? c.fp : c.tn);
    }
  }
  return c;
}

double f1_of(const Confusion& c) {
  const std::size_t denom = 2 * c.tp + c.fp + c.fn;
  return denom ? 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom) : 0.0;
}

ThresholdChoice best_f1_threshold(std::span<const double> scores, std::span<const int> labels) {
  check_sizes(scores, labels);
  ThresholdChoice best;
  if (scores.empty()) return best;
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::size_t total_pos = 0;
  for (int l : labels) total_pos += l == 1 ? 1 : 0;
  // Lower the threshold one distinct score at a time.
  Confusion c;
  c.fn = total_pos;
  c.tn = scores.size() - total_pos;
  bool first = true;
  for (std::size_t i = 0; i < order.size();) {
    const double t = scores[order[i]];
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == t) {
      if (labels[order[j]] == 1) {
        ++c.tp;
        --c.fn;
      } else {
        ++c.fp;
        --c.tn;
      }
      ++j;
    }
    const double f1 = f1_of(c);
    if (first || f1 > best.f1) {
      best = {t, f1};
      first = false;
    }
    i = j;
  }
  return best;
}

EvalMetrics evaluate_scores(std::span<const double> scores, std::span<const int> labels,
                            double threshold) {
  EvalMetrics m;
  m.n = scores.size();
  m.threshold = threshold;
  m.auc = roc_auc(scores, labels);
  const Confusion c = confusion_at(scores, labels, threshold);
  m.positives = c.tp + c.fn;
  m.negatives = c.tn + c.fp;
  const double tpr = m.positives ? static_cast<double>(c.tp) / m.positives : 0.0;
  const double tnr = m.negatives ? static_cast<double>(c.tn) / m.negatives : 0.0;
  m.recall = tpr;
  m.precision = c.tp + c.fp ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
  m.f1 = f1_of(c);
  m.accuracy = m.n ? static_cast<double>(c.tp + c.tn) / m.n : 0.0;
  m.balanced_accuracy = (tpr + tnr) / 2.0;
  return m;
}

nlohmann::ordered_json to_json(const EvalMetrics& m) {
  nlohmann::ordered_json j;
  j["n"] = m.n;
  j["positives"] = m.positives;
  j["negatives"] = m.negatives;
  j["threshold"] = m.threshold;
  j["auc"] = m.auc ? nlohmann::ordered_json(*m.auc) : nlohmann::ordered_json();
  j["auc_defined"] = m.auc.has_value();
  j["balanced_accuracy"] = m.balanced_accuracy;
  j["accuracy"] = m.accuracy;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  return j;
}

}  // namespace adgraph::model

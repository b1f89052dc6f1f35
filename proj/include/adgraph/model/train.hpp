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
#include <span>
#include <string>
#include <vector>

#include "adgraph/model/classifier.hpp"
#include "adgraph/model/vocab.hpp"

namespace adgraph::model {

// One dataset line: HTRP rows carry only `a`.
struct TextExample {
  std::string a;
  std::string b;
  int label = 0;
};

struct Example {
  std::vector<std::int32_t> a;
  std::vector<std::int32_t> b;
  int label = 0;
};

// Reads {"text","label"} or {"text_a","text_b","label"} lines; pair is set
// when the first row is a pair.
std::vector<TextExample> read_dataset_jsonl(const std::filesystem::path& path, bool* pair);
void write_dataset_jsonl(const std::filesystem::path& path, std::span<const TextExample> rows,
                         bool pair);

Vocab build_vocab(std::span<const TextExample> rows, std::size_t min_freq);
std::vector<Example> encode_examples(std::span<const TextExample> rows, const Vocab& vocab,
                                     std::size_t max_tokens);

struct TrainConfig {
  std::size_t dim = 32;
  std::size_t hidden = 64;
  Pooling pooling = Pooling::Mean;
  std::size_t epochs = 10;
  std::size_t batch = 32;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double validation = 0.05;
  std::uint64_t seed = 3;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double valid_loss = 0.0;  // NaN without a validation carve-out
  double train_accuracy = 0.0;
};

struct TrainResult {
  TinyClassifier model;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> valid_rows;
};

// Stratified carve-out: round(fraction * class size) rows per class, at
// least one when the class has two or more rows.
void stratified_split(std::span<const Example> data, double fraction, std::uint64_t seed,
                      std::vector<std::size_t>& train_rows, std::vector<std::size_t>& valid_rows);

// Mini-batch gradient descent with momentum on softmax cross-entropy.
// Throws std::invalid_argument on an empty or single-class dataset.
TrainResult train(std::span<const Example> data, std::size_t vocab_size, bool pair,
                  const TrainConfig& config);

double mean_loss(const TinyClassifier& model, std::span<const Example> data,
                 std::span<const std::size_t> rows);

std::vector<double> positive_scores(const TinyClassifier& model, std::span<const Example> data);

}  // namespace adgraph::model

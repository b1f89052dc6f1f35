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

#include "adgraph/model/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "adgraph/rng.hpp"

namespace adgraph::model {

std::vector<TextExample> read_dataset_jsonl(const std::filesystem::path& path, bool* pair) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<TextExample> rows;
  std::string line;
  std::size_t lineno = 0;
  bool is_pair = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (rows.empty()) is_pair = j.contains("text_a");
    TextExample r;
    try {
      if (is_pair) {
        r.a = j.at("text_a").get<std::string>();
        r.b = j.at("text_b").get<std::string>();
      } else {
        r.a = j.at("text").get<std::string>();
      }
      r.label = j.at("label").get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (r.label != 0 && r.label != 1) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": label must be 0/1");
    }
    rows.push_back(std::move(r));
  }
  if (pair) *pair = is_pair;
  return rows;
}

void write_dataset_jsonl(const std::filesystem::path& path, std::span<const TextExample> rows,
                         bool pair) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    if (pair) {
      j["text_a"] = r.a;
      j["text_b"] = r.b;
    } else {
      j["text"] = r.a;
    }
    j["label"] = r.label;
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  }
}

Vocab build_vocab(std::span<const TextExample> rows, std::size_t min_freq) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(rows.size() * 2);
  for (const auto& r : rows) {
    docs.push_back(tokenize(r.a));
    if (!r.b.empty()) docs.push_back(tokenize(r.b));
  }
  return Vocab::build(docs, min_freq);
}

std::vector<Example> encode_examples(std::span<const TextExample> rows, const Vocab& vocab,
                                     std::size_t max_tokens) {
  std::vector<Example> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    Example e;
    e.a = vocab.encode(tokenize(r.a), max_tokens);
    e.b = vocab.encode(tokenize(r.b), max_tokens);
    e.label = r.label;
    out.push_back(std::move(e));
  }
  return out;
}

void stratified_split(std::span<const Example> data, double fraction, std::uint64_t seed,
                      std::vector<std::size_t>& train_rows, std::vector<std::size_t>& valid_rows) {
  train_rows.clear();
  valid_rows.clear();
  Rng rng(seed, "train.validation");
  for (int cls : {0, 1}) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data[i].label == cls) rows.push_back(i);
    }
    rng.shuffle(std::span<std::size_t>(rows));
    std::size_t take = 0;
    if (fraction > 0.0 && rows.size() >= 2) {
      take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(rows.size())));
      take = std::clamp<std::size_t>(take, 1, rows.size() - 1);
    }
    valid_rows.insert(valid_rows.end(), rows.begin(), rows.begin() + static_cast<long>(take));
    train_rows.insert(train_rows.end(), rows.begin() + static_cast<long>(take), rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(valid_rows.begin(), valid_rows.end());
}

double mean_loss(const TinyClassifier& model, std::span<const Example> data,
                 std::span<const std::size_t> rows) {
  if (rows.empty()) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  for (std::size_t i : rows) {
    total += cross_entropy(predict_logits(model, data[i].a, data[i].b), data[i].label, nullptr);
  }
  return total / static_cast<double>(rows.size());
}

TrainResult train(std::span<const Example> data, std::size_t vocab_size, bool pair,
                  const TrainConfig& config) {
  if (data.empty()) throw std::invalid_argument("training set is empty");
  std::size_t positives = 0;
  for (const auto& e : data) positives += e.label == 1 ? 1 : 0;
  if (positives == 0 || positives == data.size()) {
    throw std::invalid_argument("training set has a single class");
  }
  if (config.batch == 0) throw std::invalid_argument("batch size must be positive");

  ModelShape shape;
  shape.vocab = vocab_size;
  shape.dim = config.dim;
  shape.hidden = config.hidden;
  shape.pair = pair;
  shape.pooling = config.pooling;

  TrainResult result{TinyClassifier::random(shape, config.seed), {}, 0, {}, {}};
  stratified_split(data, config.validation, config.seed, result.train_rows, result.valid_rows);

  TinyClassifier& model = result.model;
  Gradients grads(model);
  Gradients velocity(model);
  Rng rng(config.seed, "train.order");
  std::vector<std::size_t> order = result.train_rows;
  TinyClassifier best = model;
  double best_loss = std::numeric_limits<double>::infinity();

  ForwardCache cache;
  std::vector<double> d_a, d_b;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch) {
      const std::size_t end = std::min(order.size(), start + config.batch);
      grads.clear();
      for (std::size_t k = start; k < end; ++k) {
        const Example& ex = data[order[k]];
        const Embedded ea = embed(model, ex.a);
        const Embedded eb = pair ? embed(model, ex.b) : Embedded{};
        const Logits logits = forward(model, ea, pair ? &eb : nullptr, &cache);
        Logits d_logits;
        loss_sum += cross_entropy(logits, ex.label, &d_logits);
        if ((logits[1] > logits[0] ? 1 : 0) == ex.label) ++correct;
        backward(model, cache, d_logits, &grads, &d_a, pair ? &d_b : nullptr);
        scatter_embedding_grad(ex.a, d_a, shape.dim, grads.embedding);
        if (pair) scatter_embedding_grad(ex.b, d_b, shape.dim, grads.embedding);
      }
      // The padding row is the attribution baseline and stays frozen.
      std::fill_n(grads.embedding.begin(), shape.dim, 0.0);
      const double scale = 1.0 / static_cast<double>(end - start);
      auto params = model.blocks();
      auto g = grads.blocks();
      auto v = velocity.blocks();
      for (std::size_t b = 0; b < params.size(); ++b) {
        std::vector<double>& p = *params[b];
        std::vector<double>& gb = *g[b];
        std::vector<double>& vb = *v[b];
        for (std::size_t i = 0; i < p.size(); ++i) {
          vb[i] = config.momentum * vb[i] - config.learning_rate * gb[i] * scale;
          p[i] += vb[i];
        }
      }
    }
    for (const auto* block : model.blocks()) {
      for (double x : *block) {
        if (!std::isfinite(x)) {
          throw std::runtime_error("training diverged at epoch " + std::to_string(epoch));
        }
      }
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = order.empty() ? 0.0 : loss_sum / static_cast<double>(order.size());
    rec.train_accuracy = order.empty() ? 0.0 : static_cast<double>(correct) / order.size();
    rec.valid_loss = mean_loss(model, data, result.valid_rows);
    result.history.push_back(rec);
    const double score = result.valid_rows.empty() ? rec.train_loss : rec.valid_loss;
    if (score < best_loss) {
      best_loss = score;
      best = model;
      result.best_epoch = epoch;
    }
  }
  if (result.best_epoch != 0) model = std::move(best);
  return result;
}

std::vector<double> positive_scores(const TinyClassifier& model, std::span<const Example> data) {
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& e : data) out.push_back(positive_probability(model, e.a, e.b));
  return out;
}

}  // namespace adgraph::model

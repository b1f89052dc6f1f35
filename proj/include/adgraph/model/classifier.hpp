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
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace adgraph::model {

enum class Pooling : std::uint8_t { Mean = 0, Sum = 1 };

struct ModelShape {
  std::size_t vocab = 2;
  std::size_t dim = 32;
  // 0 drops the tanh layer: logits are affine in the pooled features.
  std::size_t hidden = 64;
  bool pair = false;
  Pooling pooling = Pooling::Mean;

  // Single: pooled text. Pair: [pool_a, pool_b, |pool_a - pool_b|].
  std::size_t features() const { return pair ? 3 * dim : dim; }
  std::size_t head_inputs() const { return hidden ? hidden : features(); }
};

using Logits = std::array<double, 2>;

struct TinyClassifier {
  ModelShape shape;
  std::vector<double> embedding;  // vocab x dim
  std::vector<double> w1;         // features x hidden
  std::vector<double> b1;         // hidden
  std::vector<double> w2;         // head_inputs x 2
  std::vector<double> b2;         // 2

  static TinyClassifier zeros(const ModelShape& shape);
  static TinyClassifier random(const ModelShape& shape, std::uint64_t seed);

  std::array<std::vector<double>*, 5> blocks() { return {&embedding, &w1, &b1, &w2, &b2}; }
  std::array<const std::vector<double>*, 5> blocks() const {
    return {&embedding, &w1, &b1, &w2, &b2};
  }
  static std::array<std::string_view, 5> block_names() {
    return {"embedding", "w1", "b1", "w2", "b2"};
  }
};

// A token sequence after lookup: length x dim, row-major.
struct Embedded {
  std::vector<double> values;
  std::size_t length = 0;
};

Embedded embed(const TinyClassifier& model, std::span<const std::int32_t> tokens);

struct ForwardCache {
  std::vector<double> pool_a;
  std::vector<double> pool_b;
  std::vector<double> features;
  std::vector<double> hidden;  // tanh outputs
  Logits logits{};
  std::size_t length_a = 0;
  std::size_t length_b = 0;
};

// b is required for pair models and ignored otherwise. An empty sequence
// pools to the zero vector.
Logits forward(const TinyClassifier& model, const Embedded& a, const Embedded* b,
               ForwardCache* cache = nullptr);

// Gradients of every dense block; the embedding block is only filled by
// scatter_embedding_grad.
struct Gradients {
  std::vector<double> embedding, w1, b1, w2, b2;
  explicit Gradients(const TinyClassifier& model);
  void clear();
  std::array<std::vector<double>*, 5> blocks() { return {&embedding, &w1, &b1, &w2, &b2}; }
};

// Back-propagates dL/dlogits. Parameter gradients are accumulated into
// grads (may be null); gradients with respect to the input embeddings are
// written to d_a / d_b (either may be null).
void backward(const TinyClassifier& model, const ForwardCache& cache, const Logits& d_logits,
              Gradients* grads, std::vector<double>* d_a, std::vector<double>* d_b);

void scatter_embedding_grad(std::span<const std::int32_t> tokens, std::span<const double> d_emb,
                            std::size_t dim, std::vector<double>& grad);

Logits softmax(const Logits& logits);
// Cross-entropy of the softmax; writes p - onehot(label) to d_logits.
double cross_entropy(const Logits& logits, int label, Logits* d_logits);

Logits predict_logits(const TinyClassifier& model, std::span<const std::int32_t> a,
                      std::span<const std::int32_t> b = {});
double positive_probability(const TinyClassifier& model, std::span<const std::int32_t> a,
                            std::span<const std::int32_t> b = {});

}  // namespace adgraph::model

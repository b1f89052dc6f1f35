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

#include "adgraph/model/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adgraph/rng.hpp"

namespace adgraph::model {
namespace {

void pool(const Embedded& e, std::size_t dim, Pooling pooling, std::vector<double>& out) {
  out.assign(dim, 0.0);
  for (std::size_t i = 0; i < e.length; ++i) {
    const double* row = &e.values[i * dim];
    for (std::size_t d = 0; d < dim; ++d) out[d] += row[d];
  }
  if (pooling == Pooling::Mean && e.length > 0) {
    const double inv = 1.0 / static_cast<double>(e.length);
    for (double& v : out) v *= inv;
  }
}

void unpool(const std::vector<double>& d_pool, std::size_t length, std::size_t dim,
            Pooling pooling, std::vector<double>& d_emb) {
  d_emb.assign(length * dim, 0.0);
  const double scale =
      pooling == Pooling::Mean && length > 0 ? 1.0 / static_cast<double>(length) : 1.0;
  for (std::size_t i = 0; i < length; ++i) {
    for (std::size_t d = 0; d < dim; ++d) d_emb[i * dim + d] = d_pool[d] * scale;
  }
}

void fill_uniform(std::vector<double>& v, double limit, Rng& rng) {
  for (double& x : v) x = rng.uniform(-limit, limit);
}

}  // namespace

TinyClassifier TinyClassifier::zeros(const ModelShape& shape) {
  if (shape.vocab < 2 || shape.dim == 0) throw std::invalid_argument("model shape too small");
  TinyClassifier m;
  m.shape = shape;
  m.embedding.assign(shape.vocab * shape.dim, 0.0);
  if (shape.hidden) {
    m.w1.assign(shape.features() * shape.hidden, 0.0);
    m.b1.assign(shape.hidden, 0.0);
  }
  m.w2.assign(shape.head_inputs() * 2, 0.0);
  m.b2.assign(2, 0.0);
  return m;
}

TinyClassifier TinyClassifier::random(const ModelShape& shape, std::uint64_t seed) {
  TinyClassifier m = zeros(shape);
  Rng rng(seed, "model.init");
  for (double& x : m.embedding) x = 0.1 * rng.normal();
  if (shape.hidden) {
    fill_uniform(m.w1, std::sqrt(6.0 / static_cast<double>(shape.features() + shape.hidden)), rng);
  }
  fill_uniform(m.w2, std::sqrt(6.0 / static_cast<double>(shape.head_inputs() + 2)), rng);
  return m;
}

Embedded embed(const TinyClassifier& model, std::span<const std::int32_t> tokens) {
  const std::size_t dim = model.shape.dim;
  Embedded e;
  e.length = tokens.size();
  e.values.resize(tokens.size() * dim);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto t = static_cast<std::size_t>(tokens[i]);
    if (t >= model.shape.vocab) throw std::out_of_range("token id outside vocabulary");
    std::copy_n(&model.embedding[t * dim], dim, &e.values[i * dim]);
  }
  return e;
}

Logits forward(const TinyClassifier& model, const Embedded& a, const Embedded* b,
               ForwardCache* cache) {
  const ModelShape& s = model.shape;
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.length_a = a.length;
  pool(a, s.dim, s.pooling, c.pool_a);
  if (s.pair) {
    if (!b) throw std::invalid_argument("pair model needs two inputs");
    c.length_b = b->length;
    pool(*b, s.dim, s.pooling, c.pool_b);
    c.features.resize(3 * s.dim);
    for (std::size_t d = 0; d < s.dim; ++d) {
      c.features[d] = c.pool_a[d];
      c.features[s.dim + d] = c.pool_b[d];
      c.features[2 * s.dim + d] = std::abs(c.pool_a[d] - c.pool_b[d]);
    }
  } else {
    c.features = c.pool_a;
  }
  const std::vector<double>* head = &c.features;
  if (s.hidden) {
    const std::size_t in = s.features();
    c.hidden.assign(model.b1.begin(), model.b1.end());
    for (std::size_t i = 0; i < in; ++i) {
      const double f = c.features[i];
      if (f == 0.0) continue;
      const double* row = &model.w1[i * s.hidden];
      for (std::size_t h = 0; h < s.hidden; ++h) c.hidden[h] += f * row[h];
    }
    for (double& h : c.hidden) h = std::tanh(h);
    head = &c.hidden;
  }
  c.logits = {model.b2[0], model.b2[1]};
  for (std::size_t i = 0; i < head->size(); ++i) {
    c.logits[0] += (*head)[i] * model.w2[2 * i];
    c.logits[1] += (*head)[i] * model.w2[2 * i + 1];
  }
  return c.logits;
}

Gradients::Gradients(const TinyClassifier& model)
    : embedding(model.embedding.size(), 0.0),
      w1(model.w1.size(), 0.0),
      b1(model.b1.size(), 0.0),
      w2(model.w2.size(), 0.0),
      b2(model.b2.size(), 0.0) {}

void Gradients::clear() {
  for (auto* b : blocks()) std::fill(b->begin(), b->end(), 0.0);
}

void backward(const TinyClassifier& model, const ForwardCache& cache, const Logits& d_logits,
              Gradients* grads, std::vector<double>* d_a, std::vector<double>* d_b) {
  const ModelShape& s = model.shape;
  const std::vector<double>& head = s.hidden ? cache.hidden : cache.features;
  if (grads) {
    grads->b2[0] += d_logits[0];
    grads->b2[1] += d_logits[1];
    for (std::size_t i = 0; i < head.size(); ++i) {
      grads->w2[2 * i] += head[i] * d_logits[0];
      grads->w2[2 * i + 1] += head[i] * d_logits[1];
    }
  }
  if (!d_a && !d_b) return;

  std::vector<double> d_head(head.size());
  for (std::size_t i = 0; i < head.size(); ++i) {
    d_head[i] = model.w2[2 * i] * d_logits[0] + model.w2[2 * i + 1] * d_logits[1];
  }
  std::vector<double> d_features;
  if (s.hidden) {
    std::vector<double> d_pre(s.hidden);
    for (std::size_t h = 0; h < s.hidden; ++h) {
      d_pre[h] = d_head[h] * (1.0 - cache.hidden[h] * cache.hidden[h]);
    }
    const std::size_t in = s.features();
    d_features.assign(in, 0.0);
    for (std::size_t i = 0; i < in; ++i) {
      const double* row = &model.w1[i * s.hidden];
      double acc = 0.0;
      for (std::size_t h = 0; h < s.hidden; ++h) acc += row[h] * d_pre[h];
      d_features[i] = acc;
      if (grads) {
        const double f = cache.features[i];
        if (f != 0.0) {
          double* g = &grads->w1[i * s.hidden];
          for (std::size_t h = 0; h < s.hidden; ++h) g[h] += f * d_pre[h];
        }
      }
    }
    if (grads) {
      for (std::size_t h = 0; h < s.hidden; ++h) grads->b1[h] += d_pre[h];
    }
  } else {
    d_features = std::move(d_head);
  }

  std::vector<double> d_pool_a(s.dim), d_pool_b;
  if (s.pair) {
    d_pool_b.resize(s.dim);
    for (std::size_t d = 0; d < s.dim; ++d) {
      const double diff = cache.pool_a[d] - cache.pool_b[d];
      const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
      const double g_abs = d_features[2 * s.dim + d] * sign;
      d_pool_a[d] = d_features[d] + g_abs;
      d_pool_b[d] = d_features[s.dim + d] - g_abs;
    }
  } else {
    std::copy(d_features.begin(), d_features.end(), d_pool_a.begin());
  }
  if (d_a) unpool(d_pool_a, cache.length_a, s.dim, s.pooling, *d_a);
  if (d_b && s.pair) unpool(d_pool_b, cache.length_b, s.dim, s.pooling, *d_b);
}

void scatter_embedding_grad(std::span<const std::int32_t> tokens, std::span<const double> d_emb,
                            std::size_t dim, std::vector<double>& grad) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    double* row = &grad[static_cast<std::size_t>(tokens[i]) * dim];
    for (std::size_t d = 0; d < dim; ++d) row[d] += d_emb[i * dim + d];
  }
}

Logits softmax(const Logits& logits) {
  const double m = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - m), e1 = std::exp(logits[1] - m);
  const double z = e0 + e1;
  return {e0 / z, e1 / z};
}

double cross_entropy(const Logits& logits, int label, Logits* d_logits) {
  const double m = std::max(logits[0], logits[1]);
  const double lse = m + std::log(std::exp(logits[0] - m) + std::exp(logits[1] - m));
  if (d_logits) {
    const Logits p = softmax(logits);
    *d_logits = {p[0] - (label == 0 ? 1.0 : 0.0), p[1] - (label == 1 ? 1.0 : 0.0)};
  }
  return std::max(0.0, lse - logits[static_cast<std::size_t>(label)]);
}

Logits predict_logits(const TinyClassifier& model, std::span<const std::int32_t> a,
                      std::span<const std::int32_t> b) {
  const Embedded ea = embed(model, a);
  if (model.shape.pair) {
    const Embedded eb = embed(model, b);
    return forward(model, ea, &eb);
  }
  return forward(model, ea, nullptr);
}

double positive_probability(const TinyClassifier& model, std::span<const std::int32_t> a,
                            std::span<const std::int32_t> b) {
  return softmax(predict_logits(model, a, b))[1];
}

}  // namespace adgraph::model

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

#include "adgraph/model/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "adgraph/entity.hpp"
#include "adgraph/model/vocab.hpp"

namespace adgraph::model {

double AttributionRecord::total_attribution() const {
  double s = 0.0;
  for (double v : feature_attr) s += v;
  return s;
}

double target_value(const TinyClassifier& model, const Embedded& x, int target,
                    bool use_probability, std::vector<double>* gradient) {
  ForwardCache cache;
  const Logits logits = forward(model, x, nullptr, &cache);
  const auto t = static_cast<std::size_t>(target);
  Logits d{0.0, 0.0};
  double value = logits[t];
  if (use_probability) {
    const Logits p = softmax(logits);
    value = p[t];
    for (std::size_t k = 0; k < 2; ++k) d[k] = p[t] * ((k == t ? 1.0 : 0.0) - p[k]);
  } else {
    d[t] = 1.0;
  }
  if (gradient) backward(model, cache, d, nullptr, gradient, nullptr);
  return value;
}

Embedded baseline_for(const TinyClassifier& model, std::size_t length, Baseline baseline) {
  const std::size_t dim = model.shape.dim;
  Embedded e;
  e.length = length;
  e.values.assign(length * dim, 0.0);
  if (baseline == Baseline::PadEmbedding) {
    for (std::size_t i = 0; i < length; ++i) {
      std::copy_n(&model.embedding[static_cast<std::size_t>(kPad) * dim], dim, &e.values[i * dim]);
    }
  }
  return e;
}

AttributionRecord integrated_gradients(const TinyClassifier& model,
                                       std::span<const std::int32_t> ids,
                                       std::vector<std::string> tokens, int target,
                                       const IgOptions& options) {
  if (model.shape.pair) throw std::invalid_argument("attribution supports single-text models");
  if (options.steps == 0) throw std::invalid_argument("ig steps must be >= 1");
  if (target != 0 && target != 1) throw std::invalid_argument("target class must be 0 or 1");
  const std::size_t dim = model.shape.dim;
  const Embedded x = embed(model, ids);
  const Embedded base = baseline_for(model, x.length, options.baseline);
  const std::size_t cells = x.values.size();

  std::vector<double> avg(cells, 0.0), grad;
  Embedded point;
  point.length = x.length;
  point.values.resize(cells);
  const double m = static_cast<double>(options.steps);
  for (std::size_t k = 0; k <= options.steps; ++k) {
    const double alpha = static_cast<double>(k) / m;
    for (std::size_t c = 0; c < cells; ++c) {
      point.values[c] = base.values[c] + alpha * (x.values[c] - base.values[c]);
    }
    target_value(model, point, target, options.use_probability, &grad);
    const double w = (k == 0 || k == options.steps) ? 0.5 / m : 1.0 / m;
    for (std::size_t c = 0; c < cells; ++c) {
      if (!std::isfinite(grad[c])) {
        std::ostringstream msg;
        msg << "non-finite gradient at step " << k << ", token " << c / dim << ", feature "
            << c % dim;
        throw std::runtime_error(msg.str());
      }
      avg[c] += w * grad[c];
    }
  }

  AttributionRecord r;
  r.tokens = std::move(tokens);
  r.ids.assign(ids.begin(), ids.end());
  if (r.tokens.size() != r.ids.size()) r.tokens.assign(r.ids.size(), std::string());
  r.dim = dim;
  r.target_class = target;
  r.feature_attr.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    r.feature_attr[c] = (x.values[c] - base.values[c]) * avg[c];
  }
  r.attr.assign(x.length, 0.0);
  for (std::size_t i = 0; i < x.length; ++i) {
    double sum = 0.0, sq = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double a = r.feature_attr[i * dim + d];
      sum += a;
      sq += a * a;
    }
    r.attr[i] = sq > 0.0 ? sum / std::sqrt(sq) : 0.0;
  }
  r.f_input = target_value(model, x, target, options.use_probability, nullptr);
  r.f_baseline = target_value(model, base, target, options.use_probability, nullptr);
  r.convergence_delta = std::abs(r.total_attribution() - (r.f_input - r.f_baseline));
  const Logits logits = forward(model, x, nullptr);
  r.positive_probability = softmax(logits)[1];
  r.predicted_label = logits[1] > logits[0] ? 1 : 0;
  return r;
}

std::vector<AttributionRecord> attribute_all(const TinyClassifier& model,
                                             std::span<const AttributionInput> inputs,
                                             int target, const IgOptions& options,
                                             std::size_t threads) {
  std::vector<AttributionRecord> out(inputs.size());
  auto run = [&](std::size_t i) {
    out[i] = integrated_gradients(model, inputs[i].ids, inputs[i].tokens, target, options);
    out[i].true_label = inputs[i].label;
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, inputs.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < inputs.size(); ++i) run(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < inputs.size(); i += threads) run(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::string NgramScore::text() const {
  std::string s;
  for (std::size_t i = 0; i < ngram.size(); ++i) {
    if (i) s.push_back(' ');
    s += ngram[i];
  }
  return s;
}

NgramScore aggregate_occurrences(std::vector<std::string> ngram, std::span<const double> values) {
  NgramScore s;
  s.ngram = std::move(ngram);
  s.occurrences = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

std::vector<NgramScore> ngram_attributions(std::span<const AttributionRecord> records,
                                           std::size_t n, std::size_t min_occurrences) {
  if (n == 0) throw std::invalid_argument("n-gram length must be >= 1");
  std::map<std::vector<std::string>, std::vector<double>> occ;
  for (const auto& r : records) {
    if (r.tokens.size() < n) continue;
    for (std::size_t i = 0; i + n <= r.tokens.size(); ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k < n; ++k) v += r.attr[i + k];
      occ[std::vector<std::string>(r.tokens.begin() + static_cast<long>(i),
                                   r.tokens.begin() + static_cast<long>(i + n))]
          .push_back(v);
    }
  }
  std::vector<NgramScore> out;
  for (auto& [gram, values] : occ) {
    if (values.size() < std::max<std::size_t>(1, min_occurrences)) continue;
    out.push_back(aggregate_occurrences(gram, values));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const NgramScore& a, const NgramScore& b) { return a.mean > b.mean; });
  return out;
}

std::vector<NgramScore> mask_token_attributions(std::span<const AttributionRecord> records) {
  std::map<std::string, std::vector<double>> occ;
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.tokens.size(); ++i) occ[r.tokens[i]].push_back(r.attr[i]);
  }
  std::vector<NgramScore> out;
  for (EntityCategory c : kAllCategories) {
    const std::string tok(mask_token(c));
    auto it = occ.find(tok);
    if (it != occ.end()) out.push_back(aggregate_occurrences({tok}, it->second));
  }
  return out;
}

nlohmann::ordered_json to_json(const AttributionRecord& r) {
  nlohmann::ordered_json j;
  j["tokens"] = r.tokens;
  j["ids"] = r.ids;
  j["attr"] = r.attr;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.ids.size(); ++i) {
    rows.push_back(std::vector<double>(r.feature_attr.begin() + static_cast<long>(i * r.dim),
                                       r.feature_attr.begin() + static_cast<long>((i + 1) * r.dim)));
  }
  j["feature_attr"] = rows;
  j["target_class"] = r.target_class;
  j["f_input"] = r.f_input;
  j["f_baseline"] = r.f_baseline;
  j["total_attribution"] = r.total_attribution();
  j["convergence_delta"] = r.convergence_delta;
  j["true_label"] = r.true_label ? nlohmann::ordered_json(*r.true_label) : nlohmann::ordered_json();
  j["predicted_label"] = r.predicted_label;
  j["positive_probability"] = r.positive_probability;
  return j;
}

AttributionRecord attribution_from_json(const nlohmann::json& j) {
  AttributionRecord r;
  r.tokens = j.at("tokens").get<std::vector<std::string>>();
  r.ids = j.at("ids").get<std::vector<std::int32_t>>();
  r.attr = j.at("attr").get<std::vector<double>>();
  for (const auto& row : j.at("feature_attr")) {
    const auto v = row.get<std::vector<double>>();
    r.dim = v.size();
    r.feature_attr.insert(r.feature_attr.end(), v.begin(), v.end());
  }
  r.target_class = j.at("target_class").get<int>();
  r.f_input = j.at("f_input").get<double>();
  r.f_baseline = j.at("f_baseline").get<double>();
  r.convergence_delta = j.at("convergence_delta").get<double>();
  if (!j.at("true_label").is_null()) r.true_label = j.at("true_label").get<int>();
  r.predicted_label = j.at("predicted_label").get<int>();
  r.positive_probability = j.at("positive_probability").get<double>();
  if (r.tokens.size() != r.attr.size()) throw std::runtime_error("attribution record is inconsistent");
  return r;
}

void write_attributions_jsonl(const std::filesystem::path& path,
                              std::span<const AttributionRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : records) {
    out << to_json(r).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  }
}

std::vector<AttributionRecord> read_attributions_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<AttributionRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(attribution_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

}  // namespace adgraph::model

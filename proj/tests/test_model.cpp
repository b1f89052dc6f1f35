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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "adgraph/model/attribution.hpp"
#include "adgraph/model/checkpoint.hpp"
#include "adgraph/model/classifier.hpp"
#include "adgraph/model/metrics.hpp"
#include "adgraph/model/report.hpp"
#include "adgraph/model/train.hpp"
#include "adgraph/model/vocab.hpp"
#include "oracles.hpp"

using namespace adgraph;
using namespace adgraph::model;

namespace {

double loss_of(const TinyClassifier& m, const std::vector<std::int32_t>& a,
               const std::vector<std::int32_t>& b, int label) {
  const Embedded ea = embed(m, a), eb = embed(m, b);
  return cross_entropy(forward(m, ea, m.shape.pair ? &eb : nullptr), label, nullptr);
}

void gradient_check(const ModelShape& shape) {
  auto m = TinyClassifier::random(shape, 5);
  const std::vector<std::int32_t> a = {2, 3, 4, 3}, b = {5, 2};
  const int label = 1;
  const Embedded ea = embed(m, a), eb = embed(m, b);
  ForwardCache cache;
  Logits d{};
  cross_entropy(forward(m, ea, shape.pair ? &eb : nullptr, &cache), label, &d);
  Gradients g(m);
  std::vector<double> da, db;
  backward(m, cache, d, &g, &da, shape.pair ? &db : nullptr);
  scatter_embedding_grad(a, da, shape.dim, g.embedding);
  if (shape.pair) scatter_embedding_grad(b, db, shape.dim, g.embedding);

  auto blocks = m.blocks();
  auto gblocks = g.blocks();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    auto& w = *blocks[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double keep = w[i], h = 1e-6;
      w[i] = keep + h;
      const double up = loss_of(m, a, b, label);
      w[i] = keep - h;
      const double down = loss_of(m, a, b, label);
      w[i] = keep;
      const double numeric = (up - down) / (2 * h);
      REQUIRE_MESSAGE(std::abs(numeric - (*gblocks[k])[i]) < 1e-7 + 1e-5 * std::abs(numeric),
                      TinyClassifier::block_names()[k] << "[" << i << "]");
    }
  }
}

std::vector<TextExample> toy_rows(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 g(seed);
  const char* neutral[] = {"hello", "new", "in", "town", "sweet", "call", "me", "today", "[PHONE]", "fun"};
  std::vector<TextExample> rows;
  for (std::size_t i = 0; i < n; ++i) {
    TextExample r;
    r.label = static_cast<int>(g() % 2);
    for (int k = 0; k < 8; ++k) r.a += std::string(neutral[g() % 10]) + " ";
    r.a += r.label ? "travelling" : "local";
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("tokenizer") {
  CHECK(tokenize("Hi  THERE\tyou") == std::vector<std::string>{"hi", "there", "you"});
  CHECK(tokenize("call[PHONE]now") == std::vector<std::string>{"call", "[PHONE]", "now"});
  CHECK(tokenize("[[PHONE]]") == std::vector<std::string>{"[[phone]]"});
  CHECK(tokenize("[NAME][LOCATION]") == std::vector<std::string>{"[NAME]", "[LOCATION]"});
  CHECK(tokenize("").empty());
}

TEST_CASE("vocab order and encoding") {
  const auto v = Vocab::build({{"b", "a", "b"}, {"c", "a", "b"}, {"d"}}, 2);
  CHECK(v.tokens() == std::vector<std::string>{"<pad>", "<unk>", "b", "a"});
  CHECK(v.id("zzz") == kUnk);
  CHECK(v.encode({"a", "zzz", "b"}, 2) == std::vector<std::int32_t>{3, kUnk});
  CHECK_THROWS(Vocab::from_tokens({"x", "x"}));
}

TEST_CASE("analytic gradients match finite differences") {
  ModelShape s;
  s.vocab = 7;
  s.dim = 4;
  s.hidden = 3;
  SUBCASE("single, mean") { gradient_check(s); }
  SUBCASE("single, sum") {
    s.pooling = Pooling::Sum;
    gradient_check(s);
  }
  SUBCASE("single, no hidden layer") {
    s.hidden = 0;
    gradient_check(s);
  }
  SUBCASE("pair") {
    s.pair = true;
    gradient_check(s);
  }
}

TEST_CASE("integrated gradients: closed form for an affine model") {
  ModelShape s;
  s.vocab = 9;
  s.dim = 5;
  s.hidden = 0;
  const auto m = TinyClassifier::random(s, 17);
  const std::vector<std::int32_t> ids = {2, 7, 3, 3, 8};
  const std::vector<std::string> toks = {"a", "b", "c", "c", "d"};
  for (int target : {0, 1}) {
    for (std::size_t steps : {1u, 4u, 64u}) {
      IgOptions o;
      o.steps = steps;
      const auto r = integrated_gradients(m, ids, toks, target, o);
      const double L = static_cast<double>(ids.size());
      double sum = 0.0;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        double attr = 0.0, sq = 0.0;
        for (std::size_t d = 0; d < s.dim; ++d) {
          const double x = m.embedding[ids[i] * s.dim + d];
          const double x0 = m.embedding[kPad * s.dim + d];
          const double want = (x - x0) * m.w2[d * 2 + target] / L;
          CHECK(r.feature_attr[i * s.dim + d] == doctest::Approx(want).epsilon(1e-12));
          attr += want;
          sq += want * want;
        }
        // normalized sum of the components
        CHECK(r.attr[i] == doctest::Approx(attr / std::sqrt(sq)).epsilon(1e-12));
        CHECK(std::abs(r.attr[i]) <= std::sqrt(static_cast<double>(s.dim)) + 1e-12);
        sum += attr;
      }
      CHECK(r.total_attribution() == doctest::Approx(sum).epsilon(1e-10));
      CHECK(r.total_attribution() == doctest::Approx(r.f_input - r.f_baseline).epsilon(1e-10));
      CHECK(std::abs(r.convergence_delta) < 1e-10);
    }
  }
}

TEST_CASE("integrated gradients: completeness with a hidden layer") {
  ModelShape s;
  s.vocab = 12;
  s.dim = 6;
  s.hidden = 8;
  const auto m = TinyClassifier::random(s, 23);
  const std::vector<std::int32_t> ids = {2, 5, 11, 4, 4, 9, 3};
  const std::vector<std::string> toks(ids.size(), "t");
  for (Baseline b : {Baseline::PadEmbedding, Baseline::Zeros}) {
    for (bool prob : {false, true}) {
      IgOptions o;
      o.steps = 256;
      o.baseline = b;
      o.use_probability = prob;
      const auto r = integrated_gradients(m, ids, toks, 1, o);
      const double gap = r.f_input - r.f_baseline;
      CHECK(r.total_attribution() == doctest::Approx(gap).epsilon(1e-4));
      CHECK(std::abs(r.convergence_delta) <= 1e-4 * std::max(1.0, std::abs(gap)));
      // coarser paths are no more accurate
      o.steps = 2;
      const auto coarse = integrated_gradients(m, ids, toks, 1, o);
      CHECK(std::abs(coarse.convergence_delta) >= std::abs(r.convergence_delta) - 1e-12);
    }
  }
}

TEST_CASE("n-gram aggregation") {
  const std::vector<double> v = {0.1, -0.8, 1.2};
  const auto s = aggregate_occurrences({"a", "b"}, v);
  CHECK(s.occurrences == 3);
  CHECK(s.mean == doctest::Approx(0.5 / 3.0).epsilon(1e-12));
  CHECK(s.stddev == doctest::Approx(0.8178562764).epsilon(1e-9));
  CHECK(s.text() == "a b");

  AttributionRecord r1, r2;
  r1.tokens = {"x", "y", "x", "y"};
  r1.attr = {1.0, 2.0, 3.0, 4.0};
  r2.tokens = {"x", "y"};
  r2.attr = {-1.0, 0.0};
  const std::vector<AttributionRecord> recs = {r1, r2};
  const auto bi = ngram_attributions(recs, 2, 1);
  REQUIRE(bi.size() == 2);
  CHECK(bi[0].text() == "y x");
  CHECK(bi[0].mean == 5.0);
  CHECK(bi[1].text() == "x y");
  CHECK(bi[1].occurrences == 3);
  CHECK(bi[1].mean == doctest::Approx((3.0 + 7.0 - 1.0) / 3.0));
  CHECK(ngram_attributions(recs, 2, 2).size() == 1);
}

TEST_CASE("metrics agree with pairwise oracles") {
  std::mt19937_64 g(31);
  for (int it = 0; it < 500; ++it) {
    const std::size_t n = 2 + g() % 40;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(g() % 10) / 10.0;
      y[i] = static_cast<int>(g() % 2);
    }
    const auto auc = roc_auc(s, y);
    const bool both = std::count(y.begin(), y.end(), 1) > 0 && std::count(y.begin(), y.end(), 0) > 0;
    REQUIRE(auc.has_value() == both);
    if (auc) CHECK(*auc == doctest::Approx(oracle::auc_pairs(s, y)).epsilon(1e-12));
    const auto best = best_f1_threshold(s, y);
    const auto [t, f] = oracle::best_threshold(s, y);
    CHECK(best.f1 == doctest::Approx(f).epsilon(1e-12));
    CHECK(best.threshold == t);
  }
  const auto e = evaluate_scores(std::vector<double>{0.9, 0.8, 0.2, 0.1}, std::vector<int>{1, 0, 1, 0}, 0.5);
  CHECK(e.auc == doctest::Approx(0.75));
  CHECK(e.accuracy == 0.5);
  CHECK(e.balanced_accuracy == 0.5);
  CHECK(e.precision == 0.5);
  CHECK(e.recall == 0.5);
}

TEST_CASE("training learns a separable toy task and is seeded") {
  const auto rows = toy_rows(1, 400);
  const auto vocab = build_vocab(rows, 1);
  const auto data = encode_examples(rows, vocab, 64);
  TrainConfig cfg;
  cfg.epochs = 8;
  const auto r1 = train(data, vocab.size(), false, cfg);
  const auto r2 = train(data, vocab.size(), false, cfg);
  CHECK(r1.model.embedding == r2.model.embedding);
  CHECK(r1.model.w2 == r2.model.w2);
  const auto test = encode_examples(toy_rows(2, 200), vocab, 64);
  std::vector<int> y;
  for (const auto& e : test) y.push_back(e.label);
  CHECK(*roc_auc(positive_scores(r1.model, test), y) > 0.95);
  // padding row never moves
  const auto init = TinyClassifier::random(r1.model.shape, cfg.seed);
  for (std::size_t d = 0; d < cfg.dim; ++d) CHECK(r1.model.embedding[d] == init.embedding[d]);

  std::vector<Example> one_class(data.begin(), data.end());
  for (auto& e : one_class) e.label = 1;
  CHECK_THROWS_AS(train(one_class, vocab.size(), false, cfg), std::invalid_argument);
}

TEST_CASE("stratified carve-out") {
  std::vector<Example> data(50);
  for (std::size_t i = 0; i < data.size(); ++i) data[i].label = i < 10 ? 1 : 0;
  std::vector<std::size_t> tr, va;
  stratified_split(data, 0.1, 4, tr, va);
  CHECK(tr.size() + va.size() == 50);
  std::size_t pos = 0;
  for (auto i : va) pos += data[i].label;
  CHECK(pos == 1);
  CHECK(va.size() == 5);
}

TEST_CASE("checkpoint round trip") {
  const auto rows = toy_rows(3, 60);
  Checkpoint c;
  c.vocab = build_vocab(rows, 1);
  ModelShape s;
  s.vocab = c.vocab.size();
  s.dim = 6;
  s.hidden = 5;
  c.model = TinyClassifier::random(s, 9);
  c.max_tokens = 77;
  const auto dir = oracle::scratch_dir("ckpt");
  write_checkpoint(dir / "m.bin", c);
  const auto back = read_checkpoint(dir / "m.bin");
  CHECK(back.max_tokens == 77);
  CHECK(back.vocab.tokens() == c.vocab.tokens());
  auto cb = c.model.blocks();
  auto bb = back.model.blocks();
  for (std::size_t k = 0; k < cb.size(); ++k) CHECK(*cb[k] == *bb[k]);
  {
    std::fstream f(dir / "m.bin", std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  CHECK_THROWS_AS(read_checkpoint(dir / "m.bin"), CheckpointError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("attribution records round trip through jsonl") {
  ModelShape s;
  s.vocab = 6;
  s.dim = 3;
  s.hidden = 2;
  const auto m = TinyClassifier::random(s, 4);
  std::vector<AttributionInput> in(3);
  in[0] = {{2, 3}, {"a", "b"}, 1};
  in[1] = {{4, 5, 2}, {"c", "<tag>", "a"}, 0};
  in[2] = {{3}, {"b"}, std::nullopt};
  const auto recs = attribute_all(m, in, 1, IgOptions{}, 2);
  REQUIRE(recs.size() == 3);
  CHECK(recs[1].tokens[1] == "<tag>");
  const auto dir = oracle::scratch_dir("attr");
  write_attributions_jsonl(dir / "a.jsonl", recs);
  const auto back = read_attributions_jsonl(dir / "a.jsonl");
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].tokens == recs[i].tokens);
    CHECK(back[i].true_label == recs[i].true_label);
    for (std::size_t k = 0; k < recs[i].attr.size(); ++k) CHECK(back[i].attr[k] == doctest::Approx(recs[i].attr[k]));
  }
  CHECK(record_html(recs[1]).find("&lt;tag&gt;") != std::string::npos);
  CHECK(html_escape("<a&\"b\">") == "&lt;a&amp;&quot;b&quot;&gt;");
  std::filesystem::remove_all(dir);
}

TEST_CASE("input equal to the baseline attributes nothing") {
  ModelShape s;
  s.vocab = 5;
  s.dim = 4;
  s.hidden = 3;
  const auto m = TinyClassifier::random(s, 8);
  const std::vector<std::int32_t> ids = {kPad, kPad};
  const auto r = integrated_gradients(m, ids, {"<pad>", "<pad>"}, 1, IgOptions{});
  for (double a : r.attr) CHECK(a == 0.0);
  for (double a : r.feature_attr) CHECK(a == 0.0);
  CHECK(r.convergence_delta == 0.0);
}

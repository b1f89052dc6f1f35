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

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "adgraph/ner_eval.hpp"

using namespace adgraph;

namespace {

RawSpan sp(std::size_t s, std::size_t e, EntityCategory c) {
  RawSpan r;
  r.start = s;
  r.end = e;
  r.category = c;
  return r;
}

std::map<std::string, MatchCounts> expected_counts() {
  std::ifstream in(ADGRAPH_TEST_DATA "/ner_expected.tsv");
  REQUIRE(in);
  std::map<std::string, MatchCounts> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string doc;
    MatchCounts c;
    ss >> doc >> c.correct >> c.incorrect >> c.partial >> c.missing >> c.spurious;
    out[doc] = c;
  }
  return out;
}

std::vector<RawSpan> spans_for(const std::vector<SpanRecord>& recs, const std::string& doc,
                               double min_score) {
  std::vector<RawSpan> out;
  for (const auto& r : recs) {
    if (r.doc_key == doc && r.span.score > min_score) out.push_back(r.span);
  }
  return out;
}

// Straightforward restatement of the phased matcher: repeatedly take the
// best remaining pair.
MatchCounts brute_match(const std::vector<RawSpan>& gold, const std::vector<RawSpan>& pred) {
  MatchCounts c;
  std::vector<bool> gu(gold.size()), pu(pred.size());
  for (int phase = 0; phase < 2; ++phase) {
    for (std::size_t g = 0; g < gold.size(); ++g) {
      for (std::size_t p = 0; p < pred.size() && !gu[g]; ++p) {
        if (pu[p] || gold[g].start != pred[p].start || gold[g].end != pred[p].end) continue;
        if (phase == 0 && gold[g].category != pred[p].category) continue;
        gu[g] = pu[p] = true;
        ++(phase == 0 ? c.correct : c.incorrect);
      }
    }
  }
  for (;;) {
    long best = -1;
    std::size_t bg = 0, bp = 0;
    for (std::size_t g = 0; g < gold.size(); ++g) {
      for (std::size_t p = 0; p < pred.size(); ++p) {
        if (gu[g] || pu[p] || gold[g].category != pred[p].category) continue;
        const long lo = static_cast<long>(std::max(gold[g].start, pred[p].start));
        const long hi = static_cast<long>(std::min(gold[g].end, pred[p].end));
        const long ov = hi - lo;
        if (ov <= 0) continue;
        bool better = ov > best;
        if (ov == best) {
          better = std::tie(pred[p].start, gold[g].start, g, p) <
                   std::tie(pred[bp].start, gold[bg].start, bg, bp);
        }
        if (better) {
          best = ov;
          bg = g;
          bp = p;
        }
      }
    }
    if (best < 0) break;
    gu[bg] = pu[bp] = true;
    ++c.partial;
  }
  for (bool u : gu) c.missing += !u;
  for (bool u : pu) c.spurious += !u;
  return c;
}

}  // namespace

TEST_CASE("golden fixture: per-document counts") {
  const auto gold = read_span_file(ADGRAPH_TEST_DATA "/ner_gold.jsonl");
  const auto pred = read_span_file(ADGRAPH_TEST_DATA "/ner_pred.jsonl");
  const auto expected = expected_counts();
  REQUIRE(expected.size() == 25);
  for (const auto& [doc, want] : expected) {
    const auto g = spans_for(gold, doc, -1.0);
    const auto p = spans_for(pred, doc, 0.9);
    const auto got = match_entities(g, p).counts;
    CHECK_MESSAGE(got == want, doc);
  }
}

TEST_CASE("golden fixture: micro average") {
  const auto gold = read_span_file(ADGRAPH_TEST_DATA "/ner_gold.jsonl");
  const auto pred = read_span_file(ADGRAPH_TEST_DATA "/ner_pred.jsonl");
  const auto report = evaluate_spans(gold, pred, 0.9, ScoreOptions{});
  CHECK(report.documents == 25);
  CHECK(report.overall.correct == 14);
  CHECK(report.overall.incorrect == 5);
  CHECK(report.overall.partial == 8);
  CHECK(report.overall.missing == 11);
  CHECK(report.overall.spurious == 10);
  CHECK(report.overall_scores.precision == doctest::Approx(18.0 / 38.0).epsilon(1e-12));
  CHECK(report.overall_scores.recall == doctest::Approx(18.0 / 37.0).epsilon(1e-12));
  const auto& phone = report.per_class[index_of(EntityCategory::PhoneNumber)];
  CHECK(phone == MatchCounts{4, 1, 3, 3, 2});

  // per-class counts add up to the overall ones
  MatchCounts sum;
  for (const auto& c : report.per_class) sum += c;
  CHECK(sum == report.overall);

  ScoreOptions conv;
  conv.conventional = true;
  const auto c = evaluate_spans(gold, pred, 0.9, conv);
  CHECK(c.overall_scores.precision == doctest::Approx(18.0 / 37.0).epsilon(1e-12));
  CHECK(c.overall_scores.recall == doctest::Approx(18.0 / 38.0).epsilon(1e-12));
}

TEST_CASE("worked example document") {
  const std::vector<RawSpan> gold = {sp(0, 4, EntityCategory::NameNickname),
                                     sp(10, 20, EntityCategory::PhoneNumber),
                                     sp(25, 30, EntityCategory::Location),
                                     sp(40, 48, EntityCategory::Snapchat)};
  const std::vector<RawSpan> pred = {sp(0, 4, EntityCategory::NameNickname),
                                     sp(10, 20, EntityCategory::PhoneNumber),
                                     sp(26, 32, EntityCategory::Location)};
  const auto m = match_entities(gold, pred);
  CHECK(m.counts == MatchCounts{2, 0, 1, 1, 0});
  const auto s = score(m.counts);
  CHECK(s.precision == doctest::Approx(0.625));
  CHECK(s.recall == doctest::Approx(2.5 / 3.0));
  CHECK(s.f1 == doctest::Approx(2 * 0.625 * (2.5 / 3.0) / (0.625 + 2.5 / 3.0)));
}

TEST_CASE("score edge cases") {
  const auto empty = score(MatchCounts{});
  CHECK(empty.precision == 0.0);
  CHECK(empty.recall == 0.0);
  CHECK(empty.f1 == 0.0);
  CHECK(empty.precision_undefined);
  CHECK(empty.recall_undefined);
  ScoreOptions full;
  full.alpha = 1.0;
  CHECK(score(MatchCounts{0, 0, 2, 0, 0}, full).precision == 1.0);
  ScoreOptions none;
  none.alpha = 0.0;
  CHECK(score(MatchCounts{0, 0, 2, 0, 0}, none).precision == 0.0);
}

TEST_CASE("incorrect and partial are filed under the gold class, spurious under the predicted") {
  const std::vector<RawSpan> gold = {sp(0, 5, EntityCategory::PhoneNumber)};
  const std::vector<RawSpan> pred = {sp(0, 5, EntityCategory::Email), sp(8, 9, EntityCategory::Twitter)};
  const auto m = match_entities(gold, pred);
  CHECK(m.per_class[index_of(EntityCategory::PhoneNumber)].incorrect == 1);
  CHECK(m.per_class[index_of(EntityCategory::Email)].incorrect == 0);
  CHECK(m.per_class[index_of(EntityCategory::Twitter)].spurious == 1);
}

TEST_CASE("matcher agrees with the brute-force restatement") {
  std::mt19937_64 g(5);
  const EntityCategory cats[] = {EntityCategory::PhoneNumber, EntityCategory::NameNickname,
                                 EntityCategory::Location};
  for (int it = 0; it < 3000; ++it) {
    auto rnd = [&](std::size_t n) {
      std::vector<RawSpan> out;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t s = g() % 20;
        out.push_back(sp(s, s + 1 + g() % 6, cats[g() % 3]));
      }
      return out;
    };
    const auto gold = rnd(g() % 6);
    const auto pred = rnd(g() % 6);
    const auto m = match_entities(gold, pred);
    REQUIRE(m.counts == brute_match(gold, pred));
    CHECK(m.counts.gold_total() == gold.size());
    CHECK(m.counts.pred_total() == pred.size());
    // each entity used at most once
    std::vector<int> gu(gold.size()), pu(pred.size());
    for (const auto& a : m.assignments) {
      if (a.gold) ++gu[*a.gold];
      if (a.pred) ++pu[*a.pred];
    }
    for (int x : gu) CHECK(x == 1);
    for (int x : pu) CHECK(x == 1);
    // perfect predictions are all correct
    CHECK(match_entities(gold, gold).counts.correct == gold.size());
  }
}

TEST_CASE("span file round trip") {
  const auto gold = read_span_file(ADGRAPH_TEST_DATA "/ner_gold.jsonl");
  const auto path = std::filesystem::temp_directory_path() / "adgraph_spans_rt.jsonl";
  write_span_file(path, gold);
  const auto back = read_span_file(path);
  REQUIRE(back.size() == gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    CHECK(back[i].doc_key == gold[i].doc_key);
    CHECK(back[i].span.start == gold[i].span.start);
    CHECK(back[i].span.end == gold[i].span.end);
    CHECK(back[i].span.category == gold[i].span.category);
  }
  std::filesystem::remove(path);
}

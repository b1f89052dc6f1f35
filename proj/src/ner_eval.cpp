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

#include "adgraph/ner_eval.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <tuple>

#include "adgraph/text.hpp"

namespace adgraph {

MatchCounts& MatchCounts::operator+=(const MatchCounts& o) {
  correct += o.correct;
  incorrect += o.incorrect;
  partial += o.partial;
  missing += o.missing;
  spurious += o.spurious;
  return *this;
}

MatchResult match_entities(std::span<const RawSpan> gold, std::span<const RawSpan> pred) {
  MatchResult r;
  std::vector<bool> gold_used(gold.size(), false);
  std::vector<bool> pred_used(pred.size(), false);

  auto record = [&](MatchKind kind, std::size_t g, std::size_t p) {
    gold_used[g] = true;
    pred_used[p] = true;
    r.assignments.push_back({kind, g, p});
    auto& cls = r.per_class[index_of(gold[g].category)];
    if (kind == MatchKind::Correct) {
      ++r.counts.correct;
      ++cls.correct;
    } else if (kind == MatchKind::Incorrect) {
      ++r.counts.incorrect;
      ++cls.incorrect;
    } else {
      ++r.counts.partial;
      ++cls.partial;
    }
  };

  // Phase 1 and 2 pair exact spans; the first free partner in list order is
  // taken, which yields the maximum number of pairs for an exact key.
  for (std::size_t g = 0; g < gold.size(); ++g) {
    for (std::size_t p = 0; p < pred.size(); ++p) {
      if (!pred_used[p] && gold[g].start == pred[p].start && gold[g].end == pred[p].end &&
          gold[g].category == pred[p].category) {
        record(MatchKind::Correct, g, p);
        break;
      }
    }
  }
  for (std::size_t g = 0; g < gold.size(); ++g) {
    if (gold_used[g]) continue;
    for (std::size_t p = 0; p < pred.size(); ++p) {
      if (!pred_used[p] && gold[g].start == pred[p].start && gold[g].end == pred[p].end) {
        record(MatchKind::Incorrect, g, p);
        break;
      }
    }
  }

  struct Candidate {
    std::size_t overlap;
    std::size_t pred_start;
    std::size_t gold_start;
    std::size_t g;
    std::size_t p;
  };
  std::vector<Candidate> candidates;
  for (std::size_t g = 0; g < gold.size(); ++g) {
    if (gold_used[g]) continue;
    for (std::size_t p = 0; p < pred.size(); ++p) {
      if (pred_used[p] || gold[g].category != pred[p].category) continue;
      const std::size_t lo = std::max(gold[g].start, pred[p].start);
      const std::size_t hi = std::min(gold[g].end, pred[p].end);
      if (lo < hi) candidates.push_back({hi - lo, pred[p].start, gold[g].start, g, p});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.overlap, a.pred_start, a.gold_start, a.g, a.p) <
           std::tie(a.overlap, b.pred_start, b.gold_start, b.g, b.p);
  });
  for (const auto& c : candidates) {
    if (!gold_used[c.g] && !pred_used[c.p]) record(MatchKind::Partial, c.g, c.p);
  }

  for (std::size_t g = 0; g < gold.size(); ++g) {
    if (gold_used[g]) continue;
    ++r.counts.missing;
    ++r.per_class[index_of(gold[g].category)].missing;
    r.assignments.push_back({MatchKind::Missing, g, std::nullopt});
  }
  for (std::size_t p = 0; p < pred.size(); ++p) {
    if (pred_used[p]) continue;
    ++r.counts.spurious;
    ++r.per_class[index_of(pred[p].category)].spurious;
    r.assignments.push_back({MatchKind::Spurious, std::nullopt, p});
  }
  return r;
}

Scores score(const MatchCounts& c, const ScoreOptions& options) {
  Scores s;
  const double hit = static_cast<double>(c.correct) + options.alpha * static_cast<double>(c.partial);
  const std::size_t base = c.correct + c.incorrect + c.partial;
  const std::size_t prec_den = base + (options.conventional ? c.spurious : c.missing);
  const std::size_t rec_den = base + (options.conventional ? c.missing : c.spurious);
  s.empty = base + c.missing + c.spurious == 0;
  if (prec_den == 0) {
    s.precision_undefined = true;
  } else {
    s.precision = hit / static_cast<double>(prec_den);
  }
  if (rec_den == 0) {
    s.recall_undefined = true;
  } else {
    s.recall = hit / static_cast<double>(rec_den);
  }
  if (s.precision + s.recall > 0.0) {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

NerReport micro_average(std::span<const PerClassCounts> per_doc, const ScoreOptions& options) {
  NerReport rep;
  rep.documents = per_doc.size();
  for (const auto& doc : per_doc) {
    for (std::size_t k = 0; k < kCategoryCount; ++k) rep.per_class[k] += doc[k];
  }
  for (std::size_t k = 0; k < kCategoryCount; ++k) {
    rep.per_class_scores[k] = score(rep.per_class[k], options);
    rep.overall += rep.per_class[k];
  }
  rep.overall_scores = score(rep.overall, options);
  rep.empty = rep.overall.gold_total() + rep.overall.spurious == 0;
  return rep;
}

std::vector<SpanRecord> read_span_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  std::vector<SpanRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      SpanRecord r;
      if (auto it = j.find("ad_id"); it != j.end() && it->is_number_integer()) {
        r.ad_id = it->get<std::int64_t>();
        r.doc_key = std::to_string(*r.ad_id);
        r.span.ad_id = *r.ad_id;
      } else if (auto pid = j.find("post_id"); pid != j.end() && pid->is_string()) {
        r.post_id = pid->get<std::string>();
        r.doc_key = *r.post_id;
      } else if (auto doc = j.find("doc_id"); doc != j.end()) {
        r.doc_key = doc->is_string() ? doc->get<std::string>() : doc->dump();
      } else {
        throw IngestError("span has no ad_id, post_id or doc_id");
      }
      r.span.start = j.at("start").get<std::size_t>();
      r.span.end = j.at("end").get<std::size_t>();
      if (r.span.end <= r.span.start) throw IngestError("span end must exceed start");
      const auto cat_name = j.at("category").get<std::string>();
      auto cat = parse_category(cat_name);
      if (!cat) throw IngestError("unknown category '" + cat_name + "'");
      r.span.category = *cat;
      r.span.score = j.value("score", 1.0);
      r.span.surface = j.value("surface", "");
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw IngestError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_span_file(const std::filesystem::path& path, std::span<const SpanRecord> spans) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write " + path.string());
  for (const auto& r : spans) {
    ordered_json j;
    if (r.ad_id) {
      j["ad_id"] = *r.ad_id;
    } else if (r.post_id) {
      j["post_id"] = *r.post_id;
    } else {
      j["doc_id"] = r.doc_key;
    }
    j["start"] = r.span.start;
    j["end"] = r.span.end;
    j["category"] = category_name(r.span.category);
    j["score"] = r.span.score;
    if (!r.span.surface.empty()) j["surface"] = r.span.surface;
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  }
}

NerReport evaluate_spans(std::span<const SpanRecord> gold, std::span<const SpanRecord> pred,
                         double min_score, const ScoreOptions& options) {
  std::map<std::string, std::pair<std::vector<RawSpan>, std::vector<RawSpan>>> docs;
  for (const auto& r : gold) docs[r.doc_key].first.push_back(r.span);
  for (const auto& r : pred) {
    auto& slot = docs[r.doc_key].second;
    if (r.span.score > min_score) slot.push_back(r.span);
  }
  std::vector<PerClassCounts> per_doc;
  per_doc.reserve(docs.size());
  for (const auto& [key, lists] : docs) {
    per_doc.push_back(match_entities(lists.first, lists.second).per_class);
  }
  return micro_average(per_doc, options);
}

namespace {

ordered_json counts_json(const MatchCounts& c) {
  ordered_json j;
  j["correct"] = c.correct;
  j["incorrect"] = c.incorrect;
  j["partial"] = c.partial;
  j["missing"] = c.missing;
  j["spurious"] = c.spurious;
  return j;
}

ordered_json scores_json(const Scores& s) {
  ordered_json j;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f1"] = s.f1;
  j["precision_undefined"] = s.precision_undefined;
  j["recall_undefined"] = s.recall_undefined;
  return j;
}

std::string fixed3(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

}  // namespace

ordered_json to_json(const NerReport& rep, const ScoreOptions& options) {
  ordered_json j;
  j["alpha"] = options.alpha;
  j["mode"] = options.conventional ? "conventional" : "verbatim";
  j["documents"] = rep.documents;
  j["empty"] = rep.empty;
  ordered_json classes = ordered_json::array();
  for (EntityCategory c : kAllCategories) {
    ordered_json cj;
    cj["class"] = category_name(c);
    cj["counts"] = counts_json(rep.per_class[index_of(c)]);
    cj["scores"] = scores_json(rep.per_class_scores[index_of(c)]);
    classes.push_back(std::move(cj));
  }
  j["per_class"] = std::move(classes);
  j["overall"] = {{"counts", counts_json(rep.overall)},
                  {"scores", scores_json(rep.overall_scores)}};
  return j;
}

std::string report_csv(const NerReport& rep) {
  std::ostringstream os;
  os << "Class,Precision,Recall,F1\n";
  for (EntityCategory c : kAllCategories) {
    const auto& s = rep.per_class_scores[index_of(c)];
    os << category_display(c) << ',' << fixed3(s.precision) << ',' << fixed3(s.recall) << ','
       << fixed3(s.f1) << '\n';
  }
  os << "Overall (Micro)," << fixed3(rep.overall_scores.precision) << ','
     << fixed3(rep.overall_scores.recall) << ',' << fixed3(rep.overall_scores.f1) << '\n';
  return os.str();
}

}  // namespace adgraph

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

#include "adgraph/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>

#include <spdlog/spdlog.h>

#include "adgraph/datasets.hpp"
#include "adgraph/extract.hpp"
#include "adgraph/geo.hpp"
#include "adgraph/graph.hpp"
#include "adgraph/graph_io.hpp"
#include "adgraph/labeler.hpp"
#include "adgraph/model/attribution.hpp"
#include "adgraph/model/checkpoint.hpp"
#include "adgraph/model/metrics.hpp"
#include "adgraph/model/report.hpp"
#include "adgraph/model/train.hpp"
#include "adgraph/ner_eval.hpp"

namespace adgraph {
namespace fs = std::filesystem;

namespace {

fs::path need(const RunContext& ctx, const char* name, std::string_view producer) {
  fs::path p = ctx.run_dir / name;
  if (!fs::exists(p)) {
    throw StageInputError("missing " + p.string() + " (run `adgraph " + std::string(producer) +
                          "` first)");
  }
  return p;
}

void need_file(const fs::path& p, std::string_view what) {
  if (!fs::exists(p)) throw StageInputError(std::string(what) + " not found: " + p.string());
}

ordered_json finish(const RunContext& ctx, const std::string& stage, ordered_json stats) {
  ordered_json out;
  out["stage"] = stage;
  out["config_hash"] = config_hash(ctx.config);
  for (auto& [k, v] : stats.items()) out[k] = v;
  std::string file = stage;
  std::replace(file.begin(), file.end(), '-', '_');
  write_json_file(ctx.run_dir / (file + "_stats.json"), out);
  return out;
}

std::vector<AdRecord> load_extracted(const RunContext& ctx) {
  return read_corpus(need(ctx, artifacts::kExtracted, "extract"));
}

HeuristicConfig heuristics(const PipelineConfig& c) {
  HeuristicConfig h;
  h.distance_miles = c.label_distance_miles;
  h.phone_email_threshold = c.label_phone_email_threshold;
  h.other_threshold = c.label_other_threshold;
  h.identifier_categories = c.graph_connectors;
  return h;
}

SplitAssignment load_split(const RunContext& ctx, const RelatednessGraph& graph) {
  return assignment_from_sides(graph.components, read_split_csv(need(ctx, artifacts::kSplit, "split")),
                               ctx.config.split_target);
}

std::string dataset_file(Task task, Side side) {
  return std::string(task_name(task)) + "_" + std::string(side_name(side)) + ".jsonl";
}

}  // namespace

fs::path default_run_dir(const PipelineConfig& config) {
  return fs::path(config.paths_run_root) / config_hash(config);
}

std::string_view task_name(Task t) { return t == Task::Htrp ? "htrp" : "oad"; }

std::optional<Task> parse_task(std::string_view s) {
  if (s == "htrp") return Task::Htrp;
  if (s == "oad") return Task::Oad;
  return std::nullopt;
}

ordered_json stage_ingest(const RunContext& ctx, const fs::path& raw) {
  need_file(raw, "raw input");
  fs::create_directories(ctx.run_dir);
  IngestStats istats;
  std::vector<RawAd> ads = ingest_all(raw, ctx.config.ingest_map, &istats);
  DedupStats dstats;
  const auto corpus = deduplicate(std::move(ads), DedupOptions{ctx.config.dedup_trim}, &dstats);
  write_corpus(ctx.run_dir / artifacts::kCorpus, corpus);
  write_json_file(ctx.run_dir / "dedup_stats.json", to_json(dstats));
  spdlog::info("ingest: {} records, {} distinct descriptions", dstats.input_count, dstats.unique_count);
  ordered_json s;
  s["ingest"] = to_json(istats);
  s["dedup"] = to_json(dstats);
  return finish(ctx, "ingest", s);
}

ordered_json stage_extract(const RunContext& ctx, const std::optional<fs::path>& spans_path) {
  auto corpus = read_corpus(need(ctx, artifacts::kCorpus, "ingest"));
  std::map<std::string, std::size_t> by_post;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& p : corpus[i].merged_post_ids) by_post.emplace(p, i);
  }
  // Spans per ad, keyed so that copies reported for several posts of the
  // same description collapse to their best score.
  std::vector<std::map<std::tuple<std::size_t, std::size_t, int>, RawSpan>> grouped(corpus.size());
  std::size_t spans_read = 0, unmatched = 0;
  if (spans_path) {
    need_file(*spans_path, "span file");
    for (auto& rec : read_span_file(*spans_path)) {
      ++spans_read;
      std::optional<std::size_t> idx;
      if (rec.ad_id) {
        if (*rec.ad_id >= 0 && static_cast<std::size_t>(*rec.ad_id) < corpus.size()) {
          idx = static_cast<std::size_t>(*rec.ad_id);
        }
      } else if (auto it = by_post.find(rec.post_id ? *rec.post_id : rec.doc_key); it != by_post.end()) {
        idx = it->second;
      }
      if (!idx) {
        ++unmatched;
        continue;
      }
      rec.span.ad_id = static_cast<std::int64_t>(*idx);
      const auto key = std::make_tuple(rec.span.start, rec.span.end, static_cast<int>(rec.span.category));
      auto [it, inserted] = grouped[*idx].emplace(key, rec.span);
      if (!inserted && rec.span.score > it->second.score) it->second = rec.span;
    }
  }
  ApplyOptions opts;
  opts.min_score = ctx.config.ner_min_score;
  opts.mask_rejected = ctx.config.mask_rejected;
  opts.phone.oh_as_zero = ctx.config.phone_oh_as_zero;
  ApplyStats st;
  std::vector<AdRecord> out;
  out.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::vector<RawSpan> spans;
    for (auto& [k, s] : grouped[i]) spans.push_back(s);
    AdRecord ad = apply_spans(std::move(corpus[i]), spans, opts, &st);
    add_metadata_entities(ad, opts.phone, &st);
    out.push_back(std::move(ad));
  }
  write_corpus(ctx.run_dir / artifacts::kExtracted, out);
  spdlog::info("extract: {} spans read, {} accepted, {} unmatched", spans_read, st.accepted, unmatched);
  ordered_json s;
  s["ads"] = out.size();
  s["spans_read"] = spans_read;
  s["spans_unmatched"] = unmatched;
  s["apply"] = to_json(st);
  return finish(ctx, "extract", s);
}

ordered_json stage_eval_ner(const RunContext& ctx, const fs::path& gold, const fs::path& pred) {
  need_file(gold, "gold span file");
  need_file(pred, "predicted span file");
  fs::create_directories(ctx.run_dir);
  const ScoreOptions opts{ctx.config.ner_alpha, ctx.config.ner_conventional};
  const NerReport report =
      evaluate_spans(read_span_file(gold), read_span_file(pred), ctx.config.ner_min_score, opts);
  const ordered_json j = to_json(report, opts);
  write_json_file(ctx.run_dir / "ner_report.json", j);
  std::ofstream(ctx.run_dir / "ner_report.csv", std::ios::binary) << report_csv(report);
  spdlog::info("eval-ner: {} documents, micro F1 {:.4f}", report.documents, report.overall_scores.f1);
  return finish(ctx, "ner", j);
}

ordered_json stage_build_graph(const RunContext& ctx) {
  const auto corpus = load_extracted(ctx);
  GraphOptions opts;
  opts.connector_categories = ctx.config.graph_connectors;
  opts.use_images = ctx.config.graph_use_images;
  opts.star_cap = ctx.config.graph_star_cap;
  const RelatednessGraph g = build_graph(corpus, opts);
  write_graph(ctx.run_dir / artifacts::kGraph, g);
  write_components_csv(ctx.run_dir / artifacts::kComponents, g);
  spdlog::info("build-graph: {} nodes, {} edges, {} components", g.node_count, g.edges.size(),
               g.components.size());
  ordered_json s;
  s["nodes"] = g.node_count;
  s["edges"] = g.edges.size();
  s["connectors"] = g.connector_keys.size();
  s["linking_connectors"] = g.linking_connector_count();
  s["components"] = to_json(component_stats(g, corpus));
  write_json_file(ctx.run_dir / "component_stats.json", s["components"]);
  return finish(ctx, "graph", s);
}

ordered_json stage_label(const RunContext& ctx, const GeoSource& geo) {
  const auto corpus = load_extracted(ctx);
  const RelatednessGraph g = read_graph(need(ctx, artifacts::kGraph, "build-graph"));
  if (g.node_count != corpus.size()) throw StageInputError("graph does not match the extracted corpus");

  const auto queries = corpus_locations(corpus);
  std::map<std::string, GeoPoint> points;
  std::size_t unresolved = 0, errors = 0;
  std::unique_ptr<GeoProvider> provider;
  if (geo.fixture) {
    need_file(*geo.fixture, "geocoding fixture");
    provider = std::make_unique<FixtureProvider>(*geo.fixture);
  } else if (!ctx.config.geo_base_url.empty()) {
    provider = std::make_unique<HttpProvider>(ctx.config.geo_base_url);
  }
  if (provider) {
    GeocodeCache cache(geo.cache ? *geo.cache : ctx.run_dir / artifacts::kGeoCache);
    RetryPolicy retry{std::max<std::size_t>(1, ctx.config.geo_retries),
                      std::chrono::milliseconds(ctx.config.geo_backoff_ms)};
    Geocoder coder(*provider, cache, retry);
    for (auto& [q, r] : coder.geocode_all(queries, ctx.config.geo_max_inflight)) {
      if (r.point) {
        points.emplace(q, *r.point);
      } else if (r.error) {
        ++errors;
        spdlog::warn("geocoding '{}' failed: {}", q, *r.error);
      } else {
        ++unresolved;
      }
    }
    spdlog::info("label: {} locations, {} provider calls", queries.size(), coder.provider_calls());
  } else {
    unresolved = queries.size();
    spdlog::warn("label: no geocoder configured; the distance heuristic cannot fire");
  }

  const HeuristicConfig h = heuristics(ctx.config);
  std::vector<LabeledComponent> labels;
  labels.reserve(g.components.size());
  std::size_t positive_ads = 0;
  for (const auto& c : g.components) {
    labels.push_back(label_component(c.id, c.members, corpus, points, h));
    if (labels.back().positive()) positive_ads += c.members.size();
  }
  write_labels_csv(ctx.run_dir / artifacts::kLabels, labels);
  const OverlapReport overlap = heuristic_overlap(labels);
  std::ofstream(ctx.run_dir / "label_overlap.txt", std::ios::binary) << overlap_summary_text(overlap);
  ordered_json s;
  s["components"] = labels.size();
  s["positive_components"] = overlap.both + overlap.distance_only + overlap.identifiers_only;
  s["positive_ads"] = positive_ads;
  s["overlap"] = to_json(overlap);
  s["locations"] = queries.size();
  s["resolved"] = points.size();
  s["unresolved"] = unresolved;
  s["geocode_errors"] = errors;
  return finish(ctx, "label", s);
}

ordered_json stage_split(const RunContext& ctx) {
  const RelatednessGraph g = read_graph(need(ctx, artifacts::kGraph, "build-graph"));
  const SplitAssignment split = split_components(g.components, ctx.config.split_target, ctx.config.seed_split);
  for (const auto& w : split.warnings) spdlog::warn("split: {}", w);
  write_split_csv(ctx.run_dir / artifacts::kSplit, split, g.components);
  spdlog::info("split: train fraction {:.4f}", split.achieved);
  return finish(ctx, "split", to_json(split));
}

ordered_json stage_emit_oad(const RunContext& ctx) {
  const auto corpus = load_extracted(ctx);
  const RelatednessGraph g = read_graph(need(ctx, artifacts::kGraph, "build-graph"));
  if (g.node_count != corpus.size()) throw StageInputError("graph does not match the extracted corpus");
  const SplitAssignment split = load_split(ctx, g);
  OadOptions opts;
  opts.gate = ctx.config.similarity_gate;
  opts.gate_negatives = ctx.config.oad_gate_negatives;
  opts.seed = ctx.config.seed_oad;
  const OadDataset oad = emit_oad(g, corpus, split, opts);
  for (const auto& w : oad.warnings) spdlog::warn("emit-oad: {}", w);
  for (Side side : kSides) {
    write_oad_jsonl(ctx.run_dir / dataset_file(Task::Oad, side), oad.pairs[static_cast<int>(side)], corpus);
  }
  return finish(ctx, "oad", to_json(oad));
}

ordered_json stage_emit_htrp(const RunContext& ctx) {
  const auto corpus = load_extracted(ctx);
  const RelatednessGraph g = read_graph(need(ctx, artifacts::kGraph, "build-graph"));
  if (g.node_count != corpus.size()) throw StageInputError("graph does not match the extracted corpus");
  const auto labels = read_labels_csv(need(ctx, artifacts::kLabels, "label"));
  const SplitAssignment split = load_split(ctx, g);
  HtrpOptions opts;
  opts.gate = ctx.config.similarity_gate;
  opts.per_class_gate = ctx.config.htrp_per_class_gate;
  const HtrpDataset htrp = emit_htrp(corpus, g.component_of, labels, split, opts);
  for (const auto& w : htrp.warnings) spdlog::warn("emit-htrp: {}", w);
  for (Side side : kSides) {
    write_htrp_jsonl(ctx.run_dir / dataset_file(Task::Htrp, side), htrp.examples[static_cast<int>(side)],
                     corpus);
  }
  spdlog::info("emit-htrp: {} train, {} test", htrp.stats[0].admitted, htrp.stats[1].admitted);
  return finish(ctx, "htrp", to_json(htrp));
}

ordered_json stage_bias_report(const RunContext& ctx) {
  const auto corpus = load_extracted(ctx);
  HtrpDataset htrp;
  for (Side side : kSides) {
    const fs::path p = need(ctx, dataset_file(Task::Htrp, side).c_str(), "emit-htrp");
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      const auto id = j.at("ad_id").get<NodeId>();
      if (id >= corpus.size()) throw StageInputError("HTRP example refers to an unknown ad");
      htrp.examples[static_cast<int>(side)].push_back({id, j.at("label").get<int>() == 1, side});
    }
  }
  const BiasReport report = bias_report(htrp, corpus);
  const ordered_json j = to_json(report);
  write_json_file(ctx.run_dir / artifacts::kBias, j);
  return finish(ctx, "bias", j);
}

ordered_json stage_train(const RunContext& ctx, Task task) {
  const fs::path data = need(ctx, dataset_file(task, Side::Train).c_str(),
                             task == Task::Htrp ? "emit-htrp" : "emit-oad");
  bool pair = false;
  const auto rows = model::read_dataset_jsonl(data, &pair);
  const model::Vocab vocab = model::build_vocab(rows, ctx.config.model_min_freq);
  const auto examples = model::encode_examples(rows, vocab, ctx.config.model_max_tokens);
  model::TrainConfig tc;
  tc.dim = ctx.config.model_dim;
  tc.hidden = ctx.config.model_hidden;
  tc.epochs = ctx.config.model_epochs;
  tc.batch = ctx.config.model_batch;
  tc.learning_rate = ctx.config.model_lr;
  tc.momentum = ctx.config.model_momentum;
  tc.validation = ctx.config.model_validation;
  tc.seed = ctx.config.seed_train;
  model::TrainResult result;
  try {
    result = model::train(examples, vocab.size(), pair, tc);
  } catch (const std::invalid_argument& e) {
    throw StageInputError(e.what());
  }
  const std::string name(task_name(task));
  model::write_checkpoint(ctx.run_dir / ("model_" + name + ".bin"),
                          {result.model, vocab, ctx.config.model_max_tokens});
  std::vector<model::TextExample> valid;
  for (std::size_t i : result.valid_rows) valid.push_back(rows[i]);
  model::write_dataset_jsonl(ctx.run_dir / (name + "_valid.jsonl"), valid, pair);

  ordered_json s;
  s["task"] = name;
  s["examples"] = rows.size();
  s["train_rows"] = result.train_rows.size();
  s["valid_rows"] = result.valid_rows.size();
  s["vocab"] = vocab.size();
  s["best_epoch"] = result.best_epoch;
  ordered_json hist = ordered_json::array();
  for (const auto& e : result.history) {
    ordered_json h;
    h["epoch"] = e.epoch;
    h["train_loss"] = e.train_loss;
    h["valid_loss"] = std::isnan(e.valid_loss) ? ordered_json() : ordered_json(e.valid_loss);
    h["train_accuracy"] = e.train_accuracy;
    hist.push_back(h);
  }
  s["history"] = hist;
  spdlog::info("train {}: {} rows, best epoch {}", name, rows.size(), result.best_epoch);
  return finish(ctx, "train_" + name, s);
}

ordered_json stage_evaluate(const RunContext& ctx, Task task) {
  const std::string name(task_name(task));
  const auto ckpt = model::read_checkpoint(need(ctx, ("model_" + name + ".bin").c_str(), "train"));
  auto scored = [&](const fs::path& p, std::vector<int>& labels) {
    const auto rows = model::read_dataset_jsonl(p, nullptr);
    const auto ex = model::encode_examples(rows, ckpt.vocab, ckpt.max_tokens);
    labels.clear();
    for (const auto& e : ex) labels.push_back(e.label);
    return model::positive_scores(ckpt.model, ex);
  };
  std::vector<int> valid_labels, test_labels;
  const auto valid_scores = scored(need(ctx, (name + "_valid.jsonl").c_str(), "train"), valid_labels);
  const auto test_scores = scored(need(ctx, dataset_file(task, Side::Test).c_str(),
                                       task == Task::Htrp ? "emit-htrp" : "emit-oad"),
                                  test_labels);
  model::ThresholdChoice choice;
  if (valid_scores.empty()) {
    spdlog::warn("evaluate: empty validation set, threshold fixed at 0.5");
  } else {
    choice = model::best_f1_threshold(valid_scores, valid_labels);
  }
  const model::EvalMetrics m = model::evaluate_scores(test_scores, test_labels, choice.threshold);
  if (!m.auc) spdlog::warn("evaluate: test set has a single class, AUC undefined");
  ordered_json s;
  s["task"] = name;
  s["validation_f1"] = choice.f1;
  s["test"] = model::to_json(m);
  write_json_file(ctx.run_dir / ("eval_" + name + ".json"), s);
  spdlog::info("evaluate {}: AUC {}, F1 {:.4f}", name, m.auc ? std::to_string(*m.auc) : "n/a", m.f1);
  return finish(ctx, "evaluate_" + name, s);
}

ordered_json stage_attribute(const RunContext& ctx, const AttributeOptions& options) {
  const auto ckpt = model::read_checkpoint(need(ctx, "model_htrp.bin", "train --task htrp"));
  const fs::path data = options.dataset ? *options.dataset
                                        : need(ctx, dataset_file(Task::Htrp, Side::Test).c_str(), "emit-htrp");
  need_file(data, "dataset");
  bool pair = false;
  const auto rows = model::read_dataset_jsonl(data, &pair);
  if (pair) throw StageInputError("attribution needs a single-text dataset");
  std::vector<model::AttributionInput> inputs;
  for (std::size_t i = 0; i < rows.size() && i < options.limit; ++i) {
    auto toks = model::tokenize(rows[i].a);
    if (ckpt.max_tokens && toks.size() > ckpt.max_tokens) toks.resize(ckpt.max_tokens);
    model::AttributionInput in;
    in.ids = ckpt.vocab.encode(toks);
    in.tokens = std::move(toks);
    in.label = rows[i].label;
    inputs.push_back(std::move(in));
  }
  model::IgOptions ig;
  ig.steps = ctx.config.ig_steps;
  ig.baseline = ctx.config.ig_baseline == "zeros" ? model::Baseline::Zeros : model::Baseline::PadEmbedding;
  ig.use_probability = ctx.config.ig_use_probability;
  const auto records = model::attribute_all(ckpt.model, inputs, options.target, ig);
  model::write_attributions_jsonl(ctx.run_dir / artifacts::kAttributions, records);

  const auto masks = model::mask_token_attributions(records);
  std::string text, html;
  for (std::size_t i = 0; i < records.size() && i < 20; ++i) {
    text += "=== example " + std::to_string(i + 1) + " ===\n" + model::record_text(records[i]) + "\n";
    html += "<h2>Example " + std::to_string(i + 1) + "</h2>\n" + model::record_html(records[i]);
  }
  text += model::mask_table_text(masks);
  html += model::mask_table_html(masks);
  std::ofstream(ctx.run_dir / "attribution_report.txt", std::ios::binary) << text;
  std::ofstream(ctx.run_dir / "attribution_report.html", std::ios::binary)
      << model::html_document("Attribution report", html);

  double max_rel = 0.0, mean_delta = 0.0;
  for (const auto& r : records) {
    mean_delta += r.convergence_delta;
    const double gap = std::abs(r.f_input - r.f_baseline);
    if (gap > 0.0) max_rel = std::max(max_rel, r.convergence_delta / gap);
  }
  ordered_json s;
  s["records"] = records.size();
  s["target"] = options.target;
  s["steps"] = ig.steps;
  s["mean_convergence_delta"] = records.empty() ? 0.0 : mean_delta / records.size();
  s["max_relative_delta"] = max_rel;
  return finish(ctx, "attribute", s);
}

ordered_json stage_rank_ngrams(const RunContext& ctx, const RankOptions& options) {
  const auto records = model::read_attributions_jsonl(need(ctx, artifacts::kAttributions, "attribute"));
  const auto ranked = model::ngram_attributions(records, options.n, options.min_occurrences);
  const std::string base = "ngrams_" + std::to_string(options.n);
  ordered_json all = ordered_json::array();
  for (const auto& r : ranked) {
    ordered_json x;
    x["ngram"] = r.ngram;
    x["mean"] = r.mean;
    x["std"] = r.stddev;
    x["occurrences"] = r.occurrences;
    all.push_back(x);
  }
  write_json_file(ctx.run_dir / (base + ".json"), all);
  const std::string title = "Top and bottom " + std::to_string(options.top) + " " +
                            std::to_string(options.n) + "-grams by mean attribution";
  const auto masks = model::mask_token_attributions(records);
  std::ofstream(ctx.run_dir / (base + ".txt"), std::ios::binary)
      << model::ngram_table_text(ranked, options.top, title) << '\n'
      << model::mask_table_text(masks);
  std::ofstream(ctx.run_dir / (base + ".html"), std::ios::binary)
      << model::html_document(title, model::ngram_table_html(ranked, options.top, title) +
                                         model::mask_table_html(masks));
  ordered_json s;
  s["n"] = options.n;
  s["records"] = records.size();
  s["distinct_ngrams"] = ranked.size();
  return finish(ctx, "rank_ngrams", s);
}

}  // namespace adgraph

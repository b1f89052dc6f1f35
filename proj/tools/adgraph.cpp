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

#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "adgraph/config.hpp"
#include "adgraph/corpus.hpp"
#include "adgraph/pipeline.hpp"
#include "adgraph/synth.hpp"

namespace fs = std::filesystem;
using namespace adgraph;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string run_dir;
  bool quiet = false;
};

RunContext make_context(const Globals& g) {
  RunContext ctx;
  if (!g.config.empty()) {
    if (!fs::exists(g.config)) throw ConfigError("config file not found: " + g.config);
    ctx.config = load_config(g.config);
  }
  if (g.seed) override_seeds(ctx.config, *g.seed);
  ctx.run_dir = g.run_dir.empty() ? default_run_dir(ctx.config) : fs::path(g.run_dir);
  spdlog::info("config hash {} run dir {}", config_hash(ctx.config), ctx.run_dir.string());
  return ctx;
}

Task task_from(const std::string& s) {
  auto t = parse_task(s);
  if (!t) throw StageInputError("unknown task '" + s + "' (expected htrp or oad)");
  return *t;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_st("adgraph"));

  CLI::App app{"adgraph: relatedness graph and weak-label pipeline for classified ads"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Pipeline config file (key = value)");
  app.add_option("--seed", g.seed, "Override every per-stage seed");
  app.add_option("--run-dir", g.run_dir, "Run directory (default <paths.run_root>/<config hash>)");
  app.add_flag("-q,--quiet", g.quiet, "Only log warnings and errors");

  std::function<void()> action;

  std::string raw;
  auto* ingest = app.add_subcommand("ingest", "Read a raw JSONL feed and collapse duplicate descriptions");
  ingest->add_option("raw", raw, "Raw JSONL file")->required();
  ingest->callback([&] { action = [&] { stage_ingest(make_context(g), raw); }; });

  std::string spans;
  auto* extract = app.add_subcommand("extract", "Attach recognized spans and canonicalize entities");
  extract->add_option("--spans", spans, "Span JSONL from the recognizer");
  extract->callback([&] {
    action = [&] {
      stage_extract(make_context(g), spans.empty() ? std::nullopt : std::optional<fs::path>(spans));
    };
  });

  std::string gold, pred;
  auto* eval_ner = app.add_subcommand("eval-ner", "Score predicted spans against gold spans");
  eval_ner->add_option("--gold", gold, "Gold span JSONL")->required();
  eval_ner->add_option("--pred", pred, "Predicted span JSONL")->required();
  eval_ner->callback([&] { action = [&] { stage_eval_ner(make_context(g), gold, pred); }; });

  app.add_subcommand("build-graph", "Link ads sharing identifiers or images")
      ->callback([&] { action = [&] { stage_build_graph(make_context(g)); }; });

  std::string geo_fixture, geo_cache;
  auto* label = app.add_subcommand("label", "Apply the distance and identifier heuristics per component");
  label->add_option("--geo-fixture", geo_fixture, "Offline geocoding answers (JSONL)");
  label->add_option("--geo-cache", geo_cache, "Geocode cache file");
  label->callback([&] {
    action = [&] {
      GeoSource src;
      if (!geo_fixture.empty()) src.fixture = geo_fixture;
      if (!geo_cache.empty()) src.cache = geo_cache;
      stage_label(make_context(g), src);
    };
  });

  app.add_subcommand("split", "Assign whole components to train or test")
      ->callback([&] { action = [&] { stage_split(make_context(g)); }; });
  app.add_subcommand("emit-oad", "Write the ad-pair dataset")
      ->callback([&] { action = [&] { stage_emit_oad(make_context(g)); }; });
  app.add_subcommand("emit-htrp", "Write the single-ad risk dataset")
      ->callback([&] { action = [&] { stage_emit_htrp(make_context(g)); }; });
  app.add_subcommand("bias-report", "Mask-token prevalence and signed-rank tests")
      ->callback([&] { action = [&] { stage_bias_report(make_context(g)); }; });

  std::string task = "htrp";
  auto* train = app.add_subcommand("train", "Train the small text classifier");
  train->add_option("--task", task, "htrp or oad")->capture_default_str();
  train->callback([&] { action = [&] { stage_train(make_context(g), task_from(task)); }; });

  auto* evaluate = app.add_subcommand("evaluate", "Score the test split");
  evaluate->add_option("--task", task, "htrp or oad")->capture_default_str();
  evaluate->callback([&] { action = [&] { stage_evaluate(make_context(g), task_from(task)); }; });

  AttributeOptions attr;
  std::string attr_data;
  auto* attribute = app.add_subcommand("attribute", "Integrated-gradients attributions for the HTRP model");
  attribute->add_option("--dataset", attr_data, "Dataset JSONL (default: HTRP test split)");
  attribute->add_option("--limit", attr.limit, "Number of examples")->capture_default_str();
  attribute->add_option("--target", attr.target, "Target class")->check(CLI::Range(0, 1))->capture_default_str();
  attribute->callback([&] {
    action = [&] {
      if (!attr_data.empty()) attr.dataset = attr_data;
      stage_attribute(make_context(g), attr);
    };
  });

  RankOptions rank;
  auto* rank_ngrams = app.add_subcommand("rank-ngrams", "Rank n-grams by mean attribution");
  rank_ngrams->add_option("-n,--n", rank.n, "n-gram length")->check(CLI::PositiveNumber)->capture_default_str();
  rank_ngrams->add_option("--top", rank.top, "Rows per table")->capture_default_str();
  rank_ngrams->add_option("--min-occurrences", rank.min_occurrences, "Minimum occurrences")
      ->capture_default_str();
  rank_ngrams->callback([&] { action = [&] { stage_rank_ngrams(make_context(g), rank); }; });

  SynthOptions so;
  std::string synth_out = "synth";
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted clusters");
  synth->add_option("--ads", so.ads, "Raw records")->capture_default_str();
  synth->add_option("--clusters", so.clusters, "Planted clusters")->capture_default_str();
  synth->add_option("--repost-mean", so.repost_mean, "Records per distinct description")->capture_default_str();
  synth->add_option("--out", synth_out, "Output directory")->capture_default_str();
  synth->callback([&] {
    action = [&] {
      PipelineConfig cfg;
      if (!g.config.empty()) cfg = load_config(g.config);
      so.seed = g.seed ? *g.seed : cfg.seed_synth;
      spdlog::info("config hash {}", config_hash(cfg));
      const SynthCorpus corpus = generate_synth(so);
      write_synth(synth_out, corpus);
      spdlog::info("synth: {} records, {} distinct ads, {} clusters -> {}", corpus.raw.size(),
                   corpus.distinct_ads, corpus.clusters.size(), synth_out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (g.quiet) spdlog::set_level(spdlog::level::warn);

  try {
    action();
  } catch (const StageInputError& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}

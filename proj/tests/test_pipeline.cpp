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
#include <sstream>

#include <spdlog/spdlog.h>

#include "adgraph/pipeline.hpp"
#include "adgraph/synth.hpp"
#include "oracles.hpp"

using namespace adgraph;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PipelineConfig small_config() {
  PipelineConfig c;
  c.model_epochs = 3;
  c.model_dim = 8;
  c.model_hidden = 8;
  c.ig_steps = 16;
  return c;
}

void run_all(const fs::path& synth, const fs::path& run) {
  RunContext ctx{small_config(), run};
  fs::create_directories(run);
  stage_ingest(ctx, synth / "raw.jsonl");
  stage_extract(ctx, synth / "spans.jsonl");
  stage_eval_ner(ctx, synth / "spans.jsonl", synth / "spans.jsonl");
  stage_build_graph(ctx);
  stage_label(ctx, GeoSource{synth / "geo_fixture.jsonl", std::nullopt});
  stage_split(ctx);
  stage_emit_oad(ctx);
  stage_emit_htrp(ctx);
  stage_bias_report(ctx);
  stage_train(ctx, Task::Htrp);
  stage_evaluate(ctx, Task::Htrp);
  stage_train(ctx, Task::Oad);
  stage_evaluate(ctx, Task::Oad);
  AttributeOptions ao;
  ao.limit = 10;
  stage_attribute(ctx, ao);
  RankOptions ro;
  ro.n = 2;
  stage_rank_ngrams(ctx, ro);
}

}  // namespace

TEST_CASE("pipeline end to end on a small synthetic corpus") {
  spdlog::set_level(spdlog::level::warn);
  const auto dir = oracle::scratch_dir("pipeline");
  SynthOptions so;
  so.ads = 3000;
  so.clusters = 12;
  write_synth(dir / "synth", generate_synth(so));
  run_all(dir / "synth", dir / "a");
  run_all(dir / "synth", dir / "b");

  for (const char* stats : {"ingest_stats.json", "extract_stats.json", "ner_stats.json", "graph_stats.json",
                            "label_stats.json", "split_stats.json", "oad_stats.json", "htrp_stats.json",
                            "bias_stats.json", "train_htrp_stats.json", "evaluate_htrp_stats.json",
                            "train_oad_stats.json", "evaluate_oad_stats.json", "attribute_stats.json",
                            "rank_ngrams_stats.json"}) {
    REQUIRE_MESSAGE(fs::exists(dir / "a" / stats), stats);
    const auto j = nlohmann::json::parse(slurp(dir / "a" / stats));
    CHECK(j.contains("stage"));
    CHECK(j.at("config_hash") == config_hash(small_config()));
  }

  // Same config and seeds: every artifact is byte-identical.
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    const auto other = dir / "b" / e.path().filename();
    REQUIRE_MESSAGE(fs::exists(other), e.path().filename().string());
    CHECK_MESSAGE(slurp(e.path()) == slurp(other), e.path().filename().string());
    ++files;
  }
  CHECK(files >= 30);

  // Gold scored against itself: nothing spurious, nothing mismatched.
  const auto ner = nlohmann::json::parse(slurp(dir / "a" / "ner_report.json"));
  INFO(ner.dump());
  CHECK(ner.dump().find("\"spurious\":0") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("stages refuse to run without their inputs") {
  const auto dir = oracle::scratch_dir("pipeline_missing");
  RunContext ctx{PipelineConfig{}, dir};
  CHECK_THROWS_AS(stage_extract(ctx, std::nullopt), StageInputError);
  CHECK_THROWS_AS(stage_build_graph(ctx), StageInputError);
  CHECK_THROWS_AS(stage_label(ctx, GeoSource{}), StageInputError);
  CHECK_THROWS_AS(stage_split(ctx), StageInputError);
  CHECK_THROWS_AS(stage_emit_htrp(ctx), StageInputError);
  CHECK_THROWS_AS(stage_train(ctx, Task::Htrp), StageInputError);
  CHECK_THROWS_AS(stage_ingest(ctx, dir / "nope.jsonl"), StageInputError);
  try {
    stage_label(ctx, GeoSource{});
  } catch (const StageInputError& e) {
    CHECK(std::string(e.what()).find("run `adgraph extract` first") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("run directory defaults to the config hash") {
  PipelineConfig c;
  c.paths_run_root = "runs";
  CHECK(default_run_dir(c) == fs::path("runs") / config_hash(c));
  CHECK(parse_task("htrp") == Task::Htrp);
  CHECK(parse_task("oad") == Task::Oad);
  CHECK_FALSE(parse_task("x"));
}

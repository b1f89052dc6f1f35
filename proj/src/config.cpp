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

#include "adgraph/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "adgraph/rng.hpp"
#include "adgraph/text.hpp"

namespace adgraph {
namespace {

struct Field {
  std::string key;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, const std::string&)> set;
};

bool parse_bool(const std::string& v) {
  const std::string s = ascii_lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("expected boolean, got '" + v + "'");
}

double parse_double(const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw ConfigError("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("expected number, got '" + v + "'");
  }
}

std::uint64_t parse_uint(const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("expected non-negative integer, got '" + v + "'");
  }
  return out;
}

std::string format_double(double d) {
  std::ostringstream os;
  os << std::setprecision(17) << d;
  // Shortest text that round-trips.
  for (int p = 1; p <= 17; ++p) {
    std::ostringstream t;
    t << std::setprecision(p) << d;
    if (std::stod(t.str()) == d) return t.str();
  }
  return os.str();
}

template <typename T>
Field bool_field(std::string key, T PipelineConfig::*m) {
  return {std::move(key),
          [m](const PipelineConfig& c) { return std::string(c.*m ? "true" : "false"); },
          [m](PipelineConfig& c, const std::string& v) { c.*m = parse_bool(v); }};
}

Field double_field(std::string key, double PipelineConfig::*m) {
  return {std::move(key),
          [m](const PipelineConfig& c) { return format_double(c.*m); },
          [m](PipelineConfig& c, const std::string& v) { c.*m = parse_double(v); }};
}

template <typename T>
Field uint_field(std::string key, T PipelineConfig::*m) {
  return {std::move(key),
          [m](const PipelineConfig& c) { return std::to_string(c.*m); },
          [m](PipelineConfig& c, const std::string& v) {
            c.*m = static_cast<T>(parse_uint(v));
          }};
}

Field string_field(std::string key, std::string PipelineConfig::*m) {
  return {std::move(key), [m](const PipelineConfig& c) { return c.*m; },
          [m](PipelineConfig& c, const std::string& v) { c.*m = v; }};
}

Field map_field(std::string key, std::string SchemaMap::*m) {
  return {std::move(key),
          [m](const PipelineConfig& c) { return c.ingest_map.*m; },
          [m](PipelineConfig& c, const std::string& v) {
            if (v.empty()) throw ConfigError("schema map entry may not be empty");
            c.ingest_map.*m = v;
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = [] {
    std::vector<Field> f;
    f.push_back(bool_field("dedup.trim", &PipelineConfig::dedup_trim));
    f.push_back(double_field("ner.min_score", &PipelineConfig::ner_min_score));
    f.push_back(double_field("ner.alpha", &PipelineConfig::ner_alpha));
    f.push_back(bool_field("ner.conventional", &PipelineConfig::ner_conventional));
    f.push_back(bool_field("phone.oh_as_zero", &PipelineConfig::phone_oh_as_zero));
    f.push_back(bool_field("mask.rejected", &PipelineConfig::mask_rejected));
    f.push_back(
        {"graph.connectors",
         [](const PipelineConfig& c) {
           std::string out;
           for (auto cat : c.graph_connectors) {
             if (!out.empty()) out.push_back(',');
             out += category_key(cat);
           }
           return out;
         },
         [](PipelineConfig& c, const std::string& v) {
           std::vector<EntityCategory> cats;
           std::stringstream ss(v);
           std::string item;
           while (std::getline(ss, item, ',')) {
             item = trim(item);
             if (item.empty()) continue;
             auto cat = parse_category(item);
             if (!cat) throw ConfigError("unknown entity category '" + item + "'");
             cats.push_back(*cat);
           }
           c.graph_connectors = std::move(cats);
         }});
    f.push_back(bool_field("graph.use_images", &PipelineConfig::graph_use_images));
    f.push_back(uint_field("graph.star_cap", &PipelineConfig::graph_star_cap));
    f.push_back(double_field("label.distance_miles", &PipelineConfig::label_distance_miles));
    f.push_back(uint_field("label.phone_email_threshold",
                           &PipelineConfig::label_phone_email_threshold));
    f.push_back(uint_field("label.other_threshold", &PipelineConfig::label_other_threshold));
    f.push_back(string_field("geo.base_url", &PipelineConfig::geo_base_url));
    f.push_back(uint_field("geo.max_inflight", &PipelineConfig::geo_max_inflight));
    f.push_back(uint_field("geo.retries", &PipelineConfig::geo_retries));
    f.push_back(uint_field("geo.backoff_ms", &PipelineConfig::geo_backoff_ms));
    f.push_back(double_field("split.target", &PipelineConfig::split_target));
    f.push_back(double_field("similarity.gate", &PipelineConfig::similarity_gate));
    f.push_back(bool_field("oad.gate_negatives", &PipelineConfig::oad_gate_negatives));
    f.push_back(bool_field("htrp.per_class_gate", &PipelineConfig::htrp_per_class_gate));
    f.push_back(uint_field("model.dim", &PipelineConfig::model_dim));
    f.push_back(uint_field("model.hidden", &PipelineConfig::model_hidden));
    f.push_back(uint_field("model.epochs", &PipelineConfig::model_epochs));
    f.push_back(uint_field("model.batch", &PipelineConfig::model_batch));
    f.push_back(double_field("model.lr", &PipelineConfig::model_lr));
    f.push_back(double_field("model.momentum", &PipelineConfig::model_momentum));
    f.push_back(uint_field("model.min_freq", &PipelineConfig::model_min_freq));
    f.push_back(uint_field("model.max_tokens", &PipelineConfig::model_max_tokens));
    f.push_back(double_field("model.validation", &PipelineConfig::model_validation));
    f.push_back(uint_field("ig.steps", &PipelineConfig::ig_steps));
    f.push_back({"ig.baseline", [](const PipelineConfig& c) { return c.ig_baseline; },
                 [](PipelineConfig& c, const std::string& v) {
                   if (v != "pad_embedding" && v != "zeros") {
                     throw ConfigError("ig.baseline must be pad_embedding or zeros");
                   }
                   c.ig_baseline = v;
                 }});
    f.push_back(bool_field("ig.use_probability", &PipelineConfig::ig_use_probability));
    f.push_back(uint_field("seed.split", &PipelineConfig::seed_split));
    f.push_back(uint_field("seed.oad", &PipelineConfig::seed_oad));
    f.push_back(uint_field("seed.train", &PipelineConfig::seed_train));
    f.push_back(uint_field("seed.synth", &PipelineConfig::seed_synth));
    f.push_back(map_field("ingest.map.post_id", &SchemaMap::post_id));
    f.push_back(map_field("ingest.map.description", &SchemaMap::description));
    f.push_back(map_field("ingest.map.title", &SchemaMap::title));
    f.push_back(map_field("ingest.map.location_strings", &SchemaMap::location_strings));
    f.push_back(map_field("ingest.map.posting_dates", &SchemaMap::posting_dates));
    f.push_back(map_field("ingest.map.structured_phones", &SchemaMap::structured_phones));
    f.push_back(map_field("ingest.map.image_hashes", &SchemaMap::image_hashes));
    f.push_back(map_field("ingest.map.provenance", &SchemaMap::provenance));
    f.push_back(string_field("paths.run_root", &PipelineConfig::paths_run_root));
    return f;
  }();
  return kFields;
}

const Field& find_field(const std::string& key) {
  for (const auto& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

void set_config_value(PipelineConfig& config, const std::string& key,
                      const std::string& value) {
  const Field& f = find_field(key);
  try {
    f.set(config, value);
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

std::string get_config_value(const PipelineConfig& config, const std::string& key) {
  return find_field(key).get(config);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(f.key);
  return keys;
}

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      set_config_value(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const PipelineConfig& config) {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(config);
    out.push_back('\n');
  }
  return out;
}

std::string config_hash(const PipelineConfig& config) {
  std::string canonical;
  for (const auto& f : fields()) {
    if (f.key.rfind("paths.", 0) == 0) continue;
    canonical += f.key + "=" + f.get(config) + "\n";
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(canonical);
  return os.str();
}

void override_seeds(PipelineConfig& config, std::uint64_t seed) {
  config.seed_split = seed;
  config.seed_oad = seed;
  config.seed_train = seed;
  config.seed_synth = seed;
}

}  // namespace adgraph

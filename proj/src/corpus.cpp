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

#include "adgraph/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "adgraph/text.hpp"

namespace adgraph {
namespace {

using nlohmann::json;

std::vector<std::string> string_list(const json& obj, const std::string& key,
                                     const char* field) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (it->is_string()) {
    out.push_back(it->get<std::string>());
    return out;
  }
  if (!it->is_array()) {
    throw IngestError(std::string(field) + " must be a string or array of strings");
  }
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw IngestError(std::string(field) + " must contain only strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

bool digits(std::string_view s, std::size_t pos, std::size_t n) {
  if (pos + n > s.size()) return false;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

int number_at(std::string_view s, std::size_t pos, std::size_t n) {
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) v = v * 10 + (s[i] - '0');
  return v;
}

json set_to_json(const std::set<std::string>& s) {
  json arr = json::array();
  for (const auto& v : s) arr.push_back(v);
  return arr;
}

std::set<std::string> json_to_set(const json& obj, const char* key) {
  std::set<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  for (const auto& v : *it) out.insert(v.get<std::string>());
  return out;
}

}  // namespace

bool is_iso_date(std::string_view s) {
  if (!digits(s, 0, 4) || s.size() < 10 || s[4] != '-' || !digits(s, 5, 2) ||
      s[7] != '-' || !digits(s, 8, 2)) {
    return false;
  }
  const int month = number_at(s, 5, 2);
  const int day = number_at(s, 8, 2);
  if (month < 1 || month > 12 || day < 1 || day > 31) return false;
  if (s.size() == 10) return true;
  if (s[10] != 'T' && s[10] != ' ') return false;
  if (!digits(s, 11, 2) || s.size() < 16 || s[13] != ':' || !digits(s, 14, 2)) {
    return false;
  }
  return number_at(s, 11, 2) < 24 && number_at(s, 14, 2) < 60;
}

RawAd parse_raw_ad(const json& obj, const SchemaMap& map) {
  if (!obj.is_object()) throw IngestError("record is not a JSON object");
  RawAd ad;

  auto id = obj.find(map.post_id);
  if (id == obj.end() || id->is_null()) throw IngestError("missing post_id");
  if (id->is_string()) {
    ad.post_id = id->get<std::string>();
  } else if (id->is_number_integer()) {
    ad.post_id = std::to_string(id->get<std::int64_t>());
  } else {
    throw IngestError("post_id must be a string or integer");
  }
  if (ad.post_id.empty()) throw IngestError("empty post_id");

  if (auto d = obj.find(map.description); d != obj.end() && !d->is_null()) {
    if (!d->is_string()) throw IngestError("description must be a string");
    ad.description = d->get<std::string>();
  }
  if (auto t = obj.find(map.title); t != obj.end() && !t->is_null()) {
    if (!t->is_string()) throw IngestError("title must be a string");
    ad.title = t->get<std::string>();
  }
  ad.location_strings = string_list(obj, map.location_strings, "location_strings");
  ad.posting_dates = string_list(obj, map.posting_dates, "posting_dates");
  ad.structured_phones = string_list(obj, map.structured_phones, "structured_phones");
  ad.image_hashes = string_list(obj, map.image_hashes, "image_hashes");
  for (auto& h : ad.image_hashes) {
    h = ascii_lower(trim(h));
    if (!is_lower_hex(h)) throw IngestError("image hash is not hex: '" + h + "'");
  }
  if (auto p = obj.find(map.provenance); p != obj.end() && !p->is_null()) {
    if (!p->is_string()) throw IngestError("provenance must be a string");
    ad.provenance = p->get<std::string>();
    if (ad.provenance.empty()) ad.provenance = "unknown";
  }
  return ad;
}

IngestStats ingest(const std::filesystem::path& path, const SchemaMap& map,
                   const std::function<void(RawAd&&)>& sink) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  IngestStats stats;
  std::string line;
  while (std::getline(in, line)) {
    ++stats.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    try {
      RawAd ad = parse_raw_ad(json::parse(line), map);
      ++stats.records;
      sink(std::move(ad));
    } catch (const std::exception& e) {
      ++stats.skipped;
      stats.diagnostics.push_back({stats.lines, e.what()});
    }
  }
  if (in.bad()) throw IngestError("read error on " + path.string());
  return stats;
}

std::vector<RawAd> ingest_all(const std::filesystem::path& path, const SchemaMap& map,
                              IngestStats* stats) {
  std::vector<RawAd> out;
  IngestStats s = ingest(path, map, [&](RawAd&& ad) { out.push_back(std::move(ad)); });
  if (stats) *stats = std::move(s);
  return out;
}

std::vector<AdRecord> deduplicate(std::vector<RawAd> ads, const DedupOptions& options,
                                  DedupStats* stats) {
  DedupStats st;
  st.input_count = ads.size();
  std::map<std::string, AdRecord> by_text;
  for (auto& ad : ads) {
    std::string key = options.trim ? trim(ad.description) : std::move(ad.description);
    if (key.empty()) {
      ++st.dropped_count;
      continue;
    }
    auto [it, inserted] = by_text.try_emplace(key);
    AdRecord& rec = it->second;
    if (inserted) rec.description = std::move(key);
    rec.merged_post_ids.insert(std::move(ad.post_id));
    for (auto& d : ad.posting_dates) {
      if (is_iso_date(d)) {
        rec.posting_dates.insert(std::move(d));
      } else {
        rec.unparsed_dates.insert(std::move(d));
      }
    }
    if (ad.title) rec.titles.insert(std::move(*ad.title));
    for (auto& l : ad.location_strings) rec.location_strings.insert(std::move(l));
    for (auto& p : ad.structured_phones) rec.structured_phones.insert(std::move(p));
    for (auto& h : ad.image_hashes) rec.image_hashes.insert(std::move(h));
    rec.provenances.insert(std::move(ad.provenance));
  }

  std::vector<AdRecord> out;
  out.reserve(by_text.size());
  for (auto& [text, rec] : by_text) {
    rec.ad_id = static_cast<std::uint32_t>(out.size());
    out.push_back(std::move(rec));
  }
  st.unique_count = out.size();
  const std::size_t kept = st.input_count - st.dropped_count;
  st.duplicate_rate =
      kept == 0 ? 0.0
                : static_cast<double>(kept - st.unique_count) / static_cast<double>(kept);
  if (stats) *stats = st;
  return out;
}

std::vector<RawAd> replay_as_raw(const std::vector<AdRecord>& records) {
  std::vector<RawAd> out;
  for (const auto& rec : records) {
    for (const auto& pid : rec.merged_post_ids) {
      RawAd ad;
      ad.post_id = pid;
      ad.description = rec.description;
      if (!rec.titles.empty()) ad.title = *rec.titles.begin();
      ad.location_strings.assign(rec.location_strings.begin(), rec.location_strings.end());
      ad.posting_dates.assign(rec.posting_dates.begin(), rec.posting_dates.end());
      ad.posting_dates.insert(ad.posting_dates.end(), rec.unparsed_dates.begin(),
                              rec.unparsed_dates.end());
      ad.structured_phones.assign(rec.structured_phones.begin(),
                                  rec.structured_phones.end());
      ad.image_hashes.assign(rec.image_hashes.begin(), rec.image_hashes.end());
      for (const auto& p : rec.provenances) {
        RawAd copy = ad;
        copy.provenance = p;
        out.push_back(std::move(copy));
      }
    }
  }
  return out;
}

ordered_json to_json(const AdRecord& r) {
  ordered_json j;
  j["ad_id"] = r.ad_id;
  j["description"] = r.description;
  j["merged_post_ids"] = set_to_json(r.merged_post_ids);
  j["posting_dates"] = set_to_json(r.posting_dates);
  j["unparsed_dates"] = set_to_json(r.unparsed_dates);
  j["titles"] = set_to_json(r.titles);
  j["location_strings"] = set_to_json(r.location_strings);
  j["structured_phones"] = set_to_json(r.structured_phones);
  j["image_hashes"] = set_to_json(r.image_hashes);
  j["provenances"] = set_to_json(r.provenances);
  ordered_json ents = ordered_json::array();
  for (const auto& e : r.entities) {
    ordered_json ej;
    ej["category"] = category_name(e.category);
    ej["value"] = e.value;
    ej["source"] = source_name(e.source);
    if (e.source_span) {
      ej["start"] = e.source_span->start;
      ej["end"] = e.source_span->end;
      ej["score"] = e.source_span->score;
      ej["surface"] = e.source_span->surface;
    }
    ents.push_back(std::move(ej));
  }
  j["entities"] = std::move(ents);
  if (r.masked_description) {
    j["masked_description"] = *r.masked_description;
  } else {
    j["masked_description"] = nullptr;
  }
  return j;
}

AdRecord ad_record_from_json(const json& j) {
  AdRecord r;
  r.ad_id = j.at("ad_id").get<std::uint32_t>();
  r.description = j.at("description").get<std::string>();
  r.merged_post_ids = json_to_set(j, "merged_post_ids");
  r.posting_dates = json_to_set(j, "posting_dates");
  r.unparsed_dates = json_to_set(j, "unparsed_dates");
  r.titles = json_to_set(j, "titles");
  r.location_strings = json_to_set(j, "location_strings");
  r.structured_phones = json_to_set(j, "structured_phones");
  r.image_hashes = json_to_set(j, "image_hashes");
  r.provenances = json_to_set(j, "provenances");
  if (auto it = j.find("entities"); it != j.end()) {
    for (const auto& ej : *it) {
      CanonicalEntity e;
      auto cat = parse_category(ej.at("category").get<std::string>());
      if (!cat) throw IngestError("unknown entity category in corpus");
      e.category = *cat;
      e.value = ej.at("value").get<std::string>();
      const std::string src = ej.value("source", "metadata");
      e.source = src == "span"      ? EntitySource::Span
                 : src == "pattern" ? EntitySource::Pattern
                                    : EntitySource::Metadata;
      if (ej.contains("start")) {
        RawSpan s;
        s.ad_id = r.ad_id;
        s.start = ej.at("start").get<std::size_t>();
        s.end = ej.at("end").get<std::size_t>();
        s.category = e.category;
        s.score = ej.value("score", 1.0);
        s.surface = ej.value("surface", "");
        e.source_span = std::move(s);
      }
      r.entities.push_back(std::move(e));
    }
  }
  if (auto it = j.find("masked_description"); it != j.end() && it->is_string()) {
    r.masked_description = it->get<std::string>();
  }
  return r;
}

ordered_json to_json(const DedupStats& s) {
  ordered_json j;
  j["input_count"] = s.input_count;
  j["unique_count"] = s.unique_count;
  j["dropped_count"] = s.dropped_count;
  j["duplicate_rate"] = s.duplicate_rate;
  return j;
}

ordered_json to_json(const IngestStats& s) {
  ordered_json j;
  j["lines"] = s.lines;
  j["records"] = s.records;
  j["skipped"] = s.skipped;
  ordered_json diags = ordered_json::array();
  for (const auto& d : s.diagnostics) {
    diags.push_back({{"line", d.line}, {"message", d.message}});
  }
  j["diagnostics"] = std::move(diags);
  return j;
}

void write_corpus(const std::filesystem::path& path, const std::vector<AdRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write " + path.string());
  for (const auto& r : records) {
    out << to_json(r).dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

std::vector<AdRecord> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  std::vector<AdRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      out.push_back(ad_record_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw IngestError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].ad_id != i) throw IngestError(path.string() + ": ad_id values are not dense");
  }
  return out;
}

void write_json_file(const std::filesystem::path& path, const ordered_json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write " + path.string());
  out << value.dump(2, ' ', false, json::error_handler_t::replace) << '\n';
}

}  // namespace adgraph

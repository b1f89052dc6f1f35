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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "adgraph/config.hpp"
#include "adgraph/entity.hpp"

namespace adgraph {

using ordered_json = nlohmann::ordered_json;

// One scraped record as it arrives from a feed.
struct RawAd {
  std::string post_id;
  std::string description;
  std::optional<std::string> title;
  std::vector<std::string> location_strings;
  std::vector<std::string> posting_dates;
  std::vector<std::string> structured_phones;
  std::vector<std::string> image_hashes;
  std::string provenance = "unknown";
};

// A distinct description with the metadata of every record that carried it.
struct AdRecord {
  std::uint32_t ad_id = 0;
  std::string description;
  std::set<std::string> merged_post_ids;
  std::set<std::string> posting_dates;
  // Dates that did not parse as ISO-8601; kept verbatim.
  std::set<std::string> unparsed_dates;
  std::set<std::string> titles;
  std::set<std::string> location_strings;
  std::set<std::string> structured_phones;
  std::set<std::string> image_hashes;
  std::set<std::string> provenances;

  std::vector<CanonicalEntity> entities;
  std::optional<std::string> masked_description;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IngestDiagnostic {
  std::size_t line = 0;
  std::string message;
};

struct IngestStats {
  std::size_t lines = 0;
  std::size_t records = 0;
  std::size_t skipped = 0;
  std::vector<IngestDiagnostic> diagnostics;
};

// Maps one JSON object onto a RawAd; throws IngestError on schema violation.
RawAd parse_raw_ad(const nlohmann::json& obj, const SchemaMap& map);

// Streams RawAds in file order. Malformed lines are skipped with a
// diagnostic; an unreadable file throws IngestError.
IngestStats ingest(const std::filesystem::path& path, const SchemaMap& map,
                   const std::function<void(RawAd&&)>& sink);
std::vector<RawAd> ingest_all(const std::filesystem::path& path,
                              const SchemaMap& map, IngestStats* stats = nullptr);

struct DedupStats {
  std::size_t input_count = 0;
  std::size_t unique_count = 0;
  std::size_t dropped_count = 0;
  // Share of non-empty records that were collapsed into another record.
  double duplicate_rate = 0.0;
};

struct DedupOptions {
  // Trim surrounding whitespace before comparing descriptions.
  bool trim = false;
};

// Collapses byte-identical descriptions. ad_id is the rank of the
// description in byte order, so the result does not depend on input order.
std::vector<AdRecord> deduplicate(std::vector<RawAd> ads, const DedupOptions& options,
                                  DedupStats* stats = nullptr);

// Expands records back into one RawAd per merged post id.
std::vector<RawAd> replay_as_raw(const std::vector<AdRecord>& records);

// Accepts YYYY-MM-DD optionally followed by 'T' or ' ' and a HH:MM[:SS...]
// time part.
bool is_iso_date(std::string_view s);

ordered_json to_json(const AdRecord& record);
AdRecord ad_record_from_json(const nlohmann::json& obj);
ordered_json to_json(const DedupStats& stats);
ordered_json to_json(const IngestStats& stats);

void write_corpus(const std::filesystem::path& path, const std::vector<AdRecord>& records);
std::vector<AdRecord> read_corpus(const std::filesystem::path& path);

void write_json_file(const std::filesystem::path& path, const ordered_json& value);

}  // namespace adgraph

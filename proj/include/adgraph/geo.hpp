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

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace adgraph {

inline constexpr double kEarthRadiusKm = 6371.0088;
inline constexpr double kKmPerMile = 1.609344;

struct GeoCandidate {
  std::string name;
  double lat = 0.0;
  double lon = 0.0;
  std::string country;  // ISO 3166-1 alpha-2

  bool operator==(const GeoCandidate&) const = default;
};

struct GeoPoint {
  double latitude = 0.0;
  double longitude = 0.0;
  std::string resolved_from;
  std::string country;
  std::string name;
};

// Great-circle (haversine) distance in statute miles on the mean Earth
// radius.
double distance_miles(const GeoPoint& a, const GeoPoint& b);
double distance_miles(double lat1, double lon1, double lat2, double lon2);

// First candidate located in the US, if any.
std::optional<GeoPoint> first_us_candidate(const std::string& query,
                                           const std::vector<GeoCandidate>& candidates);

// Raised by providers for failures worth retrying (network, 5xx, quota).
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeoProvider {
 public:
  virtual ~GeoProvider() = default;
  // Ordered candidates for a query; an empty list means no match.
  virtual std::vector<GeoCandidate> resolve(const std::string& query) = 0;
};

// Offline provider over a JSONL file of {query, candidates: [...]}. Queries
// absent from the file resolve to nothing.
class FixtureProvider : public GeoProvider {
 public:
  explicit FixtureProvider(const std::filesystem::path& path);
  explicit FixtureProvider(std::map<std::string, std::vector<GeoCandidate>> table);
  std::vector<GeoCandidate> resolve(const std::string& query) override;

 private:
  std::map<std::string, std::vector<GeoCandidate>> table_;
};

// Live provider speaking the Google Geocoding JSON response format:
// GET <base_url>?address=<query>&key=<key>. The key comes from the
// ADGRAPH_GEO_KEY environment variable when not given explicitly.
class HttpProvider : public GeoProvider {
 public:
  explicit HttpProvider(std::string base_url, std::optional<std::string> api_key = std::nullopt,
                        std::chrono::milliseconds timeout = std::chrono::seconds(10));
  std::vector<GeoCandidate> resolve(const std::string& query) override;

  // Parses a response body; exposed for tests.
  static std::vector<GeoCandidate> parse_response(const std::string& body);

 private:
  std::string scheme_host_port_;
  std::string path_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

// Append-only JSONL cache of provider answers keyed by query. Thread-safe;
// the cache is the only shared state between concurrent lookups.
class GeocodeCache {
 public:
  GeocodeCache() = default;  // memory only
  explicit GeocodeCache(std::filesystem::path path);

  std::optional<std::vector<GeoCandidate>> lookup(const std::string& query) const;
  void store(const std::string& query, const std::vector<GeoCandidate>& candidates);
  std::size_t size() const;

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::mutex mu_;
  std::map<std::string, std::vector<GeoCandidate>> entries_;
};

struct RetryPolicy {
  std::size_t attempts = 3;
  std::chrono::milliseconds base_delay{200};
};

struct GeocodeResult {
  std::optional<GeoPoint> point;
  bool from_cache = false;
  std::optional<std::string> error;
};

class Geocoder {
 public:
  Geocoder(GeoProvider& provider, GeocodeCache& cache, RetryPolicy retry = {});

  GeocodeResult geocode(const std::string& query);

  // Resolves distinct queries with at most max_inflight concurrent provider
  // calls. New cache entries are written in query order once all finish.
  std::map<std::string, GeocodeResult> geocode_all(const std::vector<std::string>& queries,
                                                   std::size_t max_inflight = 4);

  std::size_t provider_calls() const { return provider_calls_; }

 private:
  GeocodeResult lookup_or_fetch(const std::string& query, bool store_now,
                                std::vector<std::pair<std::string, std::vector<GeoCandidate>>>* fresh);

  GeoProvider& provider_;
  GeocodeCache& cache_;
  RetryPolicy retry_;
  std::mutex mu_;
  std::size_t provider_calls_ = 0;
};

}  // namespace adgraph

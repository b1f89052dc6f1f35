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

#include "adgraph/geo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "adgraph/text.hpp"

namespace adgraph {
namespace {

using nlohmann::json;

std::vector<GeoCandidate> candidates_from_json(const json& arr) {
  std::vector<GeoCandidate> out;
  for (const auto& c : arr) {
    out.push_back({c.value("name", ""), c.at("lat").get<double>(), c.at("lon").get<double>(),
                   c.value("country", "")});
  }
  return out;
}

json candidates_to_json(const std::vector<GeoCandidate>& cands) {
  json arr = json::array();
  for (const auto& c : cands) {
    json o;
    o["name"] = c.name;
    o["lat"] = c.lat;
    o["lon"] = c.lon;
    o["country"] = c.country;
    arr.push_back(std::move(o));
  }
  return arr;
}

std::map<std::string, std::vector<GeoCandidate>> read_candidate_file(
    const std::filesystem::path& path, bool must_exist) {
  std::map<std::string, std::vector<GeoCandidate>> table;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (must_exist) throw std::runtime_error("cannot open geocoding file " + path.string());
    return table;
  }
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
      // Later lines win, so an append-only cache can be corrected in place.
      table[j.at("query").get<std::string>()] = candidates_from_json(j.at("candidates"));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return table;
}

double radians(double deg) { return deg * M_PI / 180.0; }

}  // namespace

double distance_miles(double lat1, double lon1, double lat2, double lon2) {
  const double dlat = radians(lat2 - lat1);
  const double dlon = radians(lon2 - lon1);
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  double h = s1 * s1 + std::cos(radians(lat1)) * std::cos(radians(lat2)) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  const double central = 2.0 * std::asin(std::sqrt(h));
  return central * kEarthRadiusKm / kKmPerMile;
}

double distance_miles(const GeoPoint& a, const GeoPoint& b) {
  return distance_miles(a.latitude, a.longitude, b.latitude, b.longitude);
}

std::optional<GeoPoint> first_us_candidate(const std::string& query,
                                           const std::vector<GeoCandidate>& candidates) {
  for (const auto& c : candidates) {
    if (c.country != "US") continue;
    if (std::abs(c.lat) > 90.0 || std::abs(c.lon) > 180.0) continue;
    return GeoPoint{c.lat, c.lon, query, c.country, c.name};
  }
  return std::nullopt;
}

FixtureProvider::FixtureProvider(const std::filesystem::path& path)
    : table_(read_candidate_file(path, true)) {}

FixtureProvider::FixtureProvider(std::map<std::string, std::vector<GeoCandidate>> table)
    : table_(std::move(table)) {}

std::vector<GeoCandidate> FixtureProvider::resolve(const std::string& query) {
  auto it = table_.find(query);
  if (it == table_.end()) return {};
  return it->second;
}

HttpProvider::HttpProvider(std::string base_url, std::optional<std::string> api_key,
                           std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("geocoding base URL needs a scheme: " + base_url);
  }
  const auto path_start = base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_port_ = base_url;
    path_ = "/";
  } else {
    scheme_host_port_ = base_url.substr(0, path_start);
    path_ = base_url.substr(path_start);
  }
  if (api_key) {
    api_key_ = *api_key;
  } else if (const char* env = std::getenv("ADGRAPH_GEO_KEY")) {
    api_key_ = env;
  }
}

std::vector<GeoCandidate> HttpProvider::parse_response(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw TransportError(std::string("unparseable geocoding response: ") + e.what());
  }
  const std::string status = j.value("status", "OK");
  if (status == "ZERO_RESULTS") return {};
  if (status != "OK") throw TransportError("geocoding status " + status);
  std::vector<GeoCandidate> out;
  for (const auto& r : j.value("results", json::array())) {
    GeoCandidate c;
    c.name = r.value("formatted_address", "");
    const auto& loc = r.at("geometry").at("location");
    c.lat = loc.at("lat").get<double>();
    c.lon = loc.at("lng").get<double>();
    for (const auto& comp : r.value("address_components", json::array())) {
      const auto types = comp.value("types", json::array());
      if (std::find(types.begin(), types.end(), "country") != types.end()) {
        c.country = comp.value("short_name", "");
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<GeoCandidate> HttpProvider::resolve(const std::string& query) {
  httplib::Client client(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_).count();
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_).count() % 1000000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  httplib::Params params{{"address", query}};
  if (!api_key_.empty()) params.emplace("key", api_key_);
  auto res = client.Get(path_, params, httplib::Headers{});
  if (!res) throw TransportError("geocoding request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw TransportError("geocoding HTTP status " + std::to_string(res->status));
  }
  return parse_response(res->body);
}

GeocodeCache::GeocodeCache(std::filesystem::path path)
    : path_(std::move(path)), entries_(read_candidate_file(*path_, false)) {}

std::optional<std::vector<GeoCandidate>> GeocodeCache::lookup(const std::string& query) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(query);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void GeocodeCache::store(const std::string& query, const std::vector<GeoCandidate>& candidates) {
  std::lock_guard lock(mu_);
  entries_[query] = candidates;
  if (!path_) return;
  std::ofstream out(*path_, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot append to geocode cache " + path_->string());
  json line;
  line["query"] = query;
  line["candidates"] = candidates_to_json(candidates);
  out << line.dump() << '\n';
}

std::size_t GeocodeCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

Geocoder::Geocoder(GeoProvider& provider, GeocodeCache& cache, RetryPolicy retry)
    : provider_(provider), cache_(cache), retry_(retry) {}

GeocodeResult Geocoder::lookup_or_fetch(
    const std::string& query, bool store_now,
    std::vector<std::pair<std::string, std::vector<GeoCandidate>>>* fresh) {
  GeocodeResult result;
  if (auto hit = cache_.lookup(query)) {
    result.from_cache = true;
    result.point = first_us_candidate(query, *hit);
    return result;
  }
  std::string last_error;
  auto delay = retry_.base_delay;
  const std::size_t attempts = std::max<std::size_t>(retry_.attempts, 1);
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    try {
      {
        std::lock_guard lock(mu_);
        ++provider_calls_;
      }
      auto candidates = provider_.resolve(query);
      result.point = first_us_candidate(query, candidates);
      if (store_now) {
        cache_.store(query, candidates);
      } else {
        std::lock_guard lock(mu_);
        fresh->emplace_back(query, std::move(candidates));
      }
      return result;
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  result.error = last_error;
  return result;
}

GeocodeResult Geocoder::geocode(const std::string& query) {
  return lookup_or_fetch(query, true, nullptr);
}

std::map<std::string, GeocodeResult> Geocoder::geocode_all(const std::vector<std::string>& queries,
                                                           std::size_t max_inflight) {
  std::vector<std::string> distinct(queries.begin(), queries.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<GeocodeResult> results(distinct.size());
  std::vector<std::pair<std::string, std::vector<GeoCandidate>>> fresh;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < distinct.size(); i = next++) {
      results[i] = lookup_or_fetch(distinct[i], false, &fresh);
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(max_inflight, 1, std::max<std::size_t>(distinct.size(), 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::sort(fresh.begin(), fresh.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [q, cands] : fresh) cache_.store(q, cands);

  std::map<std::string, GeocodeResult> out;
  for (std::size_t i = 0; i < distinct.size(); ++i) out.emplace(distinct[i], std::move(results[i]));
  return out;
}

}  // namespace adgraph

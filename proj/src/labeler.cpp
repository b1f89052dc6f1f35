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

#include "adgraph/labeler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "adgraph/text.hpp"

namespace adgraph {
namespace {

// Points are scanned pairwise directly below this count.
constexpr std::size_t kBoxPrecheckMin = 16;

bool counts_as_identifier(EntityCategory c) {
  return c != EntityCategory::NameNickname && c != EntityCategory::Location;
}

// Upper bound on the haversine distance between any two points of a
// lat/lon box, or nullopt if the box spans more than half the globe in
// longitude.
std::optional<double> box_bound_miles(double min_lat, double max_lat, double min_lon,
                                      double max_lon) {
  const double dlon = max_lon - min_lon;
  if (dlon > 180.0) return std::nullopt;
  auto rad = [](double d) { return d * M_PI / 180.0; };
  const double max_cos =
      (min_lat <= 0.0 && max_lat >= 0.0)
          ? 1.0
          : std::cos(rad(std::min(std::abs(min_lat), std::abs(max_lat))));
  const double s_lat = std::sin(rad(max_lat - min_lat) / 2.0);
  const double s_lon = std::sin(rad(dlon) / 2.0);
  const double h = std::min(1.0, s_lat * s_lat + max_cos * max_cos * s_lon * s_lon);
  return 2.0 * std::asin(std::sqrt(h)) * kEarthRadiusKm / kKmPerMile;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

ComponentEvidence aggregate_evidence(std::span<const NodeId> members,
                                     std::span<const AdRecord> corpus) {
  ComponentEvidence ev;
  for (NodeId v : members) {
    for (const auto& e : corpus[v].entities) {
      if (e.category == EntityCategory::Location) {
        ev.locations.insert(e.value);
      } else {
        ev.identifiers[index_of(e.category)].insert(e.value);
      }
    }
  }
  return ev;
}

std::size_t identifier_threshold(EntityCategory category, const HeuristicConfig& config) {
  return (category == EntityCategory::PhoneNumber || category == EntityCategory::Email)
             ? config.phone_email_threshold
             : config.other_threshold;
}

std::optional<DistanceWitness> farthest_pair_over(
    const std::vector<std::pair<std::string, GeoPoint>>& points, double threshold_miles) {
  if (points.size() < 2) return std::nullopt;
  if (points.size() >= kBoxPrecheckMin) {
    double min_lat = 90, max_lat = -90, min_lon = 180, max_lon = -180;
    for (const auto& [name, p] : points) {
      min_lat = std::min(min_lat, p.latitude);
      max_lat = std::max(max_lat, p.latitude);
      min_lon = std::min(min_lon, p.longitude);
      max_lon = std::max(max_lon, p.longitude);
    }
    if (auto bound = box_bound_miles(min_lat, max_lat, min_lon, max_lon);
        bound && *bound <= threshold_miles) {
      return std::nullopt;
    }
  }
  DistanceWitness best;
  best.miles = -1.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = distance_miles(points[i].second, points[j].second);
      if (d > best.miles) best = {points[i].first, points[j].first, d};
    }
  }
  if (best.miles > threshold_miles) return best;
  return std::nullopt;
}

LabeledComponent label_component(NodeId component_id, std::span<const NodeId> members,
                                 std::span<const AdRecord> corpus,
                                 const std::map<std::string, GeoPoint>& geo,
                                 const HeuristicConfig& config) {
  LabeledComponent out;
  out.component_id = component_id;
  out.size = members.size();
  const ComponentEvidence ev = aggregate_evidence(members, corpus);

  std::vector<std::pair<std::string, GeoPoint>> points;
  for (const auto& loc : ev.locations) {
    if (auto it = geo.find(loc); it != geo.end()) points.emplace_back(loc, it->second);
  }
  out.resolved_locations = points.size();
  out.distance = farthest_pair_over(points, config.distance_miles);

  for (EntityCategory c : config.identifier_categories) {
    if (!counts_as_identifier(c)) continue;
    const std::size_t n = ev.identifiers[index_of(c)].size();
    if (n >= identifier_threshold(c, config)) {
      out.identifiers = IdentifierWitness{c, n};
      break;
    }
  }
  return out;
}

std::vector<std::string> corpus_locations(std::span<const AdRecord> corpus) {
  std::set<std::string> all;
  for (const auto& ad : corpus) {
    for (const auto& e : ad.entities) {
      if (e.category == EntityCategory::Location) all.insert(e.value);
    }
  }
  return {all.begin(), all.end()};
}

OverlapReport heuristic_overlap(std::span<const LabeledComponent> labels) {
  OverlapReport r;
  for (const auto& l : labels) {
    if (l.distance_fired() && l.identifiers_fired()) {
      ++r.both;
    } else if (l.distance_fired()) {
      ++r.distance_only;
    } else if (l.identifiers_fired()) {
      ++r.identifiers_only;
    } else {
      ++r.negative;
    }
  }
  return r;
}

ordered_json to_json(const OverlapReport& r) {
  ordered_json j;
  j["distance_only"] = r.distance_only;
  j["identifiers_only"] = r.identifiers_only;
  j["both"] = r.both;
  j["negative"] = r.negative;
  j["positive"] = r.distance_only + r.identifiers_only + r.both;
  return j;
}

std::string overlap_summary_text(const OverlapReport& r) {
  std::ostringstream os;
  os << "Positive components by heuristic\n"
     << "  distance only     : " << r.distance_only << '\n'
     << "  identifiers only  : " << r.identifiers_only << '\n'
     << "  both              : " << r.both << '\n'
     << "  (negative)        : " << r.negative << '\n'
     << '\n'
     << "   ( distance  ( both )  identifiers )\n"
     << "      " << r.distance_only << "        " << r.both << "        " << r.identifiers_only
     << '\n';
  return os.str();
}

void write_labels_csv(const std::filesystem::path& path, std::span<const LabeledComponent> labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "component_id,size,positive,distance_fired,identifiers_fired,location_a,location_b,"
         "miles,identifier_category,identifier_count\n";
  for (const auto& l : labels) {
    out << l.component_id << ',' << l.size << ',' << (l.positive() ? 1 : 0) << ','
        << (l.distance_fired() ? 1 : 0) << ',' << (l.identifiers_fired() ? 1 : 0) << ',';
    if (l.distance) {
      std::ostringstream miles;
      miles << std::fixed << std::setprecision(3) << l.distance->miles;
      out << csv_field(l.distance->location_a) << ',' << csv_field(l.distance->location_b) << ','
          << miles.str();
    } else {
      out << ",,";
    }
    out << ',';
    if (l.identifiers) {
      out << category_name(l.identifiers->category) << ',' << l.identifiers->count;
    } else {
      out << ',';
    }
    out << '\n';
  }
}

std::vector<LabeledComponent> read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<LabeledComponent> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 10) throw std::runtime_error("malformed labels row: " + line);
    LabeledComponent l;
    l.component_id = static_cast<NodeId>(std::stoul(f[0]));
    l.size = std::stoul(f[1]);
    if (f[3] == "1") l.distance = DistanceWitness{f[5], f[6], std::stod(f[7])};
    if (f[4] == "1") {
      auto cat = parse_category(f[8]);
      if (!cat) throw std::runtime_error("unknown category in labels: " + f[8]);
      l.identifiers = IdentifierWitness{*cat, std::stoul(f[9])};
    }
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace adgraph

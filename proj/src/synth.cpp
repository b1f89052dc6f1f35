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

#include "adgraph/synth.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "adgraph/rng.hpp"
#include "adgraph/text.hpp"

namespace adgraph {
namespace {

struct City {
  const char* display;
  const char* query;
  double lat;
  double lon;
  int metro;
};

// Cities sharing a metro id lie within driving distance of each other.
constexpr City kCities[] = {
    {"New York, NY", "new york, ny", 40.7128, -74.0060, 0},
    {"Newark, NJ", "newark, nj", 40.7357, -74.1724, 0},
    {"Los Angeles, CA", "los angeles, ca", 34.0522, -118.2437, 1},
    {"Long Beach, CA", "long beach, ca", 33.7701, -118.1937, 1},
    {"Chicago, IL", "chicago, il", 41.8781, -87.6298, 2},
    {"Milwaukee, WI", "milwaukee, wi", 43.0389, -87.9065, 2},
    {"Houston, TX", "houston, tx", 29.7604, -95.3698, 3},
    {"Galveston, TX", "galveston, tx", 29.3013, -94.7977, 3},
    {"Dallas, TX", "dallas, tx", 32.7767, -96.7970, 4},
    {"Fort Worth, TX", "fort worth, tx", 32.7555, -97.3308, 4},
    {"Miami, FL", "miami, fl", 25.7617, -80.1918, 5},
    {"Fort Lauderdale, FL", "fort lauderdale, fl", 26.1224, -80.1373, 5},
    {"Washington, DC", "washington, dc", 38.9072, -77.0369, 6},
    {"Alexandria", "alexandria", 38.8048, -77.0469, 6},
    {"Phoenix, AZ", "phoenix, az", 33.4484, -112.0740, 7},
    {"Atlanta, GA", "atlanta, ga", 33.7490, -84.3880, 8},
    {"Seattle, WA", "seattle, wa", 47.6062, -122.3321, 9},
    {"Denver, CO", "denver, co", 39.7392, -104.9903, 10},
    {"Las Vegas, NV", "las vegas, nv", 36.1699, -115.1398, 11},
    {"Boston, MA", "boston, ma", 42.3601, -71.0589, 12},
    {"San Diego, CA", "san diego, ca", 32.7157, -117.1611, 13},
    {"Orlando, FL", "orlando, fl", 28.5383, -81.3792, 14},
    {"Nashville, TN", "nashville, tn", 36.1627, -86.7816, 15},
    {"Minneapolis, MN", "minneapolis, mn", 44.9778, -93.2650, 16},
    {"Paris", "paris", 33.6609, -95.5555, 17},
};
constexpr std::size_t kCityCount = std::size(kCities);
constexpr std::size_t kAlexandria = 13;
constexpr std::size_t kParis = 24;

// Queries whose first geocoder candidate lies outside the US.
GeoCandidate foreign_candidate(std::size_t city) {
  if (city == kAlexandria) return {"Alexandria, Egypt", 31.2001, 29.9187, "EG"};
  return {"Paris, France", 48.8566, 2.3522, "FR"};
}

constexpr const char* kNames[] = {
    "Jasmine", "Candy", "Destiny", "Amber", "Crystal", "Bella", "Mia", "Luna", "Nina", "Roxy",
    "Kiki", "Sasha", "Gigi", "Lola", "Ruby", "Skye", "Tia", "Zoe", "Aria", "Jade",
    "Renée", "Chloé", "Dani", "Eva", "Ivy", "Jolie", "Kara", "Lexi", "Maya", "Nova"};
constexpr const char* kGreet[] = {"Hey", "Hi", "Hello", "Welcome", "Hey there", "Good evening",
                                  "Hiya", "Greetings"};
constexpr const char* kAdj[] = {"sweet", "friendly", "charming", "elegant", "playful", "gentle",
                                "bubbly", "classy", "cheerful", "relaxed", "warm", "lovely",
                                "sunny", "curious", "bright", "calm"};
constexpr const char* kNoun[] = {"companion", "lady", "hostess", "dancer", "model", "friend",
                                 "date", "girl next door", "muse", "sweetheart"};
constexpr const char* kDay[] = {"evening", "weekend", "night", "afternoon", "lunch break",
                                "business trip", "morning", "day off"};
constexpr const char* kWhen[] = {"late nights", "weekends only", "after 6pm", "all day",
                                 "early mornings", "weekdays", "by the hour", "on short notice"};
constexpr const char* kPolite[] = {"thank you", "gentlemen only", "respect is a must",
                                   "be kind", "no rush", "serious inquiries", "be on time",
                                   "manners matter"};
constexpr const char* kFeature[] = {"long curly hair", "a great smile", "green eyes",
                                    "a soft voice", "tattoos", "freckles", "a dry humor",
                                    "dimples", "a love of jazz", "painted nails"};
constexpr const char* kPlace[] = {"north", "south", "east", "west", "uptown", "downtown",
                                  "airport", "lakeside", "harbor", "midtown"};
constexpr const char* kThing[] = {"playlist", "wine list", "sense of humor", "laugh", "schedule",
                                  "apartment", "style", "vibe", "energy", "taste in movies"};
constexpr const char* kVerb[] = {"rush", "cancel", "judge", "disappoint", "complain", "hurry",
                                 "overthink", "forget a face"};
constexpr const char* kEmoji[] = {"", "", "", "✨", "💋", "🌹", "😘", "💕", "🔥", "!!", "~", "..."};
constexpr const char* kSignal[] = {"new in town", "just arrived", "only here a few days",
                                   "fresh and young", "new girl", "leaving soon",
                                   "visiting this week", "first time here", "brand new in the area",
                                   "young and sweet"};
constexpr const char* kCalm[] = {"independent", "mature and classy", "upscale professional",
                                 "by appointment only", "established provider",
                                 "discreet and professional", "long time local",
                                 "reviews available"};
constexpr const char* kDigitWords[] = {"zero", "one", "two", "three", "four",
                                       "five", "six", "seven", "eight", "nine"};
constexpr const char* kHandleRoots[] = {"candy", "sugar", "honey", "kitty", "angel", "baby",
                                        "star", "velvet", "cherry", "peach", "bunny", "lux"};

template <typename T, std::size_t N>
const T& pick(const T (&arr)[N], Rng& rng) {
  return arr[rng.uniform_index(N)];
}

struct Piece {
  std::string text;
  std::optional<EntityCategory> category;
};

using Sentence = std::vector<Piece>;

struct Draft {
  std::vector<Sentence> sentences;
  std::vector<std::size_t> filler;  // indexes of plain sentences
  std::vector<std::string> locations;
  std::vector<std::string> structured_phones;
  std::vector<std::string> images;
  std::optional<std::string> title;
};

std::string filler_sentence(Rng& rng) {
  std::string s;
  switch (rng.uniform_index(12)) {
    case 0: s = std::string(pick(kGreet, rng)) + ", " + pick(kAdj, rng) + " " + pick(kNoun, rng) + " here"; break;
    case 1: s = std::string("Let me make your ") + pick(kDay, rng) + " " + pick(kAdj, rng); break;
    case 2: s = "Rates start at $" + std::to_string(80 + 10 * rng.uniform_index(30)); break;
    case 3: s = std::string("Available ") + pick(kWhen, rng) + ", " + pick(kPolite, rng); break;
    case 4: s = std::string("I have ") + pick(kFeature, rng) + " and " + pick(kFeature, rng); break;
    case 5: s = std::to_string(21 + rng.uniform_index(20)) + " years young and " + pick(kAdj, rng); break;
    case 6: s = std::string("Staying on the ") + pick(kPlace, rng) + " side"; break;
    case 7: s = std::string("You will love my ") + pick(kThing, rng); break;
    case 8: s = std::string("I never ") + pick(kVerb, rng) + ", " + pick(kPolite, rng); break;
    case 9: s = std::string("Perfect for a ") + pick(kDay, rng) + " with a " + pick(kAdj, rng) + " " + pick(kNoun, rng); break;
    case 10: s = std::string("Text first, ") + pick(kPolite, rng); break;
    default: s = std::string("My ") + pick(kThing, rng) + " is " + pick(kAdj, rng) + " and " + pick(kAdj, rng); break;
  }
  const std::string_view end = rng.bernoulli(0.5) ? "." : pick(kEmoji, rng);
  s += end.empty() ? "." : std::string(end);
  return s;
}

Sentence plain(std::string s) { return {Piece{std::move(s), std::nullopt}}; }

Sentence around(std::string before, std::string entity, EntityCategory cat, std::string after) {
  Sentence s;
  if (!before.empty()) s.push_back({std::move(before), std::nullopt});
  s.push_back({std::move(entity), cat});
  if (!after.empty()) s.push_back({std::move(after), std::nullopt});
  return s;
}

std::string format_phone(const std::string& d, Rng& rng, double obfuscation) {
  if (rng.bernoulli(obfuscation)) {
    std::string out;
    for (char c : d) {
      if (rng.bernoulli(0.45)) {
        out += kDigitWords[c - '0'];
      } else {
        out.push_back(c);
      }
    }
    return out;
  }
  const std::string a = d.substr(0, 3), b = d.substr(3, 3), c = d.substr(6);
  switch (rng.uniform_index(6)) {
    case 0: return "(" + a + ") " + b + "-" + c;
    case 1: return a + "-" + b + "-" + c;
    case 2: return a + "." + b + "." + c;
    case 3: return a + " " + b + " " + c;
    case 4: return "+1 " + a + " " + b + " " + c;
    default: return "1-" + a + "-" + b + "-" + c;
  }
}

Sentence phone_sentence(const std::string& digits, Rng& rng, double obfuscation) {
  static constexpr const char* kBefore[] = {"Call ", "Text me ", "Txt ", "Reach me at ", "📱 ", "Contact "};
  static constexpr const char* kAfter[] = {" anytime.", ".", " now!", " for details.", ""};
  return around(pick(kBefore, rng), format_phone(digits, rng, obfuscation),
                EntityCategory::PhoneNumber, pick(kAfter, rng));
}

Sentence handle_sentence(EntityCategory cat, const std::string& handle, Rng& rng) {
  switch (cat) {
    case EntityCategory::Snapchat: return around(rng.bernoulli(0.5) ? "sc: " : "Add my snap ", handle, cat, "");
    case EntityCategory::Twitter: return around("follow ", "@" + handle, cat, "");
    case EntityCategory::Onlyfans: return around("OF ", handle, cat, "");
    case EntityCategory::Instagram: return around("ig ", handle, cat, "");
    case EntityCategory::UsernameOther: return around("kik ", handle, cat, "");
    case EntityCategory::Email: return around("Email ", handle, cat, " only.");
    default: return plain(handle);
  }
}

class Uniques {
 public:
  std::string phone(Rng& rng) {
    for (;;) {
      std::string d = std::to_string(2 + rng.uniform_index(8));
      for (int i = 0; i < 9; ++i) d.push_back(static_cast<char>('0' + rng.uniform_index(10)));
      if (d[3] == '0' || d[3] == '1') continue;
      if (phones_.insert(d).second) return d;
    }
  }
  std::string handle(Rng& rng) {
    for (;;) {
      std::string h = std::string(pick(kHandleRoots, rng)) + (rng.bernoulli(0.5) ? "_" : "") +
                      ascii_lower(pick(kNames, rng)) + std::to_string(rng.uniform_index(10000));
      // Accented names would not lowercase consistently; keep handles ASCII.
      if (std::any_of(h.begin(), h.end(), [](char c) { return static_cast<unsigned char>(c) >= 0x80; })) continue;
      if (handles_.insert(h).second) return h;
    }
  }
  std::string email(Rng& rng) { return handle(rng) + "@" + (rng.bernoulli(0.5) ? "mailbox.com" : "inbox.net"); }
  std::string image(Rng& rng) {
    for (;;) {
      char buf[17];
      std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(rng.next()));
      if (images_.insert(buf).second) return buf;
    }
  }
  bool claim_text(const std::string& text) { return texts_.insert(text).second; }

 private:
  std::set<std::string> phones_, handles_, images_, texts_;
};

std::string render(const Draft& d, std::vector<RawSpan>* spans) {
  std::string text;
  std::size_t cp = 0;
  for (std::size_t i = 0; i < d.sentences.size(); ++i) {
    if (i) {
      text.push_back(' ');
      ++cp;
    }
    for (const auto& p : d.sentences[i]) {
      const std::size_t len = utf8_length(p.text);
      if (p.category && spans) {
        RawSpan s;
        s.start = cp;
        s.end = cp + len;
        s.category = *p.category;
        s.surface = p.text;
        spans->push_back(std::move(s));
      }
      text += p.text;
      cp += len;
    }
  }
  return text;
}

std::string random_date(Rng& rng) {
  const int month = 1 + static_cast<int>(rng.uniform_index(9));
  const int day = 1 + static_cast<int>(rng.uniform_index(28));
  char buf[32];
  if (rng.bernoulli(0.05)) {
    std::snprintf(buf, sizeof(buf), "%02d/%02d/2021", month, day);
  } else {
    std::snprintf(buf, sizeof(buf), "2021-%02d-%02d", month, day);
  }
  return buf;
}

void add_fillers(Draft& d, std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    d.filler.push_back(d.sentences.size());
    d.sentences.push_back(plain(filler_sentence(rng)));
  }
}

void add_tone(Draft& d, bool positive, Rng& rng) {
  if (rng.bernoulli(positive ? 0.9 : 0.08)) {
    std::string s = pick(kSignal, rng);
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    d.sentences.push_back(plain(s + "!"));
    if (positive && rng.bernoulli(0.5)) d.sentences.push_back(plain(std::string(pick(kSignal, rng)) + "."));
  }
  if (rng.bernoulli(positive ? 0.15 : 0.6)) {
    std::string s = pick(kCalm, rng);
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    d.sentences.push_back(plain(s + "."));
  }
}

void shuffle_sentences(Draft& d, Rng& rng) {
  std::vector<std::size_t> order(d.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<Sentence> s;
  std::vector<std::size_t> filler;
  for (std::size_t i = 0; i < order.size(); ++i) {
    s.push_back(std::move(d.sentences[order[i]]));
    if (std::find(d.filler.begin(), d.filler.end(), order[i]) != d.filler.end()) filler.push_back(i);
  }
  d.sentences = std::move(s);
  d.filler = std::move(filler);
}

// A lookalike of `base`: one plain sentence replaced and the rest kept.
Draft near_duplicate(const Draft& base, Rng& rng) {
  Draft d = base;
  if (!d.filler.empty()) {
    d.sentences[d.filler[rng.uniform_index(d.filler.size())]] = plain(filler_sentence(rng));
  } else {
    d.sentences.push_back(plain(filler_sentence(rng)));
  }
  return d;
}

// Swaps every hard identifier for a fresh one, so a reused template does not
// link to the ad it was copied from.
void refresh_identifiers(Draft& d, Uniques& u, Rng& rng, double obfuscation) {
  for (auto& sentence : d.sentences) {
    for (auto& piece : sentence) {
      if (!piece.category) continue;
      switch (*piece.category) {
        case EntityCategory::PhoneNumber: piece.text = format_phone(u.phone(rng), rng, obfuscation); break;
        case EntityCategory::Email: piece.text = u.email(rng); break;
        case EntityCategory::Twitter: piece.text = "@" + u.handle(rng); break;
        case EntityCategory::Snapchat:
        case EntityCategory::Onlyfans:
        case EntityCategory::Instagram:
        case EntityCategory::UsernameOther: piece.text = u.handle(rng); break;
        default: break;
      }
    }
  }
  for (auto& p : d.structured_phones) p = u.phone(rng);
}

struct ClusterPlan {
  std::string primary;
  std::optional<std::string> secondary;
  std::vector<std::size_t> cities;
  std::vector<std::string> snapchats;
  std::optional<std::string> email;
  std::string image;
  std::string name;
};

double max_city_miles(const std::set<std::size_t>& cities) {
  double best = 0.0;
  for (std::size_t a : cities) {
    for (std::size_t b : cities) {
      best = std::max(best, distance_miles(kCities[a].lat, kCities[a].lon, kCities[b].lat,
                                           kCities[b].lon));
    }
  }
  return best;
}

ClusterPlan plan_cluster(ClusterKind kind, Uniques& u, Rng& rng) {
  ClusterPlan p;
  p.primary = u.phone(rng);
  if (kind == ClusterKind::MultiPhone || kind == ClusterKind::Both) p.secondary = u.phone(rng);
  if (kind == ClusterKind::Traveling || kind == ClusterKind::Both) {
    for (;;) {
      const std::size_t a = rng.uniform_index(kCityCount), b = rng.uniform_index(kCityCount);
      if (max_city_miles({a, b}) > 500.0) {
        p.cities = {a, b};
        break;
      }
    }
  } else if (kind == ClusterKind::LocalNegative) {
    const int metro = static_cast<int>(rng.uniform_index(7));
    for (std::size_t c = 0; c < kCityCount; ++c) {
      if (kCities[c].metro == metro) p.cities.push_back(c);
    }
  } else {
    p.cities = {rng.uniform_index(kCityCount)};
  }
  if (kind == ClusterKind::Handles) {
    for (int i = 0; i < 3; ++i) p.snapchats.push_back(u.handle(rng));
  } else if (rng.bernoulli(0.5)) {
    p.snapchats.push_back(u.handle(rng));
  }
  if (kind != ClusterKind::Handles && rng.bernoulli(0.4)) p.email = u.email(rng);
  p.image = u.image(rng);
  p.name = pick(kNames, rng);
  return p;
}

void add_location(Draft& d, std::size_t city, Rng& rng) {
  d.locations.push_back(kCities[city].display);
  if (rng.bernoulli(0.5)) {
    d.sentences.push_back(around(rng.bernoulli(0.5) ? "Now in " : "Visiting ", kCities[city].display,
                                 EntityCategory::Location, "."));
  }
}

void add_name(Draft& d, const std::string& name, Rng& rng) {
  d.sentences.push_back(around(rng.bernoulli(0.5) ? "I'm " : "Ask for ", name,
                               EntityCategory::NameNickname, "."));
}

}  // namespace

std::string_view cluster_kind_name(ClusterKind k) {
  switch (k) {
    case ClusterKind::MultiPhone: return "multi_phone";
    case ClusterKind::Traveling: return "traveling";
    case ClusterKind::Both: return "both";
    case ClusterKind::Handles: return "handles";
    case ClusterKind::LocalNegative: return "local_negative";
  }
  return "unknown";
}

SynthCorpus generate_synth(const SynthOptions& o) {
  if (o.repost_mean < 1.0) throw std::invalid_argument("repost mean must be >= 1");
  if (o.min_cluster < 3 || o.max_cluster < o.min_cluster) {
    throw std::invalid_argument("cluster sizes must satisfy 3 <= min <= max");
  }
  SynthCorpus out;
  out.options = o;
  const Rng root(o.seed, "synth");
  Rng plan_rng = root.split("plan");
  Rng text_rng = root.split("text");
  Rng meta_rng = root.split("meta");
  Uniques u;

  const auto distinct = static_cast<std::size_t>(static_cast<double>(o.ads) / o.repost_mean + 0.5);
  std::vector<std::size_t> sizes;
  std::size_t cluster_ads = 0;
  for (std::size_t c = 0; c < o.clusters; ++c) {
    sizes.push_back(o.min_cluster + plan_rng.uniform_index(o.max_cluster - o.min_cluster + 1));
    cluster_ads += sizes.back();
  }
  if (cluster_ads > distinct || distinct > o.ads) {
    throw std::invalid_argument("not enough ads for " + std::to_string(o.clusters) +
                                " clusters at repost mean " + std::to_string(o.repost_mean));
  }

  struct Distinct {
    Draft draft;
    std::string text;
    std::vector<RawSpan> spans;
    std::optional<std::size_t> cluster;
  };
  std::vector<Distinct> ads;

  auto finish = [&](Draft d, std::optional<std::size_t> cluster) {
    std::string text = render(d, nullptr);
    while (!u.claim_text(text)) {
      add_fillers(d, 1, text_rng);
      text = render(d, nullptr);
    }
    Distinct x;
    x.text = render(d, &x.spans);
    for (auto& s : x.spans) s.score = text_rng.uniform(0.92, 0.999);
    x.draft = std::move(d);
    x.cluster = cluster;
    ads.push_back(std::move(x));
  };

  for (std::size_t c = 0; c < o.clusters; ++c) {
    PlantedCluster truth;
    truth.index = c;
    truth.kind = static_cast<ClusterKind>(c % 5);
    const ClusterPlan plan = plan_cluster(truth.kind, u, plan_rng);
    std::set<std::size_t> used_cities;
    const bool planned_positive = truth.kind != ClusterKind::LocalNegative;
    const std::size_t first = ads.size();
    for (std::size_t j = 0; j < sizes[c]; ++j) {
      if (j >= 3 && text_rng.bernoulli(o.near_duplicate_rate)) {
        const Distinct& base = ads[first + text_rng.uniform_index(j)];
        for (const auto& loc : base.draft.locations) {
          for (std::size_t k = 0; k < kCityCount; ++k) {
            if (loc == kCities[k].display) used_cities.insert(k);
          }
        }
        finish(near_duplicate(base.draft, text_rng), c);
        continue;
      }
      Draft d;
      add_fillers(d, 2 + text_rng.uniform_index(6), text_rng);
      d.sentences.push_back(phone_sentence(plan.primary, text_rng, o.obfuscation_rate));
      if (text_rng.bernoulli(0.3)) d.structured_phones.push_back(plan.primary);
      if (plan.secondary && (j == 1 || (j > 2 && text_rng.bernoulli(0.5)))) {
        d.sentences.push_back(phone_sentence(*plan.secondary, text_rng, o.obfuscation_rate));
      }
      const std::size_t city = plan.cities.size() == 1 ? plan.cities[0]
                               : j < plan.cities.size() ? plan.cities[j]
                                                        : plan.cities[text_rng.uniform_index(plan.cities.size())];
      used_cities.insert(city);
      add_location(d, city, text_rng);
      if (!plan.snapchats.empty()) {
        const std::string& h = j < plan.snapchats.size()
                                   ? plan.snapchats[j]
                                   : plan.snapchats[text_rng.uniform_index(plan.snapchats.size())];
        d.sentences.push_back(handle_sentence(EntityCategory::Snapchat, h, text_rng));
      }
      if (plan.email && text_rng.bernoulli(0.5)) {
        d.sentences.push_back(handle_sentence(EntityCategory::Email, *plan.email, text_rng));
      }
      if (text_rng.bernoulli(0.7)) add_name(d, plan.name, text_rng);
      add_tone(d, planned_positive, text_rng);
      shuffle_sentences(d, text_rng);
      d.images = {plan.image};
      if (meta_rng.bernoulli(0.5)) d.images.push_back(u.image(meta_rng));
      if (meta_rng.bernoulli(0.5)) {
        d.title = std::string(pick(kAdj, meta_rng)) + " " + pick(kNoun, meta_rng) + " in " +
                  kCities[city].display;
      }
      finish(std::move(d), c);
    }
    // Truth from what was actually planted.
    for (std::size_t k = first; k < ads.size(); ++k) {
      for (const auto& sp : ads[k].spans) {
        switch (sp.category) {
          case EntityCategory::PhoneNumber: break;
          case EntityCategory::Email: truth.emails.insert(ascii_lower(sp.surface)); break;
          case EntityCategory::Snapchat: truth.handles["snapchat"].insert(ascii_lower(sp.surface)); break;
          default: break;
        }
      }
    }
    // Ad j == 1 always carries the secondary phone.
    truth.phones.insert("+1" + plan.primary);
    if (plan.secondary) truth.phones.insert("+1" + *plan.secondary);
    for (std::size_t city : used_cities) truth.locations.insert(kCities[city].query);
    truth.max_miles = max_city_miles(used_cities);
    truth.expect_distance = truth.max_miles > 300.0;
    truth.expect_identifiers = truth.phones.size() >= 2 || truth.emails.size() >= 2;
    for (const auto& [key, values] : truth.handles) {
      if (values.size() >= 3) truth.expect_identifiers = true;
    }
    out.clusters.push_back(std::move(truth));
  }

  const std::size_t background = distinct - cluster_ads;
  std::vector<std::size_t> background_ads;
  for (std::size_t b = 0; b < background; ++b) {
    if (!background_ads.empty() && text_rng.bernoulli(o.template_reuse_rate)) {
      const Distinct& base = ads[background_ads[text_rng.uniform_index(background_ads.size())]];
      Draft d = near_duplicate(base.draft, text_rng);
      refresh_identifiers(d, u, text_rng, o.obfuscation_rate);
      d.images.clear();
      if (meta_rng.bernoulli(0.7)) d.images.push_back(u.image(meta_rng));
      background_ads.push_back(ads.size());
      finish(std::move(d), std::nullopt);
      continue;
    }
    Draft d;
    add_fillers(d, 1 + text_rng.uniform_index(8), text_rng);
    if (text_rng.bernoulli(0.9)) {
      const std::string phone = u.phone(text_rng);
      if (text_rng.bernoulli(0.8)) {
        d.sentences.push_back(phone_sentence(phone, text_rng, o.obfuscation_rate));
      } else {
        d.structured_phones.push_back(phone);
      }
    }
    const std::size_t city = text_rng.bernoulli(0.05)
                                 ? (text_rng.bernoulli(0.5) ? kAlexandria : kParis)
                                 : text_rng.uniform_index(kCityCount);
    add_location(d, city, text_rng);
    struct Optional {
      EntityCategory cat;
      double p;
    };
    for (const Optional& opt : {Optional{EntityCategory::Email, 0.1}, Optional{EntityCategory::Snapchat, 0.15},
                                Optional{EntityCategory::Twitter, 0.1}, Optional{EntityCategory::Onlyfans, 0.05},
                                Optional{EntityCategory::Instagram, 0.1},
                                Optional{EntityCategory::UsernameOther, 0.05}}) {
      if (!text_rng.bernoulli(opt.p)) continue;
      const std::string h = opt.cat == EntityCategory::Email ? u.email(text_rng) : u.handle(text_rng);
      d.sentences.push_back(handle_sentence(opt.cat, h, text_rng));
    }
    if (text_rng.bernoulli(0.6)) add_name(d, pick(kNames, text_rng), text_rng);
    add_tone(d, false, text_rng);
    shuffle_sentences(d, text_rng);
    if (meta_rng.bernoulli(0.7)) d.images.push_back(u.image(meta_rng));
    if (meta_rng.bernoulli(0.5)) {
      d.title = std::string(pick(kAdj, meta_rng)) + " " + pick(kNoun, meta_rng);
    }
    background_ads.push_back(ads.size());
    finish(std::move(d), std::nullopt);
  }
  out.distinct_ads = ads.size();

  // Reposts: every distinct ad appears once, extra copies land uniformly.
  Rng repost_rng = root.split("repost");
  std::vector<std::size_t> copies(ads.size(), 1);
  for (std::size_t extra = ads.size(); extra < o.ads; ++extra) {
    ++copies[repost_rng.uniform_index(ads.size())];
  }
  std::vector<std::pair<std::size_t, std::size_t>> feed;  // (ad, copy)
  feed.reserve(o.ads);
  for (std::size_t a = 0; a < ads.size(); ++a) {
    for (std::size_t c = 0; c < copies[a]; ++c) feed.emplace_back(a, c);
  }
  repost_rng.shuffle(std::span<std::pair<std::size_t, std::size_t>>(feed));

  std::vector<std::string> first_post(ads.size());
  out.raw.reserve(feed.size());
  for (std::size_t i = 0; i < feed.size(); ++i) {
    const auto [a, c] = feed[i];
    const Distinct& x = ads[a];
    char id[24];
    std::snprintf(id, sizeof(id), "p%08zu", i + 1);
    RawAd r;
    r.post_id = id;
    r.description = x.text;
    r.title = x.draft.title;
    r.location_strings = x.draft.locations;
    r.structured_phones = x.draft.structured_phones;
    r.posting_dates = {random_date(repost_rng)};
    const bool partner = c > 0 && repost_rng.bernoulli(o.partner_rate);
    r.provenance = partner ? "partner" : "own";
    if (!partner) r.image_hashes = x.draft.images;
    if (c == 0) first_post[a] = r.post_id;
    out.raw.push_back(std::move(r));
  }

  Rng noise_rng = root.split("noise");
  for (std::size_t a = 0; a < ads.size(); ++a) {
    const Distinct& x = ads[a];
    for (const auto& s : x.spans) {
      SpanRecord rec;
      rec.doc_key = first_post[a];
      rec.post_id = first_post[a];
      rec.span = s;
      out.spans.push_back(std::move(rec));
    }
    if (noise_rng.bernoulli(o.noise_span_rate)) {
      // A low-confidence guess on some word; always below the score cut.
      const std::u32string t = utf8_decode(x.text);
      std::vector<std::pair<std::size_t, std::size_t>> words;
      for (std::size_t i = 0; i < t.size();) {
        while (i < t.size() && t[i] == U' ') ++i;
        std::size_t j = i;
        while (j < t.size() && t[j] != U' ') ++j;
        if (j > i) words.emplace_back(i, j);
        i = j;
      }
      if (!words.empty()) {
        const auto [s, e] = words[noise_rng.uniform_index(words.size())];
        SpanRecord rec;
        rec.doc_key = first_post[a];
        rec.post_id = first_post[a];
        rec.span.start = s;
        rec.span.end = e;
        rec.span.category = kAllCategories[noise_rng.uniform_index(kCategoryCount)];
        rec.span.score = noise_rng.uniform(0.2, 0.85);
        rec.span.surface = utf8_encode(std::u32string_view(t).substr(s, e - s));
        out.spans.push_back(std::move(rec));
      }
    }
    if (x.cluster) {
      out.clusters[*x.cluster].post_ids.push_back(first_post[a]);
    } else {
      out.background_post_ids.push_back(first_post[a]);
    }
  }

  for (std::size_t c = 0; c < kCityCount; ++c) {
    std::vector<GeoCandidate> cands;
    if (c == kAlexandria || c == kParis) cands.push_back(foreign_candidate(c));
    cands.push_back({std::string(kCities[c].display) + ", USA", kCities[c].lat, kCities[c].lon, "US"});
    out.geo[kCities[c].query] = std::move(cands);
  }
  return out;
}

ordered_json truth_json(const SynthCorpus& corpus) {
  const SynthOptions& o = corpus.options;
  ordered_json j;
  j["seed"] = o.seed;
  j["ads"] = o.ads;
  j["distinct_ads"] = corpus.distinct_ads;
  j["clusters_requested"] = o.clusters;
  j["repost_mean"] = o.repost_mean;
  j["template_reuse_rate"] = o.template_reuse_rate;
  ordered_json clusters = ordered_json::array();
  for (const auto& c : corpus.clusters) {
    ordered_json x;
    x["index"] = c.index;
    x["kind"] = std::string(cluster_kind_name(c.kind));
    x["post_ids"] = c.post_ids;
    x["phones"] = c.phones;
    x["emails"] = c.emails;
    ordered_json handles = ordered_json::object();
    for (const auto& [k, v] : c.handles) handles[k] = v;
    x["handles"] = handles;
    x["locations"] = c.locations;
    x["max_miles"] = c.max_miles;
    x["expect_distance"] = c.expect_distance;
    x["expect_identifiers"] = c.expect_identifiers;
    x["expect_positive"] = c.expect_positive();
    clusters.push_back(std::move(x));
  }
  j["clusters"] = clusters;
  j["background_post_ids"] = corpus.background_post_ids;
  return j;
}

void write_synth(const std::filesystem::path& dir, const SynthCorpus& corpus) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "raw.jsonl", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / "raw.jsonl").string());
    for (const auto& r : corpus.raw) {
      ordered_json j;
      j["post_id"] = r.post_id;
      j["description"] = r.description;
      j["title"] = r.title ? ordered_json(*r.title) : ordered_json();
      j["locations"] = r.location_strings;
      j["dates"] = r.posting_dates;
      j["phones"] = r.structured_phones;
      j["images"] = r.image_hashes;
      j["provenance"] = r.provenance;
      out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    }
  }
  write_span_file(dir / "spans.jsonl", corpus.spans);
  {
    std::ofstream out(dir / "geo_fixture.jsonl", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / "geo_fixture.jsonl").string());
    for (const auto& [query, cands] : corpus.geo) {
      ordered_json j;
      j["query"] = query;
      ordered_json arr = ordered_json::array();
      for (const auto& c : cands) {
        arr.push_back({{"name", c.name}, {"lat", c.lat}, {"lon", c.lon}, {"country", c.country}});
      }
      j["candidates"] = arr;
      out << j.dump() << '\n';
    }
  }
  write_json_file(dir / "truth.json", truth_json(corpus));
}

}  // namespace adgraph

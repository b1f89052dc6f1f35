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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace adgraph {

// Merged NER label set. Order is the row order used by every per-class table.
enum class EntityCategory : std::uint8_t {
  PhoneNumber,
  NameNickname,
  Location,
  Onlyfans,
  Snapchat,
  UsernameOther,
  Instagram,
  Twitter,
  Email,
};

inline constexpr std::size_t kCategoryCount = 9;

inline constexpr std::array<EntityCategory, kCategoryCount> kAllCategories = {
    EntityCategory::PhoneNumber, EntityCategory::NameNickname,
    EntityCategory::Location,    EntityCategory::Onlyfans,
    EntityCategory::Snapchat,    EntityCategory::UsernameOther,
    EntityCategory::Instagram,   EntityCategory::Twitter,
    EntityCategory::Email,
};

constexpr std::size_t index_of(EntityCategory c) {
  return static_cast<std::size_t>(c);
}

// "PhoneNumber", "Email", ... as used in span files.
std::string_view category_name(EntityCategory c);
// "phone", "email", ... as used in config lists and connector keys.
std::string_view category_key(EntityCategory c);
// "[PHONE]", "[EMAIL]", ...
std::string_view mask_token(EntityCategory c);
// "Phone Number", "Name/Nickname", ... for report tables.
std::string_view category_display(EntityCategory c);

// Accepts either the span-file name or the short key.
std::optional<EntityCategory> parse_category(std::string_view s);

// Handle-like categories get a leading '@' stripped during canonicalization.
bool is_handle_category(EntityCategory c);

// A decoded entity mention: [start, end) in Unicode scalar values.
struct RawSpan {
  std::int64_t ad_id = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  EntityCategory category = EntityCategory::PhoneNumber;
  double score = 1.0;
  std::string surface;

  std::size_t length() const { return end - start; }
};

enum class EntitySource : std::uint8_t { Metadata, Span, Pattern };

std::string_view source_name(EntitySource s);

struct CanonicalEntity {
  EntityCategory category = EntityCategory::PhoneNumber;
  std::string value;
  EntitySource source = EntitySource::Metadata;
  std::optional<RawSpan> source_span;

  // Typed connector key, e.g. "phone:+12541234567".
  std::string key() const;
};

}  // namespace adgraph

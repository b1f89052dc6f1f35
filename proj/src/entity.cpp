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

#include "adgraph/entity.hpp"

namespace adgraph {
namespace {

struct CategoryInfo {
  std::string_view name;
  std::string_view key;
  std::string_view token;
  std::string_view display;
};

constexpr std::array<CategoryInfo, kCategoryCount> kInfo = {{
    {"PhoneNumber", "phone", "[PHONE]", "Phone Number"},
    {"NameNickname", "name", "[NAME]", "Name/Nickname"},
    {"Location", "location", "[LOCATION]", "Location"},
    {"Onlyfans", "onlyfans", "[ONLYFANS]", "Onlyfans"},
    {"Snapchat", "snapchat", "[SNAPCHAT]", "Snapchat"},
    {"UsernameOther", "username", "[USERNAME]", "Username (Other)"},
    {"Instagram", "instagram", "[INSTAGRAM]", "Instagram"},
    {"Twitter", "twitter", "[TWITTER]", "Twitter"},
    {"Email", "email", "[EMAIL]", "Email"},
}};

}  // namespace

std::string_view category_name(EntityCategory c) { return kInfo[index_of(c)].name; }
std::string_view category_key(EntityCategory c) { return kInfo[index_of(c)].key; }
std::string_view mask_token(EntityCategory c) { return kInfo[index_of(c)].token; }
std::string_view category_display(EntityCategory c) {
  return kInfo[index_of(c)].display;
}

std::optional<EntityCategory> parse_category(std::string_view s) {
  for (EntityCategory c : kAllCategories) {
    const auto& info = kInfo[index_of(c)];
    if (s == info.name || s == info.key) return c;
  }
  return std::nullopt;
}

bool is_handle_category(EntityCategory c) {
  switch (c) {
    case EntityCategory::Onlyfans:
    case EntityCategory::Snapchat:
    case EntityCategory::Twitter:
    case EntityCategory::Instagram:
    case EntityCategory::UsernameOther:
      return true;
    default:
      return false;
  }
}

std::string_view source_name(EntitySource s) {
  switch (s) {
    case EntitySource::Metadata: return "metadata";
    case EntitySource::Span: return "span";
    case EntitySource::Pattern: return "pattern";
  }
  return "unknown";
}

std::string CanonicalEntity::key() const {
  std::string k(category_key(category));
  k.push_back(':');
  k += value;
  return k;
}

}  // namespace adgraph

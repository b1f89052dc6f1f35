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

#include "adgraph/extract.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "adgraph/text.hpp"

namespace adgraph {
namespace {

struct DigitWord {
  std::string_view word;
  char digit;
};

constexpr std::array<DigitWord, 10> kDigitWords = {{
    {"zero", '0'}, {"one", '1'}, {"two", '2'}, {"three", '3'}, {"four", '4'},
    {"five", '5'}, {"six", '6'}, {"seven", '7'}, {"eight", '8'}, {"nine", '9'},
}};

const std::regex& email_regex() {
  static const std::regex re(R"([A-Za-z0-9._%+\-]+@[A-Za-z0-9.\-]+\.[A-Za-z]{2,})");
  return re;
}

Canonicalized reject(RejectReason r) {
  Canonicalized c;
  c.reason = r;
  return c;
}

Canonicalized accept(EntityCategory cat, std::string value) {
  Canonicalized c;
  c.entity = CanonicalEntity{cat, std::move(value), EntitySource::Span, std::nullopt};
  return c;
}

struct MaskRegion {
  std::size_t start;
  std::size_t end;
  EntityCategory category;
};

bool overlaps(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
  return a0 < b1 && b0 < a1;
}

}  // namespace

std::string_view reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "none";
    case RejectReason::TooFewDigits: return "too_few_digits";
    case RejectReason::TooManyDigits: return "too_many_digits";
    case RejectReason::NonUs: return "non_us";
    case RejectReason::EmptyAfterNormalization: return "empty_after_normalization";
    case RejectReason::InvalidEmail: return "invalid_email";
    case RejectReason::UnsupportedCategory: return "unsupported_category";
  }
  return "unknown";
}

Canonicalized canonicalize_phone(std::string_view surface, const PhoneOptions& options) {
  const std::string lowered = ascii_lower(trim(surface));
  std::string spelled;
  spelled.reserve(lowered.size());
  std::size_t i = 0;
  while (i < lowered.size()) {
    bool matched = false;
    for (const auto& w : kDigitWords) {
      if (lowered.compare(i, w.word.size(), w.word) == 0) {
        spelled.push_back(w.digit);
        i += w.word.size();
        matched = true;
        break;
      }
    }
    if (!matched && options.oh_as_zero && lowered.compare(i, 2, "oh") == 0) {
      spelled.push_back('0');
      i += 2;
      matched = true;
    }
    if (!matched) spelled.push_back(lowered[i++]);
  }

  std::string digits;
  for (char c : spelled) {
    if (c >= '0' && c <= '9') digits.push_back(c);
  }
  // An explicit international prefix with a country code other than 1.
  if (!spelled.empty() && spelled.front() == '+' && !digits.empty() && digits.front() != '1') {
    return reject(RejectReason::NonUs);
  }
  if (digits.size() < 10) return reject(RejectReason::TooFewDigits);
  if (digits.size() == 11) {
    if (digits.front() != '1') return reject(RejectReason::NonUs);
    digits.erase(digits.begin());
  } else if (digits.size() > 11) {
    return reject(RejectReason::TooManyDigits);
  }
  return accept(EntityCategory::PhoneNumber, "+1" + digits);
}

Canonicalized canonicalize_handle(std::string_view surface, EntityCategory category) {
  if (category == EntityCategory::PhoneNumber || category == EntityCategory::Email) {
    return reject(RejectReason::UnsupportedCategory);
  }
  std::string value = ascii_lower(collapse_whitespace(surface));
  if (is_handle_category(category) && !value.empty() && value.front() == '@') {
    value = trim(std::string_view(value).substr(1));
  }
  if (value.empty()) return reject(RejectReason::EmptyAfterNormalization);
  return accept(category, std::move(value));
}

Canonicalized canonicalize_email(std::string_view surface) {
  std::string value = ascii_lower(trim(surface));
  if (value.empty()) return reject(RejectReason::EmptyAfterNormalization);
  if (std::count(value.begin(), value.end(), '@') != 1 ||
      !std::regex_match(value, email_regex())) {
    return reject(RejectReason::InvalidEmail);
  }
  return accept(EntityCategory::Email, std::move(value));
}

Canonicalized canonicalize_span_surface(std::string_view surface, EntityCategory category,
                                        const PhoneOptions& options) {
  switch (category) {
    case EntityCategory::PhoneNumber: return canonicalize_phone(surface, options);
    case EntityCategory::Email: return canonicalize_email(surface);
    default: return canonicalize_handle(surface, category);
  }
}

std::vector<EmailMatch> find_emails(std::string_view description) {
  std::vector<EmailMatch> out;
  if (description.find('@') == std::string_view::npos) return out;
  const std::string text(description);
  // Byte offset -> scalar offset. Matches are pure ASCII, so both ends sit
  // on lead bytes.
  std::vector<std::size_t> scalar_at(text.size() + 1, 0);
  std::size_t count = 0;
  for (std::size_t b = 0; b < text.size(); ++b) {
    scalar_at[b] = count;
    if ((static_cast<unsigned char>(text[b]) & 0xC0) != 0x80) ++count;
  }
  scalar_at[text.size()] = count;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), email_regex());
       it != std::sregex_iterator(); ++it) {
    const auto b0 = static_cast<std::size_t>(it->position());
    const auto b1 = b0 + static_cast<std::size_t>(it->length());
    out.push_back({scalar_at[b0], scalar_at[b1], ascii_lower(it->str())});
  }
  return out;
}

std::vector<CanonicalEntity> extract_emails(std::string_view description) {
  std::vector<CanonicalEntity> out;
  std::set<std::string> seen;
  for (auto& m : find_emails(description)) {
    if (seen.insert(m.value).second) {
      out.push_back({EntityCategory::Email, std::move(m.value), EntitySource::Pattern,
                     std::nullopt});
    }
  }
  return out;
}

std::u32string escape_mask_tokens(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    bool escaped = false;
    if (text[i] == U'[') {
      for (EntityCategory c : kAllCategories) {
        const std::u32string token = utf8_decode(mask_token(c));
        if (text.compare(i, token.size(), token) == 0) {
          out.push_back(U'[');
          out += token;
          out.push_back(U']');
          i += token.size();
          escaped = true;
          break;
        }
      }
    }
    if (!escaped) out.push_back(text[i++]);
  }
  return out;
}

std::size_t count_mask_tokens(std::string_view masked, EntityCategory category) {
  const std::string_view token = mask_token(category);
  std::size_t n = 0;
  for (std::size_t pos = masked.find(token); pos != std::string_view::npos;
       pos = masked.find(token, pos + 1)) {
    const bool before = pos > 0 && masked[pos - 1] == '[';
    const std::size_t after_pos = pos + token.size();
    const bool after = after_pos < masked.size() && masked[after_pos] == ']';
    if (!(before && after)) ++n;
  }
  return n;
}

AdRecord apply_spans(AdRecord ad, std::span<const RawSpan> spans, const ApplyOptions& options,
                     ApplyStats* stats) {
  ApplyStats st;
  const std::u32string text = utf8_decode(ad.description);
  st.spans_in = spans.size();

  std::vector<RawSpan> kept;
  for (const RawSpan& s : spans) {
    if (s.start >= s.end || s.end > text.size()) {
      throw SpanError("ad " + std::to_string(ad.ad_id) + ": span [" + std::to_string(s.start) +
                      "," + std::to_string(s.end) + ") outside description of length " +
                      std::to_string(text.size()));
    }
    RawSpan span = s;
    span.ad_id = ad.ad_id;
    std::string covered = utf8_encode(std::u32string_view(text).substr(s.start, s.length()));
    if (!span.surface.empty() && span.surface != covered) {
      throw SpanError("ad " + std::to_string(ad.ad_id) + ": span surface '" + span.surface +
                      "' does not match description text '" + covered + "'");
    }
    span.surface = std::move(covered);
    if (!(span.score > options.min_score)) {
      ++st.below_score;
      continue;
    }
    kept.push_back(std::move(span));
  }

  std::sort(kept.begin(), kept.end(), [](const RawSpan& a, const RawSpan& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end < b.end;
    return a.category < b.category;
  });
  std::vector<RawSpan> chosen;
  for (auto& s : kept) {
    const bool clash = std::any_of(chosen.begin(), chosen.end(), [&](const RawSpan& c) {
      return overlaps(s.start, s.end, c.start, c.end);
    });
    if (clash) {
      ++st.overlapped;
      continue;
    }
    chosen.push_back(std::move(s));
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const RawSpan& a, const RawSpan& b) { return a.start < b.start; });

  std::vector<MaskRegion> regions;
  for (const RawSpan& s : chosen) {
    Canonicalized c = canonicalize_span_surface(s.surface, s.category, options.phone);
    if (c) {
      c.entity->source = EntitySource::Span;
      c.entity->source_span = s;
      ++st.accepted;
      ++st.entities_by_category[index_of(s.category)];
      ad.entities.push_back(std::move(*c.entity));
      regions.push_back({s.start, s.end, s.category});
    } else {
      ++st.rejected;
      st.rejections.emplace_back(s.surface, c.reason);
      if (options.mask_rejected) regions.push_back({s.start, s.end, s.category});
    }
  }

  std::set<std::string> seen_emails;
  for (const auto& e : ad.entities) {
    if (e.category == EntityCategory::Email) seen_emails.insert(e.value);
  }
  const std::vector<MaskRegion> span_regions = regions;
  for (auto& m : find_emails(ad.description)) {
    ++st.email_pattern_matches;
    const bool clash = std::any_of(span_regions.begin(), span_regions.end(), [&](const MaskRegion& r) {
      return overlaps(m.start, m.end, r.start, r.end);
    });
    if (!clash) {
      regions.push_back({m.start, m.end, EntityCategory::Email});
      ++st.email_pattern_masked;
    }
    if (seen_emails.insert(m.value).second) {
      ++st.entities_by_category[index_of(EntityCategory::Email)];
      ad.entities.push_back({EntityCategory::Email, std::move(m.value), EntitySource::Pattern,
                             std::nullopt});
    }
  }
  std::sort(regions.begin(), regions.end(),
            [](const MaskRegion& a, const MaskRegion& b) { return a.start < b.start; });

  std::u32string masked;
  masked.reserve(text.size());
  std::size_t cursor = 0;
  const std::u32string_view view(text);
  for (const MaskRegion& r : regions) {
    masked += escape_mask_tokens(view.substr(cursor, r.start - cursor));
    const std::u32string token = utf8_decode(mask_token(r.category));
    // A token wedged between a literal '[' and ']' would read as escaped.
    if (!masked.empty() && masked.back() == U'[' && r.end < text.size() && text[r.end] == U']') {
      masked.push_back(U' ');
    }
    masked += token;
    ++st.masked_by_category[index_of(r.category)];
    cursor = r.end;
  }
  masked += escape_mask_tokens(view.substr(cursor));
  ad.masked_description = utf8_encode(masked);

  if (stats) *stats += st;
  return ad;
}

void add_metadata_entities(AdRecord& ad, const PhoneOptions& options, ApplyStats* stats) {
  ApplyStats st;
  for (const auto& p : ad.structured_phones) {
    Canonicalized c = canonicalize_phone(p, options);
    if (c) {
      c.entity->source = EntitySource::Metadata;
      ++st.entities_by_category[index_of(EntityCategory::PhoneNumber)];
      ad.entities.push_back(std::move(*c.entity));
    } else {
      ++st.rejected;
      st.rejections.emplace_back(p, c.reason);
    }
  }
  for (const auto& l : ad.location_strings) {
    Canonicalized c = canonicalize_handle(l, EntityCategory::Location);
    if (c) {
      c.entity->source = EntitySource::Metadata;
      ++st.entities_by_category[index_of(EntityCategory::Location)];
      ad.entities.push_back(std::move(*c.entity));
    } else {
      ++st.rejected;
      st.rejections.emplace_back(l, c.reason);
    }
  }
  if (stats) *stats += st;
}

ApplyStats& ApplyStats::operator+=(const ApplyStats& o) {
  spans_in += o.spans_in;
  below_score += o.below_score;
  overlapped += o.overlapped;
  rejected += o.rejected;
  accepted += o.accepted;
  email_pattern_matches += o.email_pattern_matches;
  email_pattern_masked += o.email_pattern_masked;
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    masked_by_category[i] += o.masked_by_category[i];
    entities_by_category[i] += o.entities_by_category[i];
  }
  rejections.insert(rejections.end(), o.rejections.begin(), o.rejections.end());
  return *this;
}

ordered_json to_json(const ApplyStats& s) {
  ordered_json j;
  j["spans_in"] = s.spans_in;
  j["below_score"] = s.below_score;
  j["overlapped"] = s.overlapped;
  j["accepted"] = s.accepted;
  j["rejected"] = s.rejected;
  j["email_pattern_matches"] = s.email_pattern_matches;
  j["email_pattern_masked"] = s.email_pattern_masked;
  ordered_json masked;
  ordered_json entities;
  for (EntityCategory c : kAllCategories) {
    masked[std::string(category_key(c))] = s.masked_by_category[index_of(c)];
    entities[std::string(category_key(c))] = s.entities_by_category[index_of(c)];
  }
  j["masked_by_category"] = std::move(masked);
  j["entities_by_category"] = std::move(entities);
  ordered_json reasons;
  for (const auto& [surface, reason] : s.rejections) {
    const std::string key(reject_reason_name(reason));
    reasons[key] = reasons.value(key, 0) + 1;
  }
  j["rejections_by_reason"] = std::move(reasons);
  return j;
}

}  // namespace adgraph

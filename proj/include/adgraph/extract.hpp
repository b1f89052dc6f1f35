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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adgraph/corpus.hpp"
#include "adgraph/entity.hpp"

namespace adgraph {

enum class RejectReason {
  None,
  TooFewDigits,
  TooManyDigits,
  NonUs,
  EmptyAfterNormalization,
  InvalidEmail,
  UnsupportedCategory,
};

std::string_view reject_reason_name(RejectReason r);

// Either a canonical entity or the reason it was refused.
struct Canonicalized {
  std::optional<CanonicalEntity> entity;
  RejectReason reason = RejectReason::None;

  explicit operator bool() const { return entity.has_value(); }
};

struct PhoneOptions {
  // Treat the spelled word "oh" as the digit 0.
  bool oh_as_zero = false;
};

// Spelled digits become digits, everything else that is not a digit is
// dropped, and the result must be a 10-digit US number (an 11-digit number
// with a leading 1 is accepted). Output is "+1" followed by 10 digits.
Canonicalized canonicalize_phone(std::string_view surface, const PhoneOptions& options = {});

// Trim, collapse inner whitespace, lowercase; handle categories also lose
// one leading '@'.
Canonicalized canonicalize_handle(std::string_view surface, EntityCategory category);

Canonicalized canonicalize_email(std::string_view surface);

Canonicalized canonicalize_span_surface(std::string_view surface, EntityCategory category,
                                        const PhoneOptions& options = {});

struct EmailMatch {
  std::size_t start = 0;  // scalar-value offsets
  std::size_t end = 0;
  std::string value;      // lowercased
};

// Every pattern match in text order, duplicates included.
std::vector<EmailMatch> find_emails(std::string_view description);

// Distinct lowercased addresses in first-occurrence order.
std::vector<CanonicalEntity> extract_emails(std::string_view description);

// Literal "[PHONE]"-style text is rewritten to "[[PHONE]]" so that mask
// tokens in masked text can only come from masking.
std::u32string escape_mask_tokens(std::u32string_view text);

// Occurrences of the category's mask token that are not escaped, i.e. not
// both preceded by '[' and followed by ']'.
std::size_t count_mask_tokens(std::string_view masked, EntityCategory category);

class SpanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ApplyOptions {
  // Spans must score strictly above this to be used.
  double min_score = 0.9;
  bool mask_rejected = true;
  PhoneOptions phone;
};

struct ApplyStats {
  std::size_t spans_in = 0;
  std::size_t below_score = 0;
  std::size_t overlapped = 0;
  std::size_t rejected = 0;
  std::size_t accepted = 0;
  std::size_t email_pattern_matches = 0;
  std::size_t email_pattern_masked = 0;
  std::array<std::size_t, kCategoryCount> masked_by_category{};
  std::array<std::size_t, kCategoryCount> entities_by_category{};
  std::vector<std::pair<std::string, RejectReason>> rejections;

  ApplyStats& operator+=(const ApplyStats& other);
};

// Keeps spans scoring above min_score, resolves overlaps (higher score wins,
// then earlier start), canonicalizes survivors into ad.entities and writes
// ad.masked_description. Email pattern matches are always extracted and are
// masked wherever they do not collide with a span mask.
// Throws SpanError when a span falls outside the description.
AdRecord apply_spans(AdRecord ad, std::span<const RawSpan> spans,
                     const ApplyOptions& options, ApplyStats* stats = nullptr);

// Canonical entities from structured metadata: phone fields and location
// strings. Rejected values are counted, not stored.
void add_metadata_entities(AdRecord& ad, const PhoneOptions& options, ApplyStats* stats = nullptr);

ordered_json to_json(const ApplyStats& stats);

}  // namespace adgraph

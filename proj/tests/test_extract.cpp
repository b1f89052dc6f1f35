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

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "adgraph/extract.hpp"
#include "adgraph/text.hpp"

using namespace adgraph;

namespace {

struct PhoneCase {
  std::string surface;
  std::string expected;
  bool oh = false;
};

std::vector<PhoneCase> phone_cases() {
  std::ifstream in(ADGRAPH_TEST_DATA "/phone_cases.tsv");
  REQUIRE(in);
  std::vector<PhoneCase> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    PhoneCase c;
    std::string opts;
    std::getline(ss, c.surface, '\t');
    std::getline(ss, c.expected, '\t');
    std::getline(ss, opts, '\t');
    c.oh = opts == "oh";
    out.push_back(c);
  }
  return out;
}

RawSpan span(std::size_t s, std::size_t e, EntityCategory c, double score) {
  RawSpan r;
  r.start = s;
  r.end = e;
  r.category = c;
  r.score = score;
  return r;
}

AdRecord ad(std::string text) {
  AdRecord a;
  a.description = std::move(text);
  return a;
}

}  // namespace

TEST_CASE("phone fixture: 60 cases") {
  const auto cases = phone_cases();
  REQUIRE(cases.size() == 60);
  for (const auto& c : cases) {
    const auto r = canonicalize_phone(c.surface, PhoneOptions{c.oh});
    if (c.expected.rfind("reject:", 0) == 0) {
      CHECK_MESSAGE(!r, c.surface);
      CHECK_MESSAGE(reject_reason_name(r.reason) == c.expected.substr(7), c.surface);
    } else {
      REQUIRE_MESSAGE(r, c.surface);
      CHECK_MESSAGE(r.entity->value == c.expected, c.surface);
      CHECK(r.entity->category == EntityCategory::PhoneNumber);
      // idempotent on its own output, with and without the +1
      CHECK(canonicalize_phone(r.entity->value).entity->value == r.entity->value);
      CHECK(canonicalize_phone(r.entity->value.substr(2)).entity->value == r.entity->value);
    }
  }
}

TEST_CASE("phone outputs are always +1 and ten digits") {
  std::mt19937_64 g(11);
  const char* words[] = {"zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine"};
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int n = static_cast<int>(g() % 14);
    for (int k = 0; k < n; ++k) {
      switch (g() % 4) {
        case 0: s += words[g() % 10]; break;
        case 1: s += static_cast<char>('0' + g() % 10); break;
        case 2: s += "-"; break;
        default: s += static_cast<char>('0' + g() % 10); s += ' ';
      }
    }
    const auto r = canonicalize_phone(s);
    if (!r) continue;
    const auto& v = r.entity->value;
    REQUIRE(v.size() == 12);
    CHECK(v.substr(0, 2) == "+1");
    for (char c : v.substr(2)) CHECK((c >= '0' && c <= '9'));
    CHECK(canonicalize_phone(v).entity->value == v);
  }
}

TEST_CASE("handles normalize whitespace, case and a leading at sign") {
  CHECK(canonicalize_handle("@Candy_TX ", EntityCategory::Snapchat).entity->value == "candy_tx");
  CHECK(canonicalize_handle("New  York", EntityCategory::Location).entity->value == "new york");
  const auto empty = canonicalize_handle("  ", EntityCategory::Twitter);
  CHECK_FALSE(empty);
  CHECK(empty.reason == RejectReason::EmptyAfterNormalization);
  CHECK_FALSE(canonicalize_handle("@", EntityCategory::Instagram));
  // names keep an at sign; only handle categories strip it
  CHECK(canonicalize_handle("@Ana", EntityCategory::NameNickname).entity->value == "@ana");
}

TEST_CASE("email pattern") {
  const auto one = extract_emails("mail Me at Ana.B@Example.COM!!");
  REQUIRE(one.size() == 1);
  CHECK(one[0].value == "ana.b@example.com");
  CHECK(extract_emails("no contact here").empty());
  CHECK(extract_emails("a@b.co and a@b.co").size() == 1);
  CHECK(canonicalize_email(" X@Y.ORG ").entity->value == "x@y.org");
  CHECK_FALSE(canonicalize_email("nope"));
  const auto m = find_emails("é x@y.io");
  REQUIRE(m.size() == 1);
  CHECK(m[0].start == 2);
  CHECK(m[0].end == 8);
}

TEST_CASE("apply_spans masks, canonicalizes and filters by score") {
  ApplyOptions opts;
  ApplyStats st;
  const auto out = apply_spans(ad("call 2five4onetwothree4567 now"),
                               std::vector<RawSpan>{span(5, 26, EntityCategory::PhoneNumber, 0.95)}, opts, &st);
  REQUIRE(out.masked_description);
  CHECK(*out.masked_description == "call [PHONE] now");
  REQUIRE(out.entities.size() == 1);
  CHECK(out.entities[0].value == "+12541234567");
  CHECK(out.entities[0].source == EntitySource::Span);

  const auto low = apply_spans(ad("call 2541234567 now"),
                               std::vector<RawSpan>{span(5, 15, EntityCategory::PhoneNumber, 0.85)}, opts, nullptr);
  CHECK(low.entities.empty());
  CHECK(low.masked_description.value_or(low.description) == "call 2541234567 now");

  // exactly at the threshold is dropped too
  const auto edge = apply_spans(ad("call 2541234567 now"),
                                std::vector<RawSpan>{span(5, 15, EntityCategory::PhoneNumber, 0.9)}, opts, nullptr);
  CHECK(edge.entities.empty());
}

TEST_CASE("overlapping spans keep the higher score") {
  const auto out = apply_spans(ad("Ana Maria here"),
                               std::vector<RawSpan>{span(0, 9, EntityCategory::NameNickname, 0.92),
                                                    span(0, 3, EntityCategory::Location, 0.95)},
                               ApplyOptions{}, nullptr);
  REQUIRE(out.entities.size() == 1);
  CHECK(out.entities[0].category == EntityCategory::Location);
  CHECK(*out.masked_description == "[LOCATION] Maria here");

  // equal scores: the earlier start wins
  const auto tie = apply_spans(ad("abcdef"),
                               std::vector<RawSpan>{span(2, 5, EntityCategory::NameNickname, 0.95),
                                                    span(0, 3, EntityCategory::Snapchat, 0.95)},
                               ApplyOptions{}, nullptr);
  REQUIRE(tie.entities.size() == 1);
  CHECK(tie.entities[0].category == EntityCategory::Snapchat);
}

TEST_CASE("rejected spans are still masked unless configured otherwise") {
  const std::vector<RawSpan> s = {span(4, 9, EntityCategory::PhoneNumber, 0.99)};
  ApplyStats st;
  const auto masked = apply_spans(ad("tel 12345 ok"), s, ApplyOptions{}, &st);
  CHECK(masked.entities.empty());
  CHECK(*masked.masked_description == "tel [PHONE] ok");
  CHECK(st.rejected == 1);
  ApplyOptions keep;
  keep.mask_rejected = false;
  const auto plain = apply_spans(ad("tel 12345 ok"), s, keep, nullptr);
  CHECK(plain.masked_description.value_or(plain.description) == "tel 12345 ok");
}

TEST_CASE("existing mask tokens in text are escaped") {
  const auto out = apply_spans(ad("[PHONE] call 5551234567 [x]"),
                               std::vector<RawSpan>{span(13, 23, EntityCategory::PhoneNumber, 0.99)},
                               ApplyOptions{}, nullptr);
  CHECK(*out.masked_description == "[[PHONE]] call [PHONE] [x]");
  CHECK(count_mask_tokens(*out.masked_description, EntityCategory::PhoneNumber) == 1);
}

TEST_CASE("email pattern masks outside spans") {
  ApplyStats st;
  const auto out = apply_spans(ad("Ana at ana@x.com"),
                               std::vector<RawSpan>{span(0, 3, EntityCategory::NameNickname, 0.99)},
                               ApplyOptions{}, &st);
  CHECK(*out.masked_description == "[NAME] at [EMAIL]");
  CHECK(out.entities.size() == 2);
}

TEST_CASE("out-of-bounds span is an error") {
  CHECK_THROWS_AS(apply_spans(ad("short"), std::vector<RawSpan>{span(2, 40, EntityCategory::NameNickname, 0.99)},
                              ApplyOptions{}, nullptr),
                  SpanError);
}

TEST_CASE("masking leaves text outside spans untouched and counts match") {
  std::mt19937_64 g(21);
  const std::u32string alphabet = U"ab c😀dé[]";
  for (int it = 0; it < 300; ++it) {
    std::u32string text;
    const std::size_t n = 5 + g() % 60;
    for (std::size_t i = 0; i < n; ++i) text.push_back(alphabet[g() % alphabet.size()]);
    std::vector<RawSpan> spans;
    std::size_t pos = 0;
    while (pos + 2 < n) {
      const std::size_t s = pos + g() % 4;
      const std::size_t e = s + 1 + g() % 5;
      if (e > n) break;
      spans.push_back(span(s, e, g() % 2 ? EntityCategory::NameNickname : EntityCategory::Location,
                           0.91 + 0.08 * static_cast<double>(g() % 100) / 100.0));
      pos = e + g() % 3;
    }
    const auto out = apply_spans(ad(utf8_encode(text)), spans, ApplyOptions{}, nullptr);
    const std::string masked = out.masked_description.value_or(out.description);
    // Rebuild the expected masked text from the non-overlapping span list.
    std::u32string esc;
    std::size_t last = 0;
    for (const auto& s : spans) {
      esc += escape_mask_tokens(text.substr(last, s.start - last));
      // "[" TOKEN "]" would read as an escaped literal
      if (!esc.empty() && esc.back() == U'[' && s.end < text.size() && text[s.end] == U']') esc += U' ';
      esc += utf8_decode(mask_token(s.category));
      last = s.end;
    }
    esc += escape_mask_tokens(text.substr(last));
    CHECK(masked == utf8_encode(esc));
    std::size_t names = 0;
    for (const auto& s : spans) names += s.category == EntityCategory::NameNickname;
    CHECK(count_mask_tokens(masked, EntityCategory::NameNickname) == names);
  }
}

TEST_CASE("metadata phones become entities") {
  AdRecord a = ad("no phone in text");
  a.structured_phones = {"(254) 123-4567", "bad"};
  ApplyStats st;
  add_metadata_entities(a, PhoneOptions{}, &st);
  REQUIRE(a.entities.size() == 1);
  CHECK(a.entities[0].value == "+12541234567");
  CHECK(a.entities[0].source == EntitySource::Metadata);
}

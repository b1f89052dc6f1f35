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

#include <string>
#include <string_view>

namespace adgraph {

// Decodes UTF-8 into Unicode scalar values. Malformed sequences decode to
// U+FFFD, one replacement per offending byte.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view s);

// Number of scalar values in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

// ASCII-only case folding; non-ASCII bytes pass through untouched.
std::string ascii_lower(std::string_view s);

std::string trim(std::string_view s);

// Trims and collapses every run of ASCII whitespace to a single space.
std::string collapse_whitespace(std::string_view s);

bool is_lower_hex(std::string_view s);

}  // namespace adgraph

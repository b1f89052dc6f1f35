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

#include <span>
#include <string>
#include <string_view>

#include "adgraph/model/attribution.hpp"

namespace adgraph::model {

// Summary fields plus a token heat table.
std::string record_text(const AttributionRecord& record);
std::string record_html(const AttributionRecord& record);

// Top-k and bottom-k of a ranked list as a bar table.
std::string ngram_table_text(std::span<const NgramScore> ranked, std::size_t k,
                             std::string_view title);
std::string ngram_table_html(std::span<const NgramScore> ranked, std::size_t k,
                             std::string_view title);

std::string mask_table_text(std::span<const NgramScore> masks);
std::string mask_table_html(std::span<const NgramScore> masks);

std::string html_document(std::string_view title, std::string_view body);
std::string html_escape(std::string_view s);

}  // namespace adgraph::model

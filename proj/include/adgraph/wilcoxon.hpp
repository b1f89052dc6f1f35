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

#include <cstddef>
#include <span>

namespace adgraph {

struct WilcoxonResult {
  double statistic = 0.0;  // min(W+, W-)
  double w_plus = 0.0;
  double w_minus = 0.0;
  std::size_t n = 0;  // nonzero differences
  double p_value = 1.0;  // two-sided
  bool exact = false;
  bool all_zero = false;
};

inline constexpr std::size_t kWilcoxonExactMax = 20;

// Paired signed-rank test. Zero differences are dropped and tied |d| share
// their average rank.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

}  // namespace adgraph

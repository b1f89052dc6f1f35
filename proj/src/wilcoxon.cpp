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

#include "adgraph/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace adgraph {

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("wilcoxon: samples differ in length");
  if (x.empty()) throw std::invalid_argument("wilcoxon: empty samples");
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] - y[i] != 0.0) d.push_back(x[i] - y[i]);
  }
  WilcoxonResult r;
  r.n = d.size();
  if (d.empty()) {
    r.all_zero = true;
    r.exact = true;
    return r;
  }
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });

  // Doubled ranks stay integral under averaging.
  std::vector<long> rank2(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const long avg2 = static_cast<long>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = avg2;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  long plus2 = 0, total2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total2 += rank2[i];
    if (d[i] > 0) plus2 += rank2[i];
  }
  const long minus2 = total2 - plus2;
  const long w2 = std::min(plus2, minus2);
  r.w_plus = plus2 / 2.0;
  r.w_minus = minus2 / 2.0;
  r.statistic = w2 / 2.0;

  if (n <= kWilcoxonExactMax) {
    // Number of sign assignments reaching each doubled W+.
    std::vector<double> ways(static_cast<std::size_t>(total2) + 1, 0.0);
    ways[0] = 1.0;
    long reach = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (long s = reach; s >= 0; --s) {
        if (ways[s] != 0.0) ways[s + rank2[i]] += ways[s];
      }
      reach += rank2[i];
    }
    double tail = 0.0;
    for (long s = 0; s <= w2; ++s) tail += ways[s];
    r.p_value = std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(n)));
    r.exact = true;
    return r;
  }

  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  if (var <= 0.0) {
    r.p_value = 1.0;
    return r;
  }
  const double z = std::max(0.0, std::abs(r.statistic - mean) - 0.5) / std::sqrt(var);
  r.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return r;
}

}  // namespace adgraph

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

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace adgraph {

std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// Named, seedable, splittable generator. Streams derived with split() are
// independent of how many values the parent has drawn, so a stage can hand
// sub-streams to workers without perturbing its own sequence.
//
// The distributions are implemented here rather than through <random>'s
// distribution templates, whose output is not specified across standard
// library implementations; artifacts must be byte-identical everywhere.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view stream);

  Rng split(std::string_view child) const;

  std::uint64_t next() { return engine_(); }
  // Unbiased integer in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);
  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal();
  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

  std::uint64_t stream_key() const { return key_; }

 private:
  explicit Rng(std::uint64_t key);

  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace adgraph

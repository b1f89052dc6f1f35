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

#include <filesystem>
#include <stdexcept>

#include "adgraph/model/classifier.hpp"
#include "adgraph/model/vocab.hpp"

namespace adgraph::model {

// Little-endian file layout:
//   "ADGMODEL"                       8 bytes
//   u32 version (1)
//   u8 pair, u8 pooling, u16 reserved
//   u64 vocab, u64 dim, u64 hidden, u64 max_tokens
//   f64 blocks, row-major: embedding (vocab x dim), w1 (features x hidden),
//       b1 (hidden), w2 (head_inputs x 2), b2 (2)
//   vocab table: per id, u32 byte length + UTF-8 bytes
struct Checkpoint {
  TinyClassifier model;
  Vocab vocab;
  std::size_t max_tokens = 0;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace adgraph::model

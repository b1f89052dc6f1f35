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

#include "adgraph/model/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace adgraph::model {
namespace {

constexpr char kMagic[8] = {'A', 'D', 'G', 'M', 'O', 'D', 'E', 'L'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw CheckpointError("checkpoint truncated");
  return v;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  if (c.vocab.size() != c.model.shape.vocab) {
    throw CheckpointError("vocabulary size does not match the embedding table");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint8_t>(out, c.model.shape.pair ? 1 : 0);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(c.model.shape.pooling));
  put<std::uint16_t>(out, 0);
  put<std::uint64_t>(out, c.model.shape.vocab);
  put<std::uint64_t>(out, c.model.shape.dim);
  put<std::uint64_t>(out, c.model.shape.hidden);
  put<std::uint64_t>(out, c.max_tokens);
  for (const auto* block : c.model.blocks()) {
    out.write(reinterpret_cast<const char*>(block->data()),
              static_cast<std::streamsize>(block->size() * sizeof(double)));
  }
  for (const auto& t : c.vocab.tokens()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.size()));
    out.write(t.data(), static_cast<std::streamsize>(t.size()));
  }
  if (!out) throw CheckpointError("write failed: " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("not a model checkpoint: " + path.string());
  }
  if (get<std::uint32_t>(in) != kVersion) throw CheckpointError("unsupported checkpoint version");
  ModelShape shape;
  shape.pair = get<std::uint8_t>(in) != 0;
  const auto pooling = get<std::uint8_t>(in);
  if (pooling > 1) throw CheckpointError("unknown pooling mode");
  shape.pooling = static_cast<Pooling>(pooling);
  get<std::uint16_t>(in);
  shape.vocab = get<std::uint64_t>(in);
  shape.dim = get<std::uint64_t>(in);
  shape.hidden = get<std::uint64_t>(in);
  const auto max_tokens = get<std::uint64_t>(in);
  if (shape.vocab > (1u << 26) || shape.dim > 4096 || shape.hidden > 65536) {
    throw CheckpointError("implausible checkpoint dimensions");
  }
  Checkpoint c{TinyClassifier::zeros(shape), Vocab(), max_tokens};
  for (auto* block : c.model.blocks()) {
    if (!in.read(reinterpret_cast<char*>(block->data()),
                 static_cast<std::streamsize>(block->size() * sizeof(double)))) {
      throw CheckpointError("checkpoint truncated");
    }
  }
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < shape.vocab; ++i) {
    const auto len = get<std::uint32_t>(in);
    if (len > (1u << 20)) throw CheckpointError("implausible token length");
    std::string t(len, '\0');
    if (len && !in.read(t.data(), len)) throw CheckpointError("checkpoint truncated");
    tokens.push_back(std::move(t));
  }
  if (tokens.size() < 2 || tokens[0] != "<pad>" || tokens[1] != "<unk>") {
    throw CheckpointError("vocabulary table lacks the reserved tokens");
  }
  c.vocab = Vocab::from_tokens(std::move(tokens));
  return c;
}

}  // namespace adgraph::model

// Copyright 2026 The ragear Authors.
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

#ifndef RAGEAR_EMBED_H_
#define RAGEAR_EMBED_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ragear/json_util.h"

namespace ragear {

struct Embedding {
  std::vector<float> values;

  std::size_t dim() const { return values.size(); }
  bool operator==(const Embedding&) const = default;
};

double l2_norm(const Embedding& e);
// Scales to unit length. Throws InvalidArgument on a zero or non-finite
// vector.
void normalize(Embedding& e);

enum class EmbedderKind { kHttp, kFile, kTest };

std::string_view to_string(EmbedderKind kind);
EmbedderKind parse_embedder_kind(std::string_view name);

struct EmbedderConfig {
  EmbedderKind kind = EmbedderKind::kTest;
  std::size_t dim = 256;
  std::string endpoint_url;  // http only, e.g. "http://host:8080/embed"
  std::string api_key_env;   // name of the env var holding a bearer token
  std::string query_prefix = "query: ";
  std::string passage_prefix = "passage: ";
  int timeout_ms = 30000;
  std::size_t max_batch = 32;
  std::size_t max_in_flight = 4;
  int attempts = 3;
  int backoff_ms = 200;  // doubled after every failed attempt
  std::string file_path;  // file only

  void validate() const;
  static EmbedderConfig from_json(const Json& obj);
  static EmbedderConfig load(const std::filesystem::path& path);
  Json to_json() const;
};

// Stateless and safe to call concurrently.
class Embedder {
 public:
  virtual ~Embedder() = default;

  // One unit-norm vector per input, in input order. Throws InvalidArgument
  // on an empty batch or empty text.
  virtual std::vector<Embedding> embed_passages(
      std::span<const std::string> texts) const = 0;
  virtual Embedding embed_query(std::string_view text) const = 0;

  virtual std::size_t dim() const = 0;
  virtual EmbedderKind kind() const = 0;
};

// Deterministic hashing embedder: each token of tokenize(text) adds +-1 to
// bucket fnv1a64(token) % dim, the sign taken from the hash's top bit, and
// the sum is L2-normalized. A text without tokens hashes the empty token.
Embedding test_embedder_encode(std::string_view text, std::size_t dim);

class TestEmbedder final : public Embedder {
 public:
  explicit TestEmbedder(std::size_t dim);

  std::vector<Embedding> embed_passages(
      std::span<const std::string> texts) const override;
  Embedding embed_query(std::string_view text) const override;
  std::size_t dim() const override { return dim_; }
  EmbedderKind kind() const override { return EmbedderKind::kTest; }

 private:
  std::size_t dim_;
};

struct EmbeddingFile {
  std::size_t dim = 0;
  std::string kind;
  std::vector<std::pair<std::string, Embedding>> rows;
};

// Header line {"dim": N, "kind": "..."} then {"id": ..., "vector": [...]}.
EmbeddingFile read_embeddings(const std::filesystem::path& path);
std::string embeddings_header_line(std::size_t dim, std::string_view kind);
std::string embedding_line(std::string_view id, const Embedding& e);
void write_embeddings(std::ostream& out, const EmbeddingFile& file);

// Serves precomputed vectors; inputs are ids rather than texts.
class FileEmbedder final : public Embedder {
 public:
  explicit FileEmbedder(EmbeddingFile file);
  static FileEmbedder load(const std::filesystem::path& path);

  std::vector<Embedding> embed_passages(
      std::span<const std::string> ids) const override;
  Embedding embed_query(std::string_view id) const override;
  std::size_t dim() const override { return dim_; }
  EmbedderKind kind() const override { return EmbedderKind::kFile; }

  bool contains(std::string_view id) const;

 private:
  std::size_t dim_;
  std::unordered_map<std::string, Embedding> vectors_;
};

class HttpEmbedder;

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& cfg);

}  // namespace ragear

#endif  // RAGEAR_EMBED_H_

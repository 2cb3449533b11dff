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

#include "ragear/embed.h"

#include <cmath>
#include <ostream>
#include <set>

#include "ragear/errors.h"
#include "ragear/http_embedder.h"
#include "ragear/text.h"

namespace ragear {

double l2_norm(const Embedding& e) {
  double sum = 0.0;
  for (float v : e.values) sum += static_cast<double>(v) * v;
  return std::sqrt(sum);
}

void normalize(Embedding& e) {
  for (float v : e.values) {
    if (!std::isfinite(v)) throw InvalidArgument("embedding has non-finite component");
  }
  double norm = l2_norm(e);
  if (!(norm > 0.0)) throw InvalidArgument("cannot normalize a zero vector");
  for (float& v : e.values) v = static_cast<float>(v / norm);
}

std::string_view to_string(EmbedderKind kind) {
  switch (kind) {
    case EmbedderKind::kHttp:
      return "http";
    case EmbedderKind::kFile:
      return "file";
    case EmbedderKind::kTest:
      return "test";
  }
  return "unknown";
}

EmbedderKind parse_embedder_kind(std::string_view name) {
  if (name == "http") return EmbedderKind::kHttp;
  if (name == "file") return EmbedderKind::kFile;
  if (name == "test") return EmbedderKind::kTest;
  throw InvalidArgument("unknown embedder kind '" + std::string(name) + "'");
}

void EmbedderConfig::validate() const {
  if (dim < 1) throw InvalidArgument("embedder dim must be positive");
  if (kind == EmbedderKind::kTest && dim < 2) {
    throw InvalidArgument("test embedder needs dim >= 2");
  }
  if (kind == EmbedderKind::kHttp && endpoint_url.empty()) {
    throw InvalidArgument("http embedder requires endpoint_url");
  }
  if (kind == EmbedderKind::kFile && file_path.empty()) {
    throw InvalidArgument("file embedder requires file_path");
  }
  if (max_batch < 1 || max_in_flight < 1 || attempts < 1 || timeout_ms < 1) {
    throw InvalidArgument("embedder limits must be positive");
  }
}

EmbedderConfig EmbedderConfig::from_json(const Json& obj) {
  constexpr std::string_view ctx = "embedder config";
  EmbedderConfig cfg;
  try {
    cfg.kind = parse_embedder_kind(required<std::string>(obj, "kind", ctx));
    cfg.dim = static_cast<std::size_t>(required<int>(obj, "dim", ctx));
    cfg.endpoint_url = optional_or<std::string>(obj, "endpoint_url", "", ctx);
    cfg.api_key_env = optional_or<std::string>(obj, "api_key_env", "", ctx);
    cfg.query_prefix =
        optional_or<std::string>(obj, "query_prefix", cfg.query_prefix, ctx);
    cfg.passage_prefix =
        optional_or<std::string>(obj, "passage_prefix", cfg.passage_prefix, ctx);
    cfg.timeout_ms = optional_or<int>(obj, "timeout_ms", cfg.timeout_ms, ctx);
    cfg.max_batch = static_cast<std::size_t>(
        optional_or<int>(obj, "max_batch", static_cast<int>(cfg.max_batch), ctx));
    cfg.max_in_flight = static_cast<std::size_t>(optional_or<int>(
        obj, "max_in_flight", static_cast<int>(cfg.max_in_flight), ctx));
    cfg.attempts = optional_or<int>(obj, "attempts", cfg.attempts, ctx);
    cfg.backoff_ms = optional_or<int>(obj, "backoff_ms", cfg.backoff_ms, ctx);
    cfg.file_path = optional_or<std::string>(obj, "file_path", "", ctx);
  } catch (const ParseError& e) {
    throw InvalidArgument(e.what());
  }
  cfg.validate();
  return cfg;
}

EmbedderConfig EmbedderConfig::load(const std::filesystem::path& path) {
  return from_json(load_json_file(path));
}

Json EmbedderConfig::to_json() const {
  return Json{{"kind", std::string(ragear::to_string(kind))},
              {"dim", dim},
              {"endpoint_url", endpoint_url},
              {"api_key_env", api_key_env},
              {"query_prefix", query_prefix},
              {"passage_prefix", passage_prefix},
              {"timeout_ms", timeout_ms},
              {"max_batch", max_batch},
              {"max_in_flight", max_in_flight},
              {"attempts", attempts},
              {"backoff_ms", backoff_ms},
              {"file_path", file_path}};
}

Embedding test_embedder_encode(std::string_view text, std::size_t dim) {
  Embedding e;
  e.values.assign(dim, 0.0f);
  auto tokens = tokenize(text);
  if (tokens.empty()) tokens.emplace_back();
  for (const auto& tok : tokens) {
    std::uint64_t h = fnv1a64(tok);
    std::size_t bucket = static_cast<std::size_t>(h % dim);
    e.values[bucket] += ((h >> 63) & 1u) == 0 ? 1.0f : -1.0f;
  }
  // Colliding tokens of opposite sign may cancel out entirely.
  bool all_zero = true;
  for (float v : e.values) all_zero = all_zero && v == 0.0f;
  if (all_zero) e.values[fnv1a64(text) % dim] = 1.0f;
  normalize(e);
  return e;
}

TestEmbedder::TestEmbedder(std::size_t dim) : dim_(dim) {
  if (dim < 2) throw InvalidArgument("test embedder needs dim >= 2");
}

std::vector<Embedding> TestEmbedder::embed_passages(
    std::span<const std::string> texts) const {
  if (texts.empty()) throw InvalidArgument("embed_passages: empty batch");
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    if (t.empty()) throw InvalidArgument("embed_passages: empty text");
    out.push_back(test_embedder_encode(t, dim_));
  }
  return out;
}

Embedding TestEmbedder::embed_query(std::string_view text) const {
  if (text.empty()) throw InvalidArgument("embed_query: empty text");
  return test_embedder_encode(text, dim_);
}

std::string embeddings_header_line(std::size_t dim, std::string_view kind) {
  return Json{{"dim", dim}, {"kind", std::string(kind)}}.dump();
}

std::string embedding_line(std::string_view id, const Embedding& e) {
  std::string line = "{\"id\":" + Json(std::string(id)).dump() + ",\"vector\":[";
  for (std::size_t i = 0; i < e.values.size(); ++i) {
    if (i) line.push_back(',');
    line += format_float(e.values[i]);
  }
  line += "]}";
  return line;
}

void write_embeddings(std::ostream& out, const EmbeddingFile& file) {
  out << embeddings_header_line(file.dim, file.kind) << '\n';
  for (const auto& [id, e] : file.rows) out << embedding_line(id, e) << '\n';
}

EmbeddingFile read_embeddings(const std::filesystem::path& path) {
  EmbeddingFile file;
  bool header = false;
  std::set<std::string> seen;
  for_each_jsonl(path, [&](const Json& obj, std::size_t line) {
    const std::string ctx = path.string() + ":" + std::to_string(line);
    if (!header) {
      int dim = required<int>(obj, "dim", ctx);
      if (dim < 1) throw ParseError(ctx + ": dim must be positive");
      file.dim = static_cast<std::size_t>(dim);
      file.kind = optional_or<std::string>(obj, "kind", "", ctx);
      header = true;
      return;
    }
    std::string id = required<std::string>(obj, "id", ctx);
    Embedding e{required<std::vector<float>>(obj, "vector", ctx)};
    if (e.dim() != file.dim) {
      throw DimensionError(ctx + ": vector of dim " + std::to_string(e.dim()) +
                           ", header says " + std::to_string(file.dim));
    }
    if (!seen.insert(id).second) {
      throw IntegrityError(ctx + ": duplicate id '" + id + "'");
    }
    file.rows.emplace_back(std::move(id), std::move(e));
  });
  if (!header) throw ParseError(path.string() + ": missing header line");
  return file;
}

FileEmbedder::FileEmbedder(EmbeddingFile file) : dim_(file.dim) {
  vectors_.reserve(file.rows.size());
  for (auto& [id, e] : file.rows) {
    normalize(e);
    vectors_.emplace(std::move(id), std::move(e));
  }
}

FileEmbedder FileEmbedder::load(const std::filesystem::path& path) {
  return FileEmbedder(read_embeddings(path));
}

bool FileEmbedder::contains(std::string_view id) const {
  return vectors_.count(std::string(id)) != 0;
}

std::vector<Embedding> FileEmbedder::embed_passages(
    std::span<const std::string> ids) const {
  if (ids.empty()) throw InvalidArgument("embed_passages: empty batch");
  std::vector<Embedding> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(embed_query(id));
  return out;
}

Embedding FileEmbedder::embed_query(std::string_view id) const {
  if (id.empty()) throw InvalidArgument("embed_query: empty id");
  auto it = vectors_.find(std::string(id));
  if (it == vectors_.end()) {
    throw NotFoundError("no precomputed embedding for '" + std::string(id) + "'");
  }
  return it->second;
}

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case EmbedderKind::kTest:
      return std::make_unique<TestEmbedder>(cfg.dim);
    case EmbedderKind::kFile: {
      auto file = read_embeddings(cfg.file_path);
      if (file.dim != cfg.dim) {
        throw DimensionError("embedding file dim " + std::to_string(file.dim) +
                             " does not match configured dim " +
                             std::to_string(cfg.dim));
      }
      return std::make_unique<FileEmbedder>(std::move(file));
    }
    case EmbedderKind::kHttp:
      return std::make_unique<HttpEmbedder>(cfg);
  }
  throw InvalidArgument("unsupported embedder kind");
}

}  // namespace ragear

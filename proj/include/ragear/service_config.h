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

#ifndef RAGEAR_SERVICE_CONFIG_H_
#define RAGEAR_SERVICE_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>

#include "ragear/embed.h"
#include "ragear/json_util.h"
#include "ragear/pipeline.h"

namespace ragear {

// JSON service configuration. Relative paths resolve against the directory
// of the config file.
//
//   {
//     "catalogue": "catalogue.json",          required
//     "chunks": "chunks.jsonl",               optional
//     "embeddings": "emb.jsonl",              one of embeddings / index
//     "index": "chunks.rgeidx",
//     "metadata_embeddings": "meta.jsonl",    optional
//     "embedder": {...} or "embedder.json",   EmbedderConfig
//     "k": 200,
//     "t_q": "auto" or an integer,
//     "stopwords": "stopwords.txt",           optional, one word per line
//     "host": "127.0.0.1", "port": 8080,
//     "evidence_cap": 5,
//     "cors_origin": "*",
//     "static_dir": "webui/dist"              optional
//   }
struct ServiceConfig {
  std::filesystem::path catalogue;
  std::optional<std::filesystem::path> chunks;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> index;
  std::optional<std::filesystem::path> metadata_embeddings;
  std::optional<std::filesystem::path> stopwords;
  std::optional<std::filesystem::path> static_dir;
  EmbedderConfig embedder;
  int k = 200;
  std::optional<int> t_q;
  std::string host = "127.0.0.1";
  int port = 8080;
  int evidence_cap = 5;
  std::string cors_origin = "*";

  // Throws InvalidArgument for any malformed or missing field.
  static ServiceConfig from_json(const Json& j,
                                 const std::filesystem::path& base_dir = {});
  static ServiceConfig load(const std::filesystem::path& path);
  void validate() const;
  Json to_json() const;
};

// Loads store, vectors and embedder described by `cfg` into a checked
// snapshot.
Snapshot load_snapshot(const ServiceConfig& cfg);

}  // namespace ragear

#endif  // RAGEAR_SERVICE_CONFIG_H_

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

#include "ragear/service_config.h"

#include "ragear/errors.h"
#include "ragear/text.h"

namespace ragear {
namespace {

constexpr std::string_view kCtx = "service config";

std::optional<std::filesystem::path> optional_path(
    const Json& j, std::string_view key, const std::filesystem::path& base) {
  auto value = optional_or<std::string>(j, key, "", kCtx);
  if (value.empty()) return std::nullopt;
  std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const Json& j,
                                       const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InvalidArgument("service config must be an object");
  static const std::set<std::string> kKnown = {
      "catalogue", "chunks",     "embeddings", "index",      "metadata_embeddings",
      "embedder",  "k",          "t_q",        "stopwords",  "host",
      "port",      "evidence_cap", "cors_origin", "static_dir"};
  for (const auto& [key, _] : j.items()) {
    if (!kKnown.count(key)) {
      throw InvalidArgument("service config: unknown field '" + key + "'");
    }
  }
  ServiceConfig cfg;
  try {
    auto catalogue = optional_path(j, "catalogue", base_dir);
    if (!catalogue) throw InvalidArgument("service config: 'catalogue' is required");
    cfg.catalogue = *catalogue;
    cfg.chunks = optional_path(j, "chunks", base_dir);
    cfg.embeddings = optional_path(j, "embeddings", base_dir);
    cfg.index = optional_path(j, "index", base_dir);
    cfg.metadata_embeddings = optional_path(j, "metadata_embeddings", base_dir);
    cfg.stopwords = optional_path(j, "stopwords", base_dir);
    cfg.static_dir = optional_path(j, "static_dir", base_dir);
    cfg.k = optional_or<int>(j, "k", cfg.k, kCtx);
    cfg.host = optional_or<std::string>(j, "host", cfg.host, kCtx);
    cfg.port = optional_or<int>(j, "port", cfg.port, kCtx);
    cfg.evidence_cap = optional_or<int>(j, "evidence_cap", cfg.evidence_cap, kCtx);
    cfg.cors_origin = optional_or<std::string>(j, "cors_origin", cfg.cors_origin, kCtx);
  } catch (const ParseError& e) {
    throw InvalidArgument(e.what());
  }
  if (auto it = j.find("t_q"); it != j.end()) {
    if (it->is_string() && it->get<std::string>() == "auto") {
      cfg.t_q.reset();
    } else if (it->is_number_integer()) {
      cfg.t_q = it->get<int>();
    } else {
      throw InvalidArgument("service config: 't_q' must be \"auto\" or an integer");
    }
  }
  if (auto it = j.find("embedder"); it != j.end()) {
    if (it->is_string()) {
      std::filesystem::path p(it->get<std::string>());
      if (!p.is_absolute() && !base_dir.empty()) p = base_dir / p;
      cfg.embedder = EmbedderConfig::load(p);
    } else {
      cfg.embedder = EmbedderConfig::from_json(*it);
    }
  }
  cfg.validate();
  return cfg;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  Json j;
  try {
    j = load_json_file(path);
  } catch (const ParseError& e) {
    throw InvalidArgument(e.what());
  }
  return from_json(j, path.parent_path());
}

void ServiceConfig::validate() const {
  if (catalogue.empty()) throw InvalidArgument("service config: no catalogue");
  if (!embeddings && !index) {
    throw InvalidArgument("service config: one of 'embeddings' or 'index' is required");
  }
  if (k < 1) throw InvalidArgument("service config: k must be >= 1");
  if (t_q && *t_q < 1) throw InvalidArgument("service config: t_q must be >= 1");
  if (port < 0 || port > 65535) throw InvalidArgument("service config: bad port");
  if (evidence_cap < 1) throw InvalidArgument("service config: evidence_cap must be >= 1");
  embedder.validate();
}

Json ServiceConfig::to_json() const {
  Json j{{"catalogue", catalogue.string()},
         {"embedder", embedder.to_json()},
         {"k", k},
         {"t_q", t_q ? Json(*t_q) : Json("auto")},
         {"host", host},
         {"port", port},
         {"evidence_cap", evidence_cap},
         {"cors_origin", cors_origin}};
  auto put = [&](const char* key, const std::optional<std::filesystem::path>& p) {
    if (p) j[key] = p->string();
  };
  put("chunks", chunks);
  put("embeddings", embeddings);
  put("index", index);
  put("metadata_embeddings", metadata_embeddings);
  put("stopwords", stopwords);
  put("static_dir", static_dir);
  return j;
}

Snapshot load_snapshot(const ServiceConfig& cfg) {
  cfg.validate();
  Snapshot snap;
  auto store = std::make_shared<KgStore>(KgStore::load_catalogue(cfg.catalogue, cfg.chunks));
  snap.store = store;
  if (cfg.index) {
    snap.index = std::make_shared<DenseIndex>(DenseIndex::load(*cfg.index, *store));
  } else {
    EmbeddingFile file = read_embeddings(*cfg.embeddings);
    snap.index = std::make_shared<DenseIndex>(DenseIndex::build(file.rows, *store));
  }
  snap.embedder = make_embedder(cfg.embedder);
  if (cfg.metadata_embeddings) {
    snap.metadata = std::make_shared<CourseEmbeddings>(
        course_embeddings_from(read_embeddings(*cfg.metadata_embeddings)));
  } else {
    snap.metadata = std::make_shared<CourseEmbeddings>();
  }
  snap.config.k = cfg.k;
  snap.config.t_q = cfg.t_q;
  if (cfg.stopwords) snap.config.stopwords = read_word_list(*cfg.stopwords);
  snap.check();
  return snap;
}

}  // namespace ragear

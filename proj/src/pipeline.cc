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

#include "ragear/pipeline.h"

#include <chrono>

#include "ragear/errors.h"

namespace ragear {
namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

void PipelineConfig::validate() const {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (t_q && *t_q < 1) throw InvalidArgument("t_q must be >= 1");
}

void Snapshot::check() const {
  if (!store || !index || !embedder) {
    throw InvalidArgument("snapshot is missing store, index or embedder");
  }
  config.validate();
  if (index->size() > 0 && index->dim() != embedder->dim()) {
    throw DimensionError("index dim " + std::to_string(index->dim()) +
                         " differs from embedder dim " +
                         std::to_string(embedder->dim()));
  }
  if (metadata) {
    for (const auto& [id, e] : *metadata) {
      if (e.dim() != embedder->dim()) {
        throw DimensionError("metadata vector for '" + id + "' has dim " +
                             std::to_string(e.dim()));
      }
    }
  }
}

QueryResult run_query(const Snapshot& snap, const QueryRequest& request) {
  if (request.text.empty()) throw InvalidArgument("query text is empty");
  if (request.t_q && *request.t_q < 1) throw InvalidArgument("t_q must be >= 1");

  QueryResult out;
  out.context.query_id = request.query_id;
  out.context.text = request.text;
  out.context.k = snap.config.k;
  out.context.t_q = request.t_q   ? *request.t_q
                    : snap.config.t_q ? *snap.config.t_q
                                      : default_t_q(request.text, snap.config.stopwords);
  out.context.validate();

  out.candidates = filter_candidates(*snap.store, request.constraints);

  auto t0 = std::chrono::steady_clock::now();
  // A file embedder serves precomputed query vectors keyed by query id.
  Embedding query_emb;
  if (snap.embedder->kind() == EmbedderKind::kFile && !request.query_id.empty()) {
    query_emb = snap.embedder->embed_query(request.query_id);
  } else {
    query_emb = snap.embedder->embed_query(request.text);
  }
  out.embed_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  out.evidence = snap.index->retrieve(query_emb, out.candidates, out.context.k,
                                      request.query_id);
  out.retrieve_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  switch (request.method) {
    case Method::kRagear:
      out.ranking = rank_courses_ragear(out.evidence, *snap.store, out.context);
      break;
    case Method::kSumP:
      out.ranking = rank_courses_sump(out.evidence, *snap.store, out.context);
      break;
    case Method::kMetadata:
      if (!snap.metadata || snap.metadata->empty()) {
        throw InvalidArgument("metadata method needs course metadata embeddings");
      }
      out.ranking = rank_courses_metadata(*snap.store, query_emb, out.candidates,
                                          *snap.metadata, request.query_id);
      break;
  }
  out.breakdown.reserve(out.ranking.items.size());
  for (const auto& item : out.ranking.items) {
    out.breakdown.push_back(
        ragear_score(out.evidence, item.course_id, *snap.store, out.context));
  }
  out.score_ms = ms_since(t0);
  return out;
}

std::vector<QueryRequest> read_queries(const std::filesystem::path& path) {
  std::vector<QueryRequest> out;
  std::set<std::string> seen;
  for_each_jsonl(path, [&](const Json& obj, std::size_t line) {
    const std::string ctx = path.string() + ":" + std::to_string(line);
    QueryRequest q;
    q.query_id = required<std::string>(obj, "query_id", ctx);
    q.text = required<std::string>(obj, "text", ctx);
    if (obj.contains("t_q")) q.t_q = required<int>(obj, "t_q", ctx);
    if (auto it = obj.find("constraints"); it != obj.end() && !it->is_null()) {
      q.constraints = constraints_from_json(*it);
    }
    if (q.query_id.empty() || q.text.empty()) {
      throw ParseError(ctx + ": empty query_id or text");
    }
    if (!seen.insert(q.query_id).second) {
      throw IntegrityError(ctx + ": duplicate query_id '" + q.query_id + "'");
    }
    out.push_back(std::move(q));
  });
  return out;
}

}  // namespace ragear

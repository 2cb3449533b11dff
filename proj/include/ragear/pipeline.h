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

#ifndef RAGEAR_PIPELINE_H_
#define RAGEAR_PIPELINE_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ragear/embed.h"
#include "ragear/kg_store.h"
#include "ragear/retrieval.h"
#include "ragear/scoring.h"

namespace ragear {

struct PipelineConfig {
  int k = 200;
  std::optional<int> t_q;  // fixed value; nullopt derives it from the query
  std::set<std::string> stopwords = default_stopwords();

  void validate() const;
};

// Everything a query needs, loaded once and never mutated. The service swaps
// whole snapshots on reload.
struct Snapshot {
  std::shared_ptr<const KgStore> store;
  std::shared_ptr<const DenseIndex> index;
  std::shared_ptr<const Embedder> embedder;
  std::shared_ptr<const CourseEmbeddings> metadata;  // may be empty
  PipelineConfig config;

  // Throws DimensionError when index, embedder and metadata vectors disagree.
  void check() const;
};

struct QueryRequest {
  std::string query_id;
  std::string text;
  ConstraintSet constraints;
  Method method = Method::kRagear;
  std::optional<int> t_q;
};

struct QueryResult {
  QueryContext context;
  CourseSet candidates;
  EvidenceSet evidence;
  Ranking ranking;
  // Aligned with ranking.items: the GE/RE/LC/RS breakdown and the course's
  // retrieved chunks, whatever method produced the order.
  std::vector<CourseScore> breakdown;
  double embed_ms = 0.0;
  double retrieve_ms = 0.0;
  double score_ms = 0.0;
};

// filter_candidates -> embed_query -> retrieve -> rank by method. Shared by
// the CLI and the HTTP service so both produce identical rankings.
QueryResult run_query(const Snapshot& snapshot, const QueryRequest& request);

// JSONL, one {"query_id", "text", "t_q"?, "constraints"?} per line. Methods
// are left at the default. Throws IntegrityError on a repeated query_id.
std::vector<QueryRequest> read_queries(const std::filesystem::path& path);

}  // namespace ragear

#endif  // RAGEAR_PIPELINE_H_

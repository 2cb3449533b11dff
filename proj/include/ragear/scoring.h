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

#ifndef RAGEAR_SCORING_H_
#define RAGEAR_SCORING_H_

#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ragear/embed.h"
#include "ragear/kg_store.h"
#include "ragear/retrieval.h"

namespace ragear {

struct QueryContext {
  std::string query_id;
  std::string text;
  int t_q = 1;  // smoothing: number of concepts in the query
  int k = 200;  // retrieval depth; the RE normaliser always spans k ranks

  void validate() const;
};

// Course-level decomposition of the aggregated evidence.
struct CourseScore {
  std::string course_id;
  double global_evidence = 0.0;
  double ranked_evidence = 0.0;
  double lesson_coverage = 0.0;
  double rs = 0.0;  // global_evidence * ranked_evidence * lesson_coverage
  std::vector<RetrievedChunk> supporting_chunks;  // by rank
};

enum class Method { kMetadata, kSumP, kRagear };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

struct RankedCourse {
  std::string course_id;
  double score = 0.0;

  bool operator==(const RankedCourse&) const = default;
};

// Scores strictly positive and non-increasing, ties by course_id ascending.
struct Ranking {
  std::string query_id;
  std::string method;
  std::vector<RankedCourse> items;

  bool operator==(const Ranking&) const = default;
};

// Share of the retrieved similarity mass that belongs to `course_id`.
double global_evidence(const EvidenceSet& evidence, std::string_view course_id);

// Rank-discounted mass sum 1/(t_q + rank(c)) over the course's chunks,
// normalised by sum_{i=1..k} 1/(t_q + i).
double ranked_evidence(const EvidenceSet& evidence, std::string_view course_id,
                       const QueryContext& ctx);

// Mean over the course's lessons of 1/(t_q + best rank in the lesson), with
// lessons lacking evidence contributing zero. Throws NotFoundError for an
// unknown course.
double lesson_coverage(const EvidenceSet& evidence, std::string_view course_id,
                       const KgStore& store, const QueryContext& ctx);

CourseScore ragear_score(const EvidenceSet& evidence, std::string_view course_id,
                         const KgStore& store, const QueryContext& ctx);

// Full score breakdown for every course present in the evidence, ordered like
// rank_courses_ragear.
std::vector<CourseScore> score_courses(const EvidenceSet& evidence,
                                       const KgStore& store,
                                       const QueryContext& ctx);

Ranking rank_courses_ragear(const EvidenceSet& evidence, const KgStore& store,
                            const QueryContext& ctx);
// Normalised SumP: the GE component alone.
Ranking rank_courses_sump(const EvidenceSet& evidence, const KgStore& store,
                          const QueryContext& ctx);

using CourseEmbeddings = std::unordered_map<std::string, Embedding>;

// "title. description. instructor. discipline."
std::string metadata_text(const Course& course);

// Courses of `candidates` by max(0, cosine(query, course vector)); zero
// scores omitted. Throws NotFoundError when a candidate has no vector.
Ranking rank_courses_metadata(const KgStore& store, const Embedding& query_emb,
                              const CourseSet& candidates,
                              const CourseEmbeddings& course_embeddings,
                              std::string query_id = {});

CourseEmbeddings course_embeddings_from(const EmbeddingFile& file);

std::set<std::string> default_stopwords();

// Distinct lowercase non-stopword tokens, clamped to [1, 10].
int default_t_q(std::string_view query_text,
                const std::set<std::string>& stopwords = default_stopwords());

// Sorts by (score desc, course_id asc) and drops non-positive scores.
void sort_ranking(std::vector<RankedCourse>& items);

}  // namespace ragear

#endif  // RAGEAR_SCORING_H_

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

#include "ragear/scoring.h"

#include <algorithm>
#include <map>

#include "ragear/errors.h"
#include "ragear/text.h"

namespace ragear {

void QueryContext::validate() const {
  if (t_q < 1) throw InvalidArgument("t_q must be >= 1");
  if (k < 1) throw InvalidArgument("k must be >= 1");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kMetadata:
      return "metadata";
    case Method::kSumP:
      return "sump";
    case Method::kRagear:
      return "ragear";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "metadata") return Method::kMetadata;
  if (name == "sump") return Method::kSumP;
  if (name == "ragear") return Method::kRagear;
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

double global_evidence(const EvidenceSet& evidence, std::string_view course_id) {
  double mine = 0.0;
  double total = 0.0;
  for (const auto& item : evidence.items) {
    total += item.score;
    if (item.course_id == course_id) mine += item.score;
  }
  return total > 0.0 ? mine / total : 0.0;
}

double ranked_evidence(const EvidenceSet& evidence, std::string_view course_id,
                       const QueryContext& ctx) {
  ctx.validate();
  double mine = 0.0;
  for (const auto& item : evidence.items) {
    if (item.rank < 1 || item.rank > ctx.k) {
      throw InvalidArgument("evidence rank " + std::to_string(item.rank) +
                            " outside 1.." + std::to_string(ctx.k));
    }
    if (item.course_id == course_id) mine += 1.0 / (ctx.t_q + item.rank);
  }
  if (mine == 0.0) return 0.0;
  double ideal = 0.0;
  for (int i = 1; i <= ctx.k; ++i) ideal += 1.0 / (ctx.t_q + i);
  return mine / ideal;
}

double lesson_coverage(const EvidenceSet& evidence, std::string_view course_id,
                       const KgStore& store, const QueryContext& ctx) {
  ctx.validate();
  auto lessons = store.lessons_of(course_id);
  if (lessons.empty()) return 0.0;
  std::map<std::string_view, int> best_rank;
  for (const auto& item : evidence.items) {
    if (item.course_id != course_id) continue;
    auto [it, inserted] = best_rank.emplace(item.lesson_id, item.rank);
    if (!inserted) it->second = std::min(it->second, item.rank);
  }
  double sum = 0.0;
  for (const Lesson& l : lessons) {
    auto it = best_rank.find(l.lesson_id);
    if (it != best_rank.end()) sum += 1.0 / (ctx.t_q + it->second);
  }
  return sum / static_cast<double>(lessons.size());
}

CourseScore ragear_score(const EvidenceSet& evidence, std::string_view course_id,
                         const KgStore& store, const QueryContext& ctx) {
  CourseScore s;
  s.course_id = std::string(course_id);
  s.lesson_coverage = lesson_coverage(evidence, course_id, store, ctx);
  s.global_evidence = global_evidence(evidence, course_id);
  s.ranked_evidence = ranked_evidence(evidence, course_id, ctx);
  s.rs = s.global_evidence * s.ranked_evidence * s.lesson_coverage;
  for (const auto& item : evidence.items) {
    if (item.course_id == course_id) s.supporting_chunks.push_back(item);
  }
  return s;
}

namespace {

std::vector<std::string> courses_in(const EvidenceSet& evidence) {
  std::set<std::string> ids;
  for (const auto& item : evidence.items) ids.insert(item.course_id);
  return {ids.begin(), ids.end()};
}

bool ranks_before(double sa, const std::string& ia, double sb,
                  const std::string& ib) {
  return sa > sb || (sa == sb && ia < ib);
}

}  // namespace

void sort_ranking(std::vector<RankedCourse>& items) {
  std::erase_if(items, [](const RankedCourse& r) { return !(r.score > 0.0); });
  std::sort(items.begin(), items.end(),
            [](const RankedCourse& a, const RankedCourse& b) {
              return ranks_before(a.score, a.course_id, b.score, b.course_id);
            });
}

std::vector<CourseScore> score_courses(const EvidenceSet& evidence,
                                       const KgStore& store,
                                       const QueryContext& ctx) {
  std::vector<CourseScore> out;
  for (const auto& id : courses_in(evidence)) {
    CourseScore s = ragear_score(evidence, id, store, ctx);
    if (s.rs > 0.0) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const CourseScore& a, const CourseScore& b) {
    return ranks_before(a.rs, a.course_id, b.rs, b.course_id);
  });
  return out;
}

Ranking rank_courses_ragear(const EvidenceSet& evidence, const KgStore& store,
                            const QueryContext& ctx) {
  Ranking r{evidence.query_id, std::string(to_string(Method::kRagear)), {}};
  for (const CourseScore& s : score_courses(evidence, store, ctx)) {
    r.items.push_back({s.course_id, s.rs});
  }
  return r;
}

Ranking rank_courses_sump(const EvidenceSet& evidence, const KgStore& store,
                          const QueryContext& ctx) {
  ctx.validate();
  Ranking r{evidence.query_id, std::string(to_string(Method::kSumP)), {}};
  for (const auto& id : courses_in(evidence)) {
    store.course(id);
    r.items.push_back({id, global_evidence(evidence, id)});
  }
  sort_ranking(r.items);
  return r;
}

std::string metadata_text(const Course& course) {
  return course.title + ". " + course.description + ". " + course.instructor +
         ". " + course.discipline + ".";
}

Ranking rank_courses_metadata(const KgStore& store, const Embedding& query_emb,
                              const CourseSet& candidates,
                              const CourseEmbeddings& course_embeddings,
                              std::string query_id) {
  Ranking r{std::move(query_id), std::string(to_string(Method::kMetadata)), {}};
  for (const auto& id : candidates) {
    store.course(id);
    auto it = course_embeddings.find(id);
    if (it == course_embeddings.end()) {
      throw NotFoundError("no metadata embedding for course '" + id + "'");
    }
    r.items.push_back({id, std::max(0.0, cosine(query_emb, it->second))});
  }
  sort_ranking(r.items);
  return r;
}

CourseEmbeddings course_embeddings_from(const EmbeddingFile& file) {
  CourseEmbeddings out;
  for (const auto& [id, e] : file.rows) {
    Embedding unit = e;
    normalize(unit);
    out.emplace(id, std::move(unit));
  }
  return out;
}

std::set<std::string> default_stopwords() {
  return {"a",     "about", "an",    "and",   "are",   "as",    "at",
          "be",    "by",    "can",   "course", "courses", "do",  "for",
          "from",  "how",   "i",     "in",    "interested", "is", "it",
          "learn", "like",  "me",    "my",    "of",    "on",    "or",
          "some",  "that",  "the",   "to",    "want",  "what",  "which",
          "with",  "would", "il",    "la",    "di",    "e",     "per",
          "un",    "una",   "che",   "del",   "della", "nel"};
}

int default_t_q(std::string_view query_text,
                const std::set<std::string>& stopwords) {
  std::set<std::string> concepts;
  for (auto& tok : tokenize(query_text)) {
    if (!stopwords.count(tok)) concepts.insert(std::move(tok));
  }
  return std::clamp(static_cast<int>(concepts.size()), 1, 10);
}

}  // namespace ragear

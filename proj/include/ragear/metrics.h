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

#ifndef RAGEAR_METRICS_H_
#define RAGEAR_METRICS_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ragear/scoring.h"

namespace ragear {

// Graded relevance on the 0..5 scale; 0 means "not relevant".
struct Judgment {
  std::string query_id;
  std::string course_id;
  int score = 0;

  bool operator==(const Judgment&) const = default;
};

struct EvalConfig {
  int relevance_threshold = 3;  // binarization: score >= threshold
  std::vector<int> cutoffs{1, 3, 5};
  double rbo_p = 0.9;
  bool exponential_gain = false;  // nDCG gain 2^s - 1 instead of s

  void validate() const;
  bool relevant(int score) const { return score >= relevance_threshold; }
};

// Judgments of one judge, at most one per (query, course).
class Qrels {
 public:
  Qrels() = default;
  explicit Qrels(std::span<const Judgment> judgments);

  // Throws InvalidArgument for a score outside 0..5, IntegrityError for a
  // repeated (query, course) pair.
  void add(const Judgment& j);

  // Unjudged pairs score 0.
  int score(const std::string& query_id, const std::string& course_id) const;
  const std::map<std::string, int>& for_query(const std::string& query_id) const;
  std::set<std::string> queries() const;
  std::size_t relevant_count(const std::string& query_id,
                             const EvalConfig& cfg) const;
  std::vector<Judgment> judgments() const;
  std::size_t size() const;

  // Whitespace-separated "query_id course_id score" lines; the four-column
  // TREC layout "query_id iter course_id score" is accepted as well.
  static Qrels parse(std::istream& in, const std::string& source);
  static Qrels load(const std::filesystem::path& path);
  void write(std::ostream& out) const;

 private:
  std::map<std::string, std::map<std::string, int>> by_query_;
};

// 1 / position of the first course with score >= threshold; 0 if none.
double reciprocal_rank(const Ranking& ranking, const Qrels& qrels,
                       const EvalConfig& cfg);

// Relevant courses in the top k, divided by k even for shorter rankings.
double precision_at_k(const Ranking& ranking, const Qrels& qrels,
                      const EvalConfig& cfg, int k);

// sum_{i<=k} P@i * rel(i), divided by the number of relevant courses judged
// for the query (not capped at k); 0 when there are none.
double average_precision_at_k(const Ranking& ranking, const Qrels& qrels,
                              const EvalConfig& cfg, int k);

// Graded DCG@k over log2(i+1) discounts; the ideal ordering is taken over
// every judged course of the query.
double ndcg_at_k(const Ranking& ranking, const Qrels& qrels,
                 const EvalConfig& cfg, int k);

double mrr(std::span<const Ranking> runs, const Qrels& qrels,
           const EvalConfig& cfg);
double map_at_k(std::span<const Ranking> runs, const Qrels& qrels,
                const EvalConfig& cfg, int k);

}  // namespace ragear

#endif  // RAGEAR_METRICS_H_

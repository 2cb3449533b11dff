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

#ifndef RAGEAR_JUDGE_H_
#define RAGEAR_JUDGE_H_

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ragear/json_util.h"
#include "ragear/metrics.h"

namespace ragear {

// What a judge is shown for one recommended course.
struct JudgeCandidate {
  std::string course_id;
  std::string title;
  std::string summary;
};

class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  // Score in 0..5; 0 means the judge found the course not relevant.
  virtual int judge(const std::string& query_id, const std::string& query,
                    const JudgeCandidate& candidate) const = 0;
};

// Fixed (query_id, course_id) -> score table; unlisted pairs score 0.
class MockJudge final : public JudgeClient {
 public:
  using Table = std::map<std::pair<std::string, std::string>, int>;
  explicit MockJudge(Table table);
  int judge(const std::string& query_id, const std::string& query,
            const JudgeCandidate& candidate) const override;

 private:
  Table table_;
};

// Replays an existing qrels file.
class FileJudge final : public JudgeClient {
 public:
  explicit FileJudge(Qrels qrels) : qrels_(std::move(qrels)) {}
  int judge(const std::string& query_id, const std::string& query,
            const JudgeCandidate& candidate) const override;

 private:
  Qrels qrels_;
};

struct HttpJudgeConfig {
  std::string endpoint_url;
  std::string api_key_env;
  // {query}, {course_title} and {summary} are substituted.
  std::string prompt_template = default_prompt_template();
  int timeout_ms = 60000;
  int attempts = 3;  // first try plus two retries

  static std::string default_prompt_template();
  static HttpJudgeConfig from_json(const Json& j);
  void validate() const;
};

std::string render_prompt(const std::string& tmpl, const std::string& query,
                          const JudgeCandidate& candidate);

// Strict reply {"relevant": bool, "score": 1..5}. relevant=false yields 0
// whatever the score field says. Throws ParseError otherwise.
int parse_judge_reply(const std::string& body);

// POSTs {"query", "course_title", "summary", "prompt"} per candidate.
// Transport failures and malformed replies are retried; after the last
// attempt a TransportError (unreachable) or ParseError (garbage) escapes.
class HttpJudge final : public JudgeClient {
 public:
  explicit HttpJudge(HttpJudgeConfig cfg);
  int judge(const std::string& query_id, const std::string& query,
            const JudgeCandidate& candidate) const override;

 private:
  HttpJudgeConfig cfg_;
};

// One judgment per candidate, in candidate order. Duplicated course ids are
// rejected with InvalidArgument.
std::vector<Judgment> judge_rank_list(const std::string& query_id,
                                      const std::string& query,
                                      std::span<const JudgeCandidate> candidates,
                                      const JudgeClient& judge);

}  // namespace ragear

#endif  // RAGEAR_JUDGE_H_

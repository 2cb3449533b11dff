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

#include "ragear/judge.h"

#include <cstdlib>
#include <set>

#include "httplib.h"
#include "ragear/errors.h"
#include "ragear/http_embedder.h"

namespace ragear {

MockJudge::MockJudge(Table table) : table_(std::move(table)) {
  for (const auto& [key, score] : table_) {
    if (score < 0 || score > 5) {
      throw InvalidArgument("mock judge score outside 0..5 for (" + key.first +
                            ", " + key.second + ")");
    }
  }
}

int MockJudge::judge(const std::string& query_id, const std::string&,
                     const JudgeCandidate& candidate) const {
  auto it = table_.find({query_id, candidate.course_id});
  return it == table_.end() ? 0 : it->second;
}

int FileJudge::judge(const std::string& query_id, const std::string&,
                     const JudgeCandidate& candidate) const {
  return qrels_.score(query_id, candidate.course_id);
}

std::string HttpJudgeConfig::default_prompt_template() {
  return "A student is looking for university courses with this request:\n"
         "\"{query}\"\n\n"
         "Course title: {course_title}\n"
         "Course summary: {summary}\n\n"
         "First answer whether you find this course relevant to the request. "
         "If it is relevant, rate it from 1 (barely relevant) to 5 (exactly "
         "what the student asked for).\n"
         "Reply with JSON only: {\"relevant\": true|false, \"score\": 1-5}.";
}

HttpJudgeConfig HttpJudgeConfig::from_json(const Json& j) {
  HttpJudgeConfig cfg;
  try {
    cfg.endpoint_url = required<std::string>(j, "endpoint_url", "judge config");
    cfg.api_key_env = optional_or<std::string>(j, "api_key_env", "", "judge config");
    cfg.prompt_template = optional_or<std::string>(
        j, "prompt_template", cfg.prompt_template, "judge config");
    cfg.timeout_ms = optional_or<int>(j, "timeout_ms", cfg.timeout_ms, "judge config");
    cfg.attempts = optional_or<int>(j, "attempts", cfg.attempts, "judge config");
  } catch (const ParseError& e) {
    throw InvalidArgument(e.what());
  }
  cfg.validate();
  return cfg;
}

void HttpJudgeConfig::validate() const {
  parse_endpoint(endpoint_url);
  if (timeout_ms < 1) throw InvalidArgument("judge timeout_ms must be >= 1");
  if (attempts < 1) throw InvalidArgument("judge attempts must be >= 1");
  if (prompt_template.find("{query}") == std::string::npos) {
    throw InvalidArgument("judge prompt template lacks {query}");
  }
}

std::string render_prompt(const std::string& tmpl, const std::string& query,
                          const JudgeCandidate& candidate) {
  const std::pair<std::string, const std::string*> vars[] = {
      {"{query}", &query},
      {"{course_title}", &candidate.title},
      {"{summary}", &candidate.summary},
  };
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    bool replaced = false;
    if (tmpl[i] == '{') {
      for (const auto& [name, value] : vars) {
        if (tmpl.compare(i, name.size(), name) == 0) {
          out += *value;
          i += name.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out += tmpl[i++];
  }
  return out;
}

int parse_judge_reply(const std::string& body) {
  Json reply;
  try {
    reply = Json::parse(body);
  } catch (const Json::exception&) {
    throw ParseError("judge reply is not JSON");
  }
  if (!reply.is_object()) throw ParseError("judge reply is not an object");
  auto rel = reply.find("relevant");
  if (rel == reply.end() || !rel->is_boolean()) {
    throw ParseError("judge reply lacks boolean 'relevant'");
  }
  if (!rel->get<bool>()) return 0;
  auto score = reply.find("score");
  if (score == reply.end() || !score->is_number_integer()) {
    throw ParseError("judge reply lacks integer 'score'");
  }
  int s = score->get<int>();
  if (s < 1 || s > 5) {
    throw ParseError("judge score " + std::to_string(s) + " outside 1..5");
  }
  return s;
}

HttpJudge::HttpJudge(HttpJudgeConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
}

int HttpJudge::judge(const std::string&, const std::string& query,
                     const JudgeCandidate& candidate) const {
  const HttpEndpoint ep = parse_endpoint(cfg_.endpoint_url);
  const std::string payload =
      Json{{"query", query},
           {"course_title", candidate.title},
           {"summary", candidate.summary},
           {"prompt", render_prompt(cfg_.prompt_template, query, candidate)}}
          .dump();
  httplib::Headers headers;
  if (!cfg_.api_key_env.empty()) {
    if (const char* key = std::getenv(cfg_.api_key_env.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }
  std::string last_error;
  bool last_was_parse = false;
  for (int attempt = 1; attempt <= cfg_.attempts; ++attempt) {
    httplib::Client client(ep.scheme_host_port);
    auto timeout = std::chrono::milliseconds(cfg_.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    auto res = client.Post(ep.path, headers, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      last_was_parse = false;
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      last_was_parse = false;
      continue;
    }
    try {
      return parse_judge_reply(res->body);
    } catch (const ParseError& e) {
      last_error = e.what();
      last_was_parse = true;
    }
  }
  const std::string msg = "judge gave no usable answer for course '" +
                          candidate.course_id + "' after " +
                          std::to_string(cfg_.attempts) +
                          " attempts: " + last_error;
  if (last_was_parse) throw ParseError(msg);
  throw TransportError(msg);
}

std::vector<Judgment> judge_rank_list(const std::string& query_id,
                                      const std::string& query,
                                      std::span<const JudgeCandidate> candidates,
                                      const JudgeClient& judge) {
  std::set<std::string> seen;
  std::vector<Judgment> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (!seen.insert(c.course_id).second) {
      throw InvalidArgument("course '" + c.course_id + "' listed twice");
    }
    int score = judge.judge(query_id, query, c);
    if (score < 0 || score > 5) {
      throw InvalidArgument("judge returned score " + std::to_string(score));
    }
    out.push_back({query_id, c.course_id, score});
  }
  return out;
}

}  // namespace ragear

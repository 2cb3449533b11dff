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

#include <gtest/gtest.h>

#include <atomic>
#include <thread>
#include <vector>

#include "httplib.h"
#include "ragear/errors.h"
#include "test_util.h"

namespace ragear {
namespace {

const std::vector<JudgeCandidate> kCandidates{{"cA", "Databases", "Tables and SQL."},
                                              {"cB", "History", "Medieval Europe."}};

TEST(MockJudge, TableLookup) {
  MockJudge judge({{{"q1", "cA"}, 4}});
  auto out = judge_rank_list("q1", "sql", kCandidates, judge);
  EXPECT_EQ(out, (std::vector<Judgment>{{"q1", "cA", 4}, {"q1", "cB", 0}}));
  EXPECT_THROW(MockJudge({{{"q", "c"}, 6}}), InvalidArgument);
}

TEST(FileJudge, ReplaysQrels) {
  std::istringstream in("q1 cA 5\n");
  FileJudge judge(Qrels::parse(in, "mem"));
  EXPECT_EQ(judge_rank_list("q1", "x", kCandidates, judge)[0],
            (Judgment{"q1", "cA", 5}));
}

TEST(JudgeRankList, RejectsDuplicates) {
  MockJudge judge({});
  std::vector<JudgeCandidate> dup{kCandidates[0], kCandidates[0]};
  EXPECT_THROW(judge_rank_list("q", "x", dup, judge), InvalidArgument);
}

TEST(ParseReply, Strict) {
  EXPECT_EQ(parse_judge_reply(R"({"relevant": true, "score": 4})"), 4);
  EXPECT_EQ(parse_judge_reply(R"({"relevant": false, "score": 5})"), 0);
  EXPECT_EQ(parse_judge_reply(R"({"relevant": false})"), 0);
  for (const char* bad : {"", "[]", "{\"score\": 3}", R"({"relevant": "yes", "score": 3})",
                          R"({"relevant": true})", R"({"relevant": true, "score": 0})",
                          R"({"relevant": true, "score": 6})",
                          R"({"relevant": true, "score": 3.5})"}) {
    EXPECT_THROW(parse_judge_reply(bad), ParseError) << bad;
  }
}

TEST(Prompt, RendersPlaceholdersOnce) {
  std::string p = render_prompt("Q={query} T={course_title} S={summary} {other}",
                                "find {summary}", kCandidates[0]);
  EXPECT_EQ(p, "Q=find {summary} T=Databases S=Tables and SQL. {other}");
  std::string def = render_prompt(HttpJudgeConfig::default_prompt_template(), "sql",
                                  kCandidates[0]);
  EXPECT_NE(def.find("\"sql\""), std::string::npos);
  EXPECT_NE(def.find("Databases"), std::string::npos);
}

TEST(HttpJudgeConfig, Validation) {
  HttpJudgeConfig cfg = HttpJudgeConfig::from_json({{"endpoint_url", "http://h/judge"}});
  EXPECT_EQ(cfg.attempts, 3);
  EXPECT_THROW(HttpJudgeConfig::from_json(Json::object()), InvalidArgument);
  EXPECT_THROW(HttpJudgeConfig::from_json(
                   {{"endpoint_url", "http://h/j"}, {"prompt_template", "no var"}}),
               InvalidArgument);
  EXPECT_THROW(HttpJudgeConfig::from_json({{"endpoint_url", "ftp://h"}}), InvalidArgument);
}

// Serves the replies in order, repeating the last one.
class FakeJudge {
 public:
  explicit FakeJudge(std::vector<std::pair<int, std::string>> replies)
      : replies_(std::move(replies)) {
    server_.Post("/judge", [this](const httplib::Request& req, httplib::Response& res) {
      std::size_t n = calls_++;
      last_body_ = req.body;
      const auto& [status, body] = replies_[std::min(n, replies_.size() - 1)];
      res.status = status;
      res.set_content(body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeJudge() {
    server_.stop();
    thread_.join();
  }
  HttpJudgeConfig config() const {
    HttpJudgeConfig cfg;
    cfg.endpoint_url = "http://127.0.0.1:" + std::to_string(port_) + "/judge";
    cfg.timeout_ms = 2000;
    return cfg;
  }
  std::size_t calls() const { return calls_; }
  std::string last_body() const { return last_body_; }

 private:
  std::vector<std::pair<int, std::string>> replies_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<std::size_t> calls_{0};
  std::string last_body_;
};

TEST(HttpJudge, IrrelevantMeansZero) {
  FakeJudge fake({{200, R"({"relevant": false, "score": 5})"}});
  HttpJudge judge(fake.config());
  EXPECT_EQ(judge.judge("q1", "sql", kCandidates[0]), 0);
  Json sent = Json::parse(fake.last_body());
  EXPECT_EQ(sent["query"], "sql");
  EXPECT_EQ(sent["course_title"], "Databases");
  EXPECT_EQ(sent["summary"], "Tables and SQL.");
  EXPECT_NE(sent["prompt"].get<std::string>().find("Databases"), std::string::npos);
}

TEST(HttpJudge, MalformedRepliesRetriedTwice) {
  FakeJudge fake({{200, "garbage"}, {500, ""}, {200, R"({"relevant": true, "score": 3})"}});
  HttpJudge judge(fake.config());
  EXPECT_EQ(judge.judge("q1", "sql", kCandidates[0]), 3);
  EXPECT_EQ(fake.calls(), 3u);
}

TEST(HttpJudge, GivesUpWithParseError) {
  FakeJudge fake({{200, "garbage"}});
  HttpJudge judge(fake.config());
  EXPECT_THROW(judge.judge("q1", "sql", kCandidates[0]), ParseError);
  EXPECT_EQ(fake.calls(), 3u);
}

TEST(HttpJudge, UnreachableIsTransportError) {
  int port = testing_util::unused_port();
  HttpJudgeConfig cfg;
  cfg.endpoint_url = "http://127.0.0.1:" + std::to_string(port) + "/judge";
  cfg.timeout_ms = 500;
  EXPECT_THROW(HttpJudge(cfg).judge("q", "x", kCandidates[0]), TransportError);
}

}  // namespace
}  // namespace ragear

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

// Drives the ragear binary as a subprocess.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <set>
#include <sstream>
#include <string>

#include "ragear/json_util.h"
#include "test_util.h"

namespace {

using testing_util::golden_dir;
using testing_util::slurp;
using testing_util::TempDir;
using testing_util::write_file;
namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

Outcome run(const std::vector<std::string>& args) {
  static TempDir io;
  std::string cmd = quote(RAGEAR_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " >" + quote((io / "out").string()) + " 2>" + quote((io / "err").string());
  int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = slurp(io / "out");
  o.err = slurp(io / "err");
  return o;
}

std::vector<std::string> snapshot_args() {
  auto g = golden_dir();
  return {"--catalogue",  (g / "catalogue.json").string(),
          "--chunks",     (g / "expected" / "chunks.jsonl").string(),
          "--embeddings", (g / "expected" / "embeddings.jsonl").string(),
          "--metadata-embeddings", (g / "expected" / "metadata.jsonl").string()};
}

std::vector<std::string> query_args(std::vector<std::string> extra) {
  std::vector<std::string> args{"query"};
  for (auto& a : snapshot_args()) args.push_back(a);
  for (auto& a : extra) args.push_back(std::move(a));
  return args;
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

TEST(Cli, HelpAndUsage) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"ingest", "--out", "/tmp/x"}).code, 2);
}

TEST(Cli, IngestEmptyDirectory) {
  TempDir dir;
  fs::create_directories(dir / "transcripts");
  auto o = run({"ingest", "--transcripts", (dir / "transcripts").string(), "--out",
                (dir / "chunks.jsonl").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(slurp(dir / "chunks.jsonl"), "");
  auto stats = ragear::Json::parse(o.out);
  EXPECT_EQ(stats["chunks"], 0);
}

TEST(Cli, IngestReportsMalformedFile) {
  TempDir dir;
  write_file(dir / "t" / "good.json",
             R"({"lesson_id":"L1","course_id":"C1","words":[{"text":"Hi.","start_s":0,"end_s":1}]})");
  write_file(dir / "t" / "broken.json", "{\"lesson_id\":");
  auto o = run({"ingest", "--transcripts", (dir / "t").string(), "--out",
                (dir / "chunks.jsonl").string()});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("broken.json"), std::string::npos) << o.err;
}

TEST(Cli, IngestRejectsBadChunkingConfig) {
  TempDir dir;
  fs::create_directories(dir / "t");
  auto o = run({"ingest", "--transcripts", (dir / "t").string(), "--out",
                (dir / "c.jsonl").string(), "--min", "500", "--target", "100"});
  EXPECT_EQ(o.code, 2) << o.err;
}

TEST(Cli, EmbedIsResumable) {
  TempDir dir;
  auto chunks = (golden_dir() / "expected" / "chunks.jsonl").string();
  auto out = (dir / "emb.jsonl").string();
  auto first = run({"embed", "--chunks", chunks, "--embedder", "test:64", "--out", out});
  ASSERT_EQ(first.code, 0) << first.err;
  std::size_t n = count_lines(slurp(golden_dir() / "expected" / "chunks.jsonl"));
  EXPECT_EQ(ragear::Json::parse(first.out)["written"], n);
  std::string bytes = slurp(out);

  auto second = run({"embed", "--chunks", chunks, "--embedder", "test:64", "--out", out});
  ASSERT_EQ(second.code, 0) << second.err;
  EXPECT_EQ(ragear::Json::parse(second.out)["written"], 0);
  EXPECT_EQ(ragear::Json::parse(second.out)["skipped"], n);
  EXPECT_EQ(slurp(out), bytes);

  // Drop the last few rows, as if the first run had been interrupted.
  std::istringstream in(bytes);
  std::string line, truncated;
  for (std::size_t i = 0; i < n - 3 && std::getline(in, line); ++i) truncated += line + "\n";
  write_file(out, truncated);
  auto third = run({"embed", "--chunks", chunks, "--embedder", "test:64", "--out", out});
  ASSERT_EQ(third.code, 0) << third.err;
  EXPECT_EQ(ragear::Json::parse(third.out)["written"], 4);
  EXPECT_EQ(slurp(out), bytes);

  auto mismatch = run({"embed", "--chunks", chunks, "--embedder", "test:32", "--out", out});
  EXPECT_NE(mismatch.code, 0);
  EXPECT_EQ(slurp(out), bytes);
}

TEST(Cli, QueryText) {
  auto o = run(query_args({"--text", "chirality and enantiomers", "--top", "2"}));
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find(" 1. CHEM210"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("RS="), std::string::npos);

  o = run(query_args({"--text", "chirality", "--json", "--top", "1"}));
  ASSERT_EQ(o.code, 0) << o.err;
  auto j = ragear::Json::parse(o.out);
  EXPECT_EQ(j["courses"].size(), 1u);
  EXPECT_EQ(j["courses"][0]["course_id"], "CHEM210");
}

TEST(Cli, QueryFilters) {
  auto o = run(query_args({"--text", "learning", "--filter", "discipline=INF/01",
                           "--top", "5"}));
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("candidates=2"), std::string::npos) << o.out;
  EXPECT_EQ(o.out.find("CHEM210"), std::string::npos);

  o = run(query_args({"--text", "x", "--filter", "max_credits=1"}));
  ASSERT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("no course satisfies"), std::string::npos);

  EXPECT_EQ(run(query_args({"--text", "x", "--filter", "discipline=NOPE/00"})).code, 2);
  EXPECT_EQ(run(query_args({"--text", "x", "--filter", "plan=NOPE"})).code, 2);
  EXPECT_EQ(run(query_args({"--text", "x", "--filter", "colour=red"})).code, 2);
  EXPECT_EQ(run(query_args({"--text", "x", "--filter", "max_credits=lots"})).code, 2);
  EXPECT_EQ(run(query_args({"--text", "x", "--filter", "student=s999"})).code, 2);
  o = run(query_args({"--text", "x", "--filter", "min_credits=9", "--filter",
                      "max_credits=3"}));
  EXPECT_EQ(o.code, 2);
}

TEST(Cli, QueryRejectsBadMethodAndDims) {
  EXPECT_EQ(run(query_args({"--text", "x", "--method", "bm25"})).code, 2);
  EXPECT_EQ(run(query_args({"--text", "x", "--method", "all"})).code, 2);
  auto o = run(query_args({"--text", "x", "--embedder", "test:64"}));
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("dim"), std::string::npos) << o.err;
}

TEST(Cli, EvalAndAgree) {
  TempDir dir;
  auto g = golden_dir();
  auto q = query_args({"--queries", (g / "queries.jsonl").string(), "--method", "all",
                       "--out-dir", dir.path().string()});
  ASSERT_EQ(run(q).code, 0);
  for (const char* m : {"metadata", "sump", "ragear"}) {
    EXPECT_EQ(count_lines(slurp(dir / ("run." + std::string(m) + ".tsv"))) > 0, true) << m;
  }

  auto o = run({"eval", "--runs", (dir / "run.metadata.tsv").string(),
                (dir / "run.ragear.tsv").string(), "--qrels", (g / "qrels.txt").string(),
                "--baseline", "metadata", "--json"});
  ASSERT_EQ(o.code, 0) << o.err;
  auto j = ragear::Json::parse(o.out);
  EXPECT_TRUE(j.dump().find("ragear") != std::string::npos);

  o = run({"eval", "--runs", (dir / "run.ragear.tsv").string(), "--qrels",
           (g / "qrels.txt").string(), "--baseline", "metadata"});
  EXPECT_NE(o.code, 0);
  o = run({"eval", "--runs", (dir / "run.ragear.tsv").string(), "--qrels",
           (g / "qrels.txt").string(), "--baseline", "ragear", "--cutoffs", "1,x"});
  EXPECT_EQ(o.code, 2);

  o = run({"agree", "--left", (g / "qrels.txt").string(), "--right",
           (g / "qrels.txt").string(), "--json"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(ragear::Json::parse(o.out)["summary"]["rbo"]["mean"], 1.0);

  write_file(dir / "other.txt", "zz INF220 3\n");
  o = run({"agree", "--left", (g / "qrels.txt").string(), "--right",
           (dir / "other.txt").string()});
  EXPECT_EQ(o.code, 2);
}

TEST(Cli, IndexRoundTrip) {
  TempDir dir;
  auto g = golden_dir();
  auto o = run({"index", "--catalogue", (g / "catalogue.json").string(), "--chunks",
                (g / "expected" / "chunks.jsonl").string(), "--embeddings",
                (g / "expected" / "embeddings.jsonl").string(), "--out",
                (dir / "idx.bin").string()});
  ASSERT_EQ(o.code, 0) << o.err;

  auto from_index = run({"query", "--catalogue", (g / "catalogue.json").string(),
                         "--chunks", (g / "expected" / "chunks.jsonl").string(),
                         "--index", (dir / "idx.bin").string(), "--queries",
                         (g / "queries.jsonl").string()});
  ASSERT_EQ(from_index.code, 0) << from_index.err;
  EXPECT_EQ(from_index.out, slurp(g / "expected" / "run.ragear.tsv"));
}

TEST(Cli, ServeRejectsMissingOrBadConfig) {
  EXPECT_EQ(run({"serve", "--config", "/nonexistent.json"}).code, 2);
  TempDir dir;
  write_file(dir / "bad.json", R"({"catalogue": "c.json", "colour": "red"})");
  EXPECT_EQ(run({"serve", "--config", (dir / "bad.json").string()}).code, 2);
}

}  // namespace

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

#include <gtest/gtest.h>

#include <memory>

#include "ragear/errors.h"
#include "ragear/service_config.h"
#include "test_util.h"

namespace ragear {
namespace {

using testing_util::golden_dir;
using testing_util::TempDir;
using testing_util::write_file;

const Snapshot& golden() {
  static const Snapshot snap =
      load_snapshot(ServiceConfig::load(golden_dir() / "service.json"));
  return snap;
}

QueryRequest request(std::string text, Method method = Method::kRagear) {
  QueryRequest q;
  q.query_id = "t";
  q.text = std::move(text);
  q.method = method;
  return q;
}

TEST(Pipeline, GoldenSnapshotLoads) {
  const auto& snap = golden();
  EXPECT_NO_THROW(snap.check());
  EXPECT_EQ(snap.store->courses().size(), 5u);
  EXPECT_EQ(snap.index->dim(), 256u);
  EXPECT_EQ(snap.index->size(), snap.store->chunks().size());
  ASSERT_TRUE(snap.metadata);
  EXPECT_EQ(snap.metadata->size(), 5u);
  EXPECT_FALSE(snap.config.t_q.has_value());
}

TEST(Pipeline, RagearRankingMatchesScoringOnSameEvidence) {
  const auto& snap = golden();
  auto r = run_query(snap, request("neural networks and gradient descent"));
  EXPECT_FALSE(r.evidence.items.empty());
  EXPECT_EQ(r.ranking, rank_courses_ragear(r.evidence, *snap.store, r.context));
  ASSERT_EQ(r.breakdown.size(), r.ranking.items.size());
  for (std::size_t i = 0; i < r.breakdown.size(); ++i) {
    EXPECT_EQ(r.breakdown[i].course_id, r.ranking.items[i].course_id);
    EXPECT_DOUBLE_EQ(r.breakdown[i].rs, r.ranking.items[i].score);
  }
  EXPECT_EQ(r.ranking.items.front().course_id, "INF310");
}

TEST(Pipeline, SumPRankingMatchesScoringOnSameEvidence) {
  const auto& snap = golden();
  auto r = run_query(snap, request("supply and demand", Method::kSumP));
  EXPECT_EQ(r.ranking, rank_courses_sump(r.evidence, *snap.store, r.context));
  EXPECT_EQ(r.ranking.items.front().course_id, "ECON101");
}

TEST(Pipeline, MetadataMethodUsesCourseVectors) {
  const auto& snap = golden();
  auto r = run_query(snap, request("database indexing", Method::kMetadata));
  ASSERT_FALSE(r.ranking.items.empty());
  EXPECT_EQ(r.ranking.method, "metadata");
  // The breakdown is attached even though the order comes from metadata.
  EXPECT_EQ(r.breakdown.size(), r.ranking.items.size());

  Snapshot bare = snap;
  bare.metadata.reset();
  EXPECT_THROW(run_query(bare, request("x", Method::kMetadata)), InvalidArgument);
}

TEST(Pipeline, ConstraintsRestrictEvidenceAndRanking) {
  const auto& snap = golden();
  auto q = request("learning from data");
  q.constraints.discipline = "INF/01";
  auto r = run_query(snap, q);
  EXPECT_EQ(r.candidates, (CourseSet{"INF220", "INF310"}));
  for (const auto& e : r.evidence.items) {
    EXPECT_TRUE(e.course_id == "INF220" || e.course_id == "INF310") << e.chunk_id;
  }
  for (const auto& item : r.ranking.items) {
    EXPECT_TRUE(r.candidates.count(item.course_id)) << item.course_id;
  }

  q.constraints.discipline = "NOPE/00";
  EXPECT_THROW(run_query(snap, q), ConstraintError);
}

TEST(Pipeline, TqPriorityRequestThenConfigThenDefault) {
  Snapshot snap = golden();
  auto q = request("neural networks and gradient descent");
  int derived = default_t_q(q.text, snap.config.stopwords);
  EXPECT_EQ(run_query(snap, q).context.t_q, derived);

  snap.config.t_q = 7;
  EXPECT_EQ(run_query(snap, q).context.t_q, 7);

  q.t_q = 2;
  EXPECT_EQ(run_query(snap, q).context.t_q, 2);

  q.t_q = 0;
  EXPECT_THROW(run_query(snap, q), InvalidArgument);
}

TEST(Pipeline, EmptyQueryRejected) {
  EXPECT_THROW(run_query(golden(), request("")), InvalidArgument);
}

TEST(Pipeline, KBeyondCorpusReturnsEveryPositiveChunk) {
  auto store = std::make_shared<KgStore>(KgStore::build(testing_util::small_catalogue(1, 1, 3)));
  auto embedder = std::make_shared<TestEmbedder>(32);
  std::vector<DenseIndex::Entry> rows;
  for (const auto& c : store->chunks()) {
    rows.emplace_back(c.chunk_id, test_embedder_encode("shared words", 32));
  }
  auto index = std::make_shared<DenseIndex>(DenseIndex::build(rows, *store));

  Snapshot snap;
  snap.store = store;
  snap.index = index;
  snap.embedder = embedder;
  snap.config.k = 5;
  auto r = run_query(snap, request("shared words"));
  EXPECT_EQ(r.evidence.items.size(), 3u);
  EXPECT_EQ(r.context.k, 5);
  EXPECT_EQ(r.evidence.k, 5);
  ASSERT_EQ(r.ranking.items.size(), 1u);
  EXPECT_EQ(r.ranking.items[0].course_id, "C00");
}

TEST(Pipeline, CheckDetectsDimensionMismatch) {
  Snapshot snap = golden();
  snap.embedder = std::make_shared<TestEmbedder>(64);
  EXPECT_THROW(snap.check(), DimensionError);

  snap = golden();
  auto meta = std::make_shared<CourseEmbeddings>(*snap.metadata);
  (*meta)["INF220"] = test_embedder_encode("x", 8);
  snap.metadata = meta;
  EXPECT_THROW(snap.check(), DimensionError);

  snap = golden();
  snap.index.reset();
  EXPECT_THROW(snap.check(), InvalidArgument);
}

TEST(Pipeline, ReadQueries) {
  auto qs = read_queries(golden_dir() / "queries.jsonl");
  ASSERT_EQ(qs.size(), 10u);
  EXPECT_EQ(qs[0].query_id, "q01");
  EXPECT_EQ(qs[9].constraints.discipline, "INF/01");

  TempDir dir;
  write_file(dir / "dup.jsonl",
             "{\"query_id\":\"a\",\"text\":\"x\"}\n{\"query_id\":\"a\",\"text\":\"y\"}\n");
  EXPECT_THROW(read_queries(dir / "dup.jsonl"), IntegrityError);
  write_file(dir / "blank.jsonl", "{\"query_id\":\"a\",\"text\":\"\"}\n");
  EXPECT_THROW(read_queries(dir / "blank.jsonl"), ParseError);
  write_file(dir / "tq.jsonl", "{\"query_id\":\"a\",\"text\":\"x\",\"t_q\":4}\n");
  EXPECT_EQ(read_queries(dir / "tq.jsonl")[0].t_q, 4);
}

TEST(ServiceConfigTest, ResolvesPathsRelativeToFile) {
  auto cfg = ServiceConfig::load(golden_dir() / "service.json");
  EXPECT_EQ(cfg.catalogue, golden_dir() / "catalogue.json");
  ASSERT_TRUE(cfg.embeddings);
  EXPECT_EQ(*cfg.embeddings, golden_dir() / "expected" / "embeddings.jsonl");
  EXPECT_EQ(cfg.k, 200);
  EXPECT_EQ(cfg.evidence_cap, 5);
  EXPECT_EQ(cfg.embedder.dim, 256u);
}

TEST(ServiceConfigTest, TqForms) {
  Json base = {{"catalogue", "c.json"}, {"embeddings", "e.jsonl"}};
  auto with = [&](Json v) {
    Json j = base;
    j["t_q"] = std::move(v);
    return ServiceConfig::from_json(j, "/base");
  };
  EXPECT_FALSE(with("auto").t_q.has_value());
  EXPECT_EQ(with(3).t_q, 3);
  EXPECT_THROW(with("three"), InvalidArgument);
  EXPECT_THROW(with(0), InvalidArgument);
  EXPECT_EQ(ServiceConfig::from_json(base, "/base").catalogue, "/base/c.json");
}

TEST(ServiceConfigTest, Rejects) {
  EXPECT_THROW(ServiceConfig::from_json(Json::array()), InvalidArgument);
  EXPECT_THROW(ServiceConfig::from_json({{"embeddings", "e"}}), InvalidArgument);
  EXPECT_THROW(ServiceConfig::from_json({{"catalogue", "c"}}), InvalidArgument);
  EXPECT_THROW(ServiceConfig::from_json(
                   {{"catalogue", "c"}, {"embeddings", "e"}, {"colour", "red"}}),
               InvalidArgument);
  EXPECT_THROW(ServiceConfig::from_json(
                   {{"catalogue", "c"}, {"embeddings", "e"}, {"port", 70000}}),
               InvalidArgument);
  EXPECT_THROW(ServiceConfig::from_json(
                   {{"catalogue", "c"}, {"embeddings", "e"}, {"k", 0}}),
               InvalidArgument);
  EXPECT_THROW(ServiceConfig::load("/nonexistent/service.json"), Error);
}

TEST(ServiceConfigTest, JsonRoundTrip) {
  auto cfg = ServiceConfig::load(golden_dir() / "service.json");
  auto again = ServiceConfig::from_json(cfg.to_json());
  EXPECT_EQ(again.to_json(), cfg.to_json());
  EXPECT_EQ(again.catalogue, cfg.catalogue);
  EXPECT_EQ(again.t_q, cfg.t_q);
}

}  // namespace
}  // namespace ragear

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

#include "ragear/kg_store.h"

#include <gtest/gtest.h>

#include "oracles/generators.h"
#include "oracles/naive.h"
#include "ragear/errors.h"
#include "test_util.h"

namespace ragear {
namespace {

using testing_util::small_catalogue;

Catalogue credits_catalogue() {
  Catalogue cat = small_catalogue(3, 1, 0);
  cat.courses[0].credits = 6;
  cat.courses[1].credits = 9;
  cat.courses[2].credits = 12;
  cat.courses[1].discipline = "MAT/05";
  cat.courses[2].prerequisite_ids = {"C00"};
  cat.study_plans.push_back({"P1", "Plan one", {"C00", "C02"}});
  cat.students.push_back({"s1", "P1", {"C00"}});
  return cat;
}

template <typename F>
std::string integrity_message(F mutate) {
  Catalogue cat = small_catalogue(2, 2, 2);
  mutate(cat);
  try {
    KgStore::build(std::move(cat));
  } catch (const IntegrityError& e) {
    return e.what();
  }
  return "";
}

TEST(KgStore, CountsMirrorInput) {
  Catalogue cat = small_catalogue(2, 1, 0);
  cat.lessons.push_back({"C00-L01", "C00", 1, "x", {}});
  cat.courses[0].lesson_ids.push_back("C00-L01");
  for (int i = 0; i < 10; ++i) {
    cat.chunks.push_back({"C00-L00#" + std::to_string(i), "C00-L00", "C00", i, "t",
                          static_cast<double>(i), i + 1.0});
  }
  KgStore store = KgStore::build(std::move(cat));
  EXPECT_EQ(store.courses().size(), 2u);
  EXPECT_EQ(store.lessons().size(), 3u);
  EXPECT_EQ(store.chunks().size(), 10u);
}

TEST(KgStore, ContainmentTraversals) {
  KgStore store = KgStore::build(small_catalogue(2, 3, 2));
  auto lessons = store.lessons_of("C01");
  ASSERT_EQ(lessons.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(lessons[i].index, i);
  EXPECT_EQ(store.chunks_of("C01-L02").size(), 2u);
  for (const Chunk& ch : store.chunks()) {
    ChunkContext ctx = store.resolve_chunk(ch.chunk_id);
    EXPECT_EQ(ctx.chunk.chunk_id, ch.chunk_id);
    EXPECT_EQ(ctx.lesson.lesson_id, ch.lesson_id);
    EXPECT_EQ(ctx.course.course_id, ch.course_id);
    EXPECT_EQ(ctx.lesson.course_id, ctx.course.course_id);
  }
}

TEST(KgStore, EmptyLessonHasNoChunks) {
  KgStore store = KgStore::build(small_catalogue(1, 2, 0));
  EXPECT_TRUE(store.chunks_of("C00-L01").empty());
}

TEST(KgStore, UnknownIdsAreNotFound) {
  KgStore store = KgStore::build(small_catalogue(1, 1, 1));
  EXPECT_THROW(store.course("nope"), NotFoundError);
  EXPECT_THROW(store.lessons_of("nope"), NotFoundError);
  EXPECT_THROW(store.chunks_of("nope"), NotFoundError);
  EXPECT_THROW(store.resolve_chunk("nope"), NotFoundError);
  EXPECT_THROW(store.study_plan("nope"), NotFoundError);
  EXPECT_THROW(store.student("nope"), NotFoundError);
}

TEST(KgStore, ChunkCourseMismatchNamesChunk) {
  std::string msg = integrity_message([](Catalogue& c) { c.chunks[0].course_id = "C01"; });
  EXPECT_NE(msg.find("C00-L00#0"), std::string::npos) << msg;
}

TEST(KgStore, CyclicPrerequisitesRejected) {
  std::string msg = integrity_message([](Catalogue& c) {
    c.courses[0].prerequisite_ids = {"C01"};
    c.courses[1].prerequisite_ids = {"C00"};
  });
  EXPECT_NE(msg.find("cycl"), std::string::npos) << msg;
}

TEST(KgStore, OtherIntegrityViolations) {
  EXPECT_NE(integrity_message([](Catalogue& c) { c.courses[1].course_id = "C00"; }), "");
  EXPECT_NE(integrity_message([](Catalogue& c) {
              c.courses[0].prerequisite_ids = {"ZZZ"};
            }),
            "");
  EXPECT_NE(integrity_message([](Catalogue& c) { c.courses[0].credits = 0; }), "");
  EXPECT_NE(integrity_message([](Catalogue& c) { c.chunks[1].start_s = 5.0; }), "");
  EXPECT_NE(integrity_message([](Catalogue& c) { c.chunks[0].lesson_id = "X"; }), "");
  EXPECT_NE(integrity_message([](Catalogue& c) { c.chunks[0].end_s = c.chunks[0].start_s; }),
            "");
  EXPECT_NE(integrity_message([](Catalogue& c) { c.courses[0].lesson_ids.pop_back(); }), "");
  EXPECT_NE(integrity_message([](Catalogue& c) { c.chunks[1].chunk_id = c.chunks[0].chunk_id; }),
            "");
  EXPECT_NE(integrity_message([](Catalogue& c) {
              c.study_plans.push_back({"P", "", {"C09"}});
            }),
            "");
  EXPECT_NE(integrity_message([](Catalogue& c) { c.students.push_back({"s", "P", {}}); }), "");
}

TEST(KgStore, JsonRoundTripIsSemanticallyIdentical) {
  KgStore a = KgStore::build(credits_catalogue());
  KgStore b = KgStore::from_json(a.to_json());
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_EQ(b.course("C02").prerequisite_ids, (std::set<std::string>{"C00"}));
  EXPECT_EQ(b.student("s1").plan_id, "P1");
}

TEST(KgStore, LoadCatalogueWithChunkFile) {
  testing_util::TempDir dir;
  KgStore base = KgStore::build(small_catalogue(1, 1, 2));
  Json doc = base.to_json();
  std::string jsonl;
  for (const auto& c : doc["chunks"]) jsonl += c.dump() + "\n";
  doc.erase("chunks");
  testing_util::write_file(dir / "cat.json", doc.dump());
  testing_util::write_file(dir / "chunks.jsonl", jsonl);
  KgStore store = KgStore::load_catalogue(dir / "cat.json", dir / "chunks.jsonl");
  EXPECT_EQ(store.chunks().size(), 2u);
  testing_util::write_file(dir / "bad.json", "{\"courses\": [");
  EXPECT_THROW(KgStore::load_catalogue(dir / "bad.json"), ParseError);
}

TEST(Filter, EmptyConstraintsReturnEverything) {
  gen::Rng rng(7);
  KgStore store = KgStore::build(gen::catalogue_34(rng));
  EXPECT_EQ(filter_candidates(store, {}).size(), 34u);
}

TEST(Filter, MaxCreditsKeepsOnlySmallCourse) {
  KgStore store = KgStore::build(credits_catalogue());
  ConstraintSet cs;
  cs.max_credits = 6;
  EXPECT_EQ(filter_candidates(store, cs), (CourseSet{"C00"}));
}

TEST(Filter, PrerequisitesAgainstEmptyCompletedSet) {
  KgStore store = KgStore::build(credits_catalogue());
  ConstraintSet cs;
  cs.require_prerequisites_met = true;
  EXPECT_EQ(filter_candidates(store, cs), (CourseSet{"C00", "C01"}));
  cs.completed_course_ids = {"C00"};
  EXPECT_EQ(filter_candidates(store, cs), (CourseSet{"C00", "C01", "C02"}));
}

TEST(Filter, UnknownValuesAreErrors) {
  KgStore store = KgStore::build(credits_catalogue());
  ConstraintSet plan;
  plan.plan_id = "NOPE";
  EXPECT_THROW(filter_candidates(store, plan), ConstraintError);
  ConstraintSet disc;
  disc.discipline = "XYZ/99";
  EXPECT_THROW(filter_candidates(store, disc), ConstraintError);
  ConstraintSet range;
  range.min_credits = 9;
  range.max_credits = 6;
  EXPECT_THROW(filter_candidates(store, range), InvalidArgument);
}

TEST(Filter, StudentConstraints) {
  KgStore store = KgStore::build(credits_catalogue());
  EXPECT_EQ(filter_candidates(store, store.constraints_for_student("s1")),
            (CourseSet{"C00", "C02"}));
}

TEST(Filter, MatchesBruteForceOn34Courses) {
  gen::Rng rng(2024);
  KgStore store = KgStore::build(gen::catalogue_34(rng));
  for (int i = 0; i < 300; ++i) {
    ConstraintSet cs = gen::random_constraints(rng, store);
    EXPECT_EQ(filter_candidates(store, cs), naive::filter(store, cs))
        << constraints_to_json(cs).dump();
  }
}

TEST(Filter, ConjunctionIsIntersection) {
  gen::Rng rng(99);
  KgStore store = KgStore::build(gen::catalogue_34(rng));
  for (int i = 0; i < 300; ++i) {
    ConstraintSet a = gen::random_constraints(rng, store);
    ConstraintSet b;
    b.discipline = a.discipline;
    a.discipline.reset();
    if (gen::coin(rng)) std::swap(b.max_credits, a.max_credits);
    ConstraintSet both = a;
    both.discipline = b.discipline;
    if (b.max_credits) both.max_credits = b.max_credits;
    CourseSet fa = filter_candidates(store, a), fb = filter_candidates(store, b);
    CourseSet expect;
    std::set_intersection(fa.begin(), fa.end(), fb.begin(), fb.end(),
                          std::inserter(expect, expect.end()));
    if (both.min_credits && both.max_credits && *both.min_credits > *both.max_credits) {
      continue;
    }
    EXPECT_EQ(filter_candidates(store, both), expect);
  }
}

TEST(Constraints, JsonRoundTripAndUnknownField) {
  ConstraintSet cs;
  cs.plan_id = "P1";
  cs.max_credits = 9;
  cs.require_prerequisites_met = true;
  cs.completed_course_ids = {"C00"};
  Json j = constraints_to_json(cs);
  ConstraintSet back = constraints_from_json(j);
  EXPECT_EQ(constraints_to_json(back), j);
  EXPECT_THROW(constraints_from_json(Json{{"colour", "red"}}), InvalidArgument);
  EXPECT_THROW(constraints_from_json(Json{{"max_credits", "six"}}), InvalidArgument);
}

}  // namespace
}  // namespace ragear

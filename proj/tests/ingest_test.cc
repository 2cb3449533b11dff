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

#include "ragear/ingest.h"

#include <gtest/gtest.h>

#include <sstream>

#include "oracles/generators.h"
#include "oracles/invariants.h"
#include "ragear/text.h"
#include "test_util.h"

namespace ragear {
namespace {

std::vector<TimedWord> words_of(const std::string& text) {
  std::vector<TimedWord> out;
  std::istringstream in(text);
  std::string w;
  double t = 0;
  while (in >> w) {
    out.push_back({w, t, t + 0.5});
    t += 1.0;
  }
  return out;
}

TranscriptDoc doc_of(const std::string& text, const std::string& lesson = "L1") {
  return {lesson, "C1", words_of(text)};
}

// Exactly 100 characters: a ten-letter word, then nine nine-letter words,
// the last closing the sentence.
std::string sentence100(char fill) {
  std::string s(10, fill);
  for (int i = 0; i < 8; ++i) s += " " + std::string(9, fill);
  s += " " + std::string(8, fill) + ".";
  return s;
}

TEST(SplitSentences, TwoTerminalPeriods) {
  auto w = words_of("Hello world. Bye.");
  EXPECT_EQ(split_sentences(w), (std::vector<WordSpan>{{0, 2}, {2, 3}}));
}

TEST(SplitSentences, AbbreviationAndDecimalStayInOneSentence) {
  auto w = words_of("approx. 3.5 million items");
  EXPECT_EQ(split_sentences(w), (std::vector<WordSpan>{{0, 4}}));
  auto split_decimal = words_of("it costs 3. 5 euros");
  EXPECT_EQ(split_sentences(split_decimal).size(), 1u);
}

TEST(SplitSentences, SingleWordAndClosers) {
  EXPECT_EQ(split_sentences(words_of("hello")), (std::vector<WordSpan>{{0, 1}}));
  auto w = words_of("He said \"stop.\" Then left! Why? ok");
  EXPECT_EQ(split_sentences(w),
            (std::vector<WordSpan>{{0, 3}, {3, 5}, {5, 6}, {6, 7}}));
}

TEST(SplitSentences, ForcedCutAtMaxWords) {
  std::string text;
  for (int i = 0; i < 450; ++i) text += "w ";
  auto spans = split_sentences(words_of(text));
  ASSERT_EQ(spans.size(), 3u);
  EXPECT_EQ(spans[0].size(), 200u);
  EXPECT_EQ(spans[2].size(), 50u);
}

TEST(Chunking, ShortTranscriptIsOneChunk) {
  std::string text = "This is a short transcript of about fifty chars.";
  auto chunks = build_chunks(doc_of(text), {});
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(chunks[0].text, text);
  EXPECT_EQ(chunks[0].start_s, 0.0);
  EXPECT_EQ(chunks[0].end_s, 8.5);
}

TEST(Chunking, GreedyPackingSixThenFour) {
  std::string text;
  for (int i = 0; i < 10; ++i) text += sentence100(static_cast<char>('a' + i)) + " ";
  ASSERT_EQ(sentence100('a').size(), 100u);
  auto chunks = build_chunks(doc_of(text), {200, 600, 1200});
  ASSERT_EQ(chunks.size(), 2u);
  EXPECT_EQ(chunks[0].text.size(), 605u);
  EXPECT_EQ(chunks[1].text.size(), 403u);
  EXPECT_EQ(chunks[0].chunk_id, "L1#0");
  EXPECT_EQ(chunks[1].chunk_id, "L1#1");
}

TEST(Chunking, ShortTailMergesIntoPredecessor) {
  std::string text;
  for (int i = 0; i < 6; ++i) text += sentence100('a') + " ";
  std::string tail = "Short tail.";
  auto without = build_chunks(doc_of(text + sentence100('b') + " " + sentence100('c')),
                              {200, 600, 1200});
  auto with = build_chunks(doc_of(text + tail), {200, 600, 1200});
  EXPECT_EQ(without.size(), 2u);
  ASSERT_EQ(with.size(), 1u);
  EXPECT_NE(with[0].text.find(tail), std::string::npos);
}

TEST(Chunking, TailNotMergedPastMax) {
  std::string text;
  for (int i = 0; i < 6; ++i) text += sentence100('a') + " ";
  text += "Short tail.";
  auto chunks = build_chunks(doc_of(text), {200, 600, 610});
  EXPECT_EQ(chunks.size(), 2u);
}

TEST(Chunking, OversizedSentenceStandsAlone) {
  std::string big(1500, 'x');
  auto chunks = build_chunks(doc_of("Intro words here. " + big + ". After."), {5, 10, 100});
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[1].text.size(), 1501u);
}

TEST(Chunking, BadConfigRejected) {
  EXPECT_THROW(build_chunks(doc_of("a."), {0, 1, 2}), InvalidArgument);
  EXPECT_THROW(build_chunks(doc_of("a."), {5, 4, 10}), InvalidArgument);
  EXPECT_THROW(build_chunks(doc_of("a."), {1, 10, 9}), InvalidArgument);
}

TEST(Chunking, ZeroDurationChunkIsAnError) {
  TranscriptDoc doc{"L1", "C1", {{"a.", 1.0, 1.0}}};
  EXPECT_THROW(build_chunks(doc, {}), IntegrityError);
}

TEST(Chunking, RandomTranscriptsKeepInvariants) {
  gen::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    TranscriptDoc doc = gen::random_transcript(rng, "L" + std::to_string(i));
    ChunkingConfig cfg = gen::random_chunking(rng);
    EXPECT_EQ(invariants::check_ingest(doc, cfg), "") << "case " << i;
  }
}

TEST(Transcript, JsonRoundTrip) {
  TranscriptDoc doc = doc_of("One two. Three.");
  TranscriptDoc back = transcript_from_json(transcript_to_json(doc), "x");
  EXPECT_EQ(transcript_to_json(back), transcript_to_json(doc));
}

TEST(Transcript, OutOfOrderTimestampsNameDocAndWord) {
  Json j = transcript_to_json(doc_of("a b c d"));
  j["words"][2]["start_s"] = 0.2;
  try {
    transcript_from_json(j, "lesson7.json");
    FAIL();
  } catch (const IntegrityError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("lesson7.json"), std::string::npos) << msg;
    EXPECT_NE(msg.find("word 2"), std::string::npos) << msg;
  }
}

TEST(Transcript, MalformedDocuments) {
  EXPECT_THROW(transcript_from_json(Json::array(), "x"), ParseError);
  EXPECT_THROW(transcript_from_json(Json{{"lesson_id", "L"}, {"course_id", "C"}}, "x"),
               ParseError);
  Json j = transcript_to_json(doc_of("a b"));
  j["words"][0]["text"] = "two words";
  EXPECT_THROW(transcript_from_json(j, "x"), IntegrityError);
}

class CorpusTest : public ::testing::Test {
 protected:
  void write_doc(const TranscriptDoc& doc) {
    testing_util::write_file(dir_ / (doc.lesson_id + ".json"),
                             transcript_to_json(doc).dump(1));
  }
  testing_util::TempDir dir_;
};

TEST_F(CorpusTest, EmptyDirectoryGivesZeroStats) {
  IngestResult r = ingest_corpus(dir_.path(), {});
  EXPECT_TRUE(r.chunks.empty());
  EXPECT_EQ(r.stats.document_count, 0u);
  EXPECT_EQ(r.stats.chunk_count, 0u);
  EXPECT_EQ(r.stats.mean_chars, 0.0);
  EXPECT_EQ(r.stats.total_hours, 0.0);
}

TEST_F(CorpusTest, TwoDocsGiveUniqueGroupedIds) {
  gen::Rng rng(5);
  write_doc(gen::random_transcript(rng, "B-L01"));
  write_doc(gen::random_transcript(rng, "A-L01"));
  IngestResult r = ingest_corpus(dir_.path(), {20, 60, 120});
  std::set<std::string> ids;
  std::string prev_lesson;
  std::set<std::string> lessons_done;
  for (const Chunk& c : r.chunks) {
    EXPECT_TRUE(ids.insert(c.chunk_id).second);
    if (c.lesson_id != prev_lesson) {
      EXPECT_TRUE(lessons_done.insert(c.lesson_id).second) << "lesson not contiguous";
      prev_lesson = c.lesson_id;
    }
  }
  EXPECT_EQ(r.chunks.front().lesson_id, "A-L01");
  EXPECT_EQ(r.stats.document_count, 2u);
  EXPECT_EQ(r.stats.chunk_count, r.chunks.size());
}

TEST_F(CorpusTest, FailuresAreCollectedPerFile) {
  write_doc(doc_of("fine words."));
  testing_util::write_file(dir_ / "broken.json", "{not json");
  Json bad = transcript_to_json(doc_of("a b c", "L9"));
  bad["words"][1]["start_s"] = -1.0;
  testing_util::write_file(dir_ / "late.json", bad.dump());
  try {
    ingest_corpus(dir_.path(), {});
    FAIL();
  } catch (const IngestError& e) {
    ASSERT_EQ(e.failures().size(), 2u);
    EXPECT_NE(e.failures()[0].find("broken.json"), std::string::npos);
    EXPECT_NE(e.failures()[1].find("late.json"), std::string::npos);
  }
}

TEST_F(CorpusTest, DuplicateLessonAcrossFiles) {
  write_doc(doc_of("one.", "L1"));
  testing_util::write_file(dir_ / "copy.json", transcript_to_json(doc_of("two.", "L1")).dump());
  EXPECT_THROW(ingest_corpus(dir_.path(), {}), IngestError);
}

TEST_F(CorpusTest, StatsAndJsonlRoundTrip) {
  write_doc(doc_of("Hello world. Bye now."));
  IngestResult r = ingest_corpus(dir_.path(), {});
  ASSERT_EQ(r.chunks.size(), 1u);
  EXPECT_DOUBLE_EQ(r.stats.mean_chars, 21.0);
  EXPECT_DOUBLE_EQ(r.stats.total_hours, 3.5 / 3600.0);
  std::ostringstream out;
  write_chunks_jsonl(out, r.chunks);
  testing_util::write_file(dir_ / "chunks.jsonl", out.str());
  auto back = read_chunks_jsonl(dir_ / "chunks.jsonl");
  std::ostringstream again;
  write_chunks_jsonl(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST_F(CorpusTest, RerunIsByteIdentical) {
  gen::Rng rng(17);
  for (int i = 0; i < 5; ++i) write_doc(gen::random_transcript(rng, "L" + std::to_string(i)));
  std::ostringstream a, b;
  write_chunks_jsonl(a, ingest_corpus(dir_.path(), {}).chunks);
  write_chunks_jsonl(b, ingest_corpus(dir_.path(), {}).chunks);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Ingest, MissingDirectory) {
  EXPECT_THROW(ingest_corpus("/nonexistent/ragear", {}), NotFoundError);
}

}  // namespace
}  // namespace ragear

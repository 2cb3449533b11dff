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

#ifndef RAGEAR_INGEST_H_
#define RAGEAR_INGEST_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ragear/errors.h"
#include "ragear/json_util.h"
#include "ragear/kg_store.h"

namespace ragear {

struct TimedWord {
  std::string text;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct TranscriptDoc {
  std::string lesson_id;
  std::string course_id;
  std::vector<TimedWord> words;
};

struct ChunkingConfig {
  std::size_t min_chars = 200;
  std::size_t target_chars = 600;
  std::size_t max_chars = 1200;

  // Throws InvalidArgument unless 0 < min <= target <= max.
  void validate() const;
};

struct SplitterOptions {
  // Lowercased tokens, trailing period included ("e.g.", "approx.").
  std::set<std::string> abbreviations = default_abbreviations();
  std::size_t max_sentence_words = 200;

  static std::set<std::string> default_abbreviations();
};

// Half-open word-index range [begin, end).
struct WordSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const WordSpan&) const = default;
};

// Partitions the words into sentences. A sentence ends after a token whose
// last character (ignoring closing quotes/brackets) is '.', '!' or '?',
// unless it is a listed abbreviation or a number continued by the next
// token ("3." "5"). Sentences longer than max_sentence_words are cut.
std::vector<WordSpan> split_sentences(std::span<const TimedWord> words,
                                      const SplitterOptions& opts = {});

// Greedy sentence packing; each returned span covers whole sentences.
std::vector<WordSpan> plan_chunks(std::span<const TimedWord> words,
                                  const ChunkingConfig& cfg,
                                  const SplitterOptions& opts = {});

// Space-joined text of words[span].
std::string join_words(std::span<const TimedWord> words, WordSpan span);

// Chunks carry ids "<lesson_id>#<index>" and word-boundary timestamps.
std::vector<Chunk> build_chunks(const TranscriptDoc& doc,
                                const ChunkingConfig& cfg,
                                const SplitterOptions& opts = {});

// Parses and validates one transcript; errors name `source` and the
// offending word index.
TranscriptDoc transcript_from_json(const Json& obj, const std::string& source);
Json transcript_to_json(const TranscriptDoc& doc);

struct IngestStats {
  std::size_t document_count = 0;
  std::size_t chunk_count = 0;
  double mean_chars = 0.0;
  double total_hours = 0.0;

  Json to_json() const;
};

struct IngestResult {
  std::vector<Chunk> chunks;
  IngestStats stats;
};

// Thrown by ingest_corpus with every per-file failure listed.
class IngestError : public Error {
 public:
  explicit IngestError(std::vector<std::string> failures);
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

// Processes every *.json file of `transcript_dir` in sorted path order.
IngestResult ingest_corpus(const std::filesystem::path& transcript_dir,
                           const ChunkingConfig& cfg,
                           const SplitterOptions& opts = {});

IngestStats compute_stats(std::span<const Chunk> chunks,
                          std::size_t document_count);

// One compact JSON object per line, fields in a fixed order.
void write_chunks_jsonl(std::ostream& out, std::span<const Chunk> chunks);
std::vector<Chunk> read_chunks_jsonl(const std::filesystem::path& path);

}  // namespace ragear

#endif  // RAGEAR_INGEST_H_

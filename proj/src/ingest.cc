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

#include <algorithm>
#include <fstream>
#include <ostream>

#include "ragear/text.h"

namespace ragear {

void ChunkingConfig::validate() const {
  if (min_chars == 0 || min_chars > target_chars || target_chars > max_chars) {
    throw InvalidArgument(
        "chunking bounds must satisfy 0 < min_chars <= target_chars <= "
        "max_chars");
  }
}

std::set<std::string> SplitterOptions::default_abbreviations() {
  return {"approx.", "cf.",   "dr.",  "e.g.", "eq.",  "etc.", "fig.",
          "i.e.",    "mr.",   "mrs.", "ms.",  "no.",  "prof.", "sec.",
          "vs.",     "dott.", "ecc.", "es.",  "pag.", "sig.",  "ing."};
}

namespace {

bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']';
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

bool ends_sentence(const std::string& token, const std::string* next,
                   const SplitterOptions& opts) {
  std::size_t end = token.size();
  while (end > 0 && is_closer(token[end - 1])) --end;
  if (end == 0) return false;
  char last = token[end - 1];
  if (last == '!' || last == '?') return true;
  if (last != '.') return false;
  if (opts.abbreviations.count(to_lower_ascii(token.substr(0, end)))) {
    return false;
  }
  std::string_view body(token.data(), end - 1);
  if (all_digits(body) && next && !next->empty() && (*next)[0] >= '0' &&
      (*next)[0] <= '9') {
    return false;
  }
  return true;
}

std::size_t span_chars(std::span<const TimedWord> words, WordSpan span) {
  std::size_t n = 0;
  for (std::size_t i = span.begin; i < span.end; ++i) {
    n += utf8_length(words[i].text);
  }
  return n + (span.size() > 0 ? span.size() - 1 : 0);
}

}  // namespace

std::vector<WordSpan> split_sentences(std::span<const TimedWord> words,
                                      const SplitterOptions& opts) {
  std::vector<WordSpan> spans;
  const std::size_t cap = std::max<std::size_t>(1, opts.max_sentence_words);
  std::size_t begin = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string* next = i + 1 < words.size() ? &words[i + 1].text : nullptr;
    bool last = i + 1 == words.size();
    if (last || ends_sentence(words[i].text, next, opts) ||
        i + 1 - begin == cap) {
      spans.push_back({begin, i + 1});
      begin = i + 1;
    }
  }
  return spans;
}

std::vector<WordSpan> plan_chunks(std::span<const TimedWord> words,
                                  const ChunkingConfig& cfg,
                                  const SplitterOptions& opts) {
  cfg.validate();
  std::vector<WordSpan> chunks;
  std::vector<std::size_t> lengths;
  WordSpan cur{0, 0};
  std::size_t cur_len = 0;
  for (const WordSpan& s : split_sentences(words, opts)) {
    std::size_t len = span_chars(words, s);
    if (cur.size() > 0 &&
        (cur_len >= cfg.target_chars || cur_len + 1 + len > cfg.max_chars)) {
      chunks.push_back(cur);
      lengths.push_back(cur_len);
      cur = {s.begin, s.begin};
      cur_len = 0;
    }
    if (cur.size() == 0) {
      cur = s;
      cur_len = len;
    } else {
      cur.end = s.end;
      cur_len += 1 + len;
    }
  }
  if (cur.size() > 0) {
    chunks.push_back(cur);
    lengths.push_back(cur_len);
  }
  // A short tail joins its predecessor unless that would break max_chars.
  if (chunks.size() >= 2) {
    std::size_t n = chunks.size();
    if (lengths[n - 1] < cfg.min_chars &&
        lengths[n - 2] + 1 + lengths[n - 1] <= cfg.max_chars) {
      chunks[n - 2].end = chunks[n - 1].end;
      chunks.pop_back();
    }
  }
  return chunks;
}

std::string join_words(std::span<const TimedWord> words, WordSpan span) {
  std::string out;
  for (std::size_t i = span.begin; i < span.end; ++i) {
    if (i > span.begin) out.push_back(' ');
    out += words[i].text;
  }
  return out;
}

std::vector<Chunk> build_chunks(const TranscriptDoc& doc,
                                const ChunkingConfig& cfg,
                                const SplitterOptions& opts) {
  std::vector<Chunk> out;
  auto plans = plan_chunks(doc.words, cfg, opts);
  out.reserve(plans.size());
  for (std::size_t i = 0; i < plans.size(); ++i) {
    Chunk c;
    c.chunk_id = doc.lesson_id + "#" + std::to_string(i);
    c.lesson_id = doc.lesson_id;
    c.course_id = doc.course_id;
    c.index = static_cast<int>(i);
    c.text = join_words(doc.words, plans[i]);
    c.start_s = doc.words[plans[i].begin].start_s;
    c.end_s = doc.words[plans[i].end - 1].end_s;
    if (!(c.end_s > c.start_s)) {
      throw IntegrityError("lesson '" + doc.lesson_id + "': chunk " +
                           std::to_string(i) + " has zero duration");
    }
    out.push_back(std::move(c));
  }
  return out;
}

TranscriptDoc transcript_from_json(const Json& obj, const std::string& source) {
  if (!obj.is_object()) throw ParseError(source + ": not a JSON object");
  TranscriptDoc doc;
  doc.lesson_id = required<std::string>(obj, "lesson_id", source);
  doc.course_id = required<std::string>(obj, "course_id", source);
  Json words = required<Json>(obj, "words", source);
  if (!words.is_array() || words.empty()) {
    throw ParseError(source + ": 'words' must be a non-empty array");
  }
  doc.words.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string ctx = source + ": word " + std::to_string(i);
    TimedWord w{required<std::string>(words[i], "text", ctx),
                required<double>(words[i], "start_s", ctx),
                required<double>(words[i], "end_s", ctx)};
    if (w.text.empty() ||
        w.text.find_first_of(" \t\r\n") != std::string::npos) {
      throw IntegrityError(ctx + ": text must be a single non-empty token");
    }
    if (!(w.start_s >= 0.0) || !(w.end_s >= w.start_s)) {
      throw IntegrityError(ctx + ": invalid timestamps");
    }
    if (i > 0) {
      const TimedWord& prev = doc.words.back();
      if (w.start_s < prev.start_s || w.start_s < prev.end_s) {
        throw IntegrityError(ctx + ": out-of-order timestamps");
      }
    }
    doc.words.push_back(std::move(w));
  }
  return doc;
}

Json transcript_to_json(const TranscriptDoc& doc) {
  Json words = Json::array();
  for (const TimedWord& w : doc.words) {
    words.push_back({{"text", w.text}, {"start_s", w.start_s}, {"end_s", w.end_s}});
  }
  return Json{{"lesson_id", doc.lesson_id},
              {"course_id", doc.course_id},
              {"words", words}};
}

Json IngestStats::to_json() const {
  return Json{{"documents", document_count},
              {"chunks", chunk_count},
              {"mean_chars", mean_chars},
              {"total_hours", total_hours}};
}

IngestError::IngestError(std::vector<std::string> failures)
    : Error([&] {
        std::string msg = "ingestion failed for " +
                          std::to_string(failures.size()) + " file(s)";
        for (const auto& f : failures) msg += "\n  " + f;
        return msg;
      }()),
      failures_(std::move(failures)) {}

IngestStats compute_stats(std::span<const Chunk> chunks,
                          std::size_t document_count) {
  IngestStats stats;
  stats.document_count = document_count;
  stats.chunk_count = chunks.size();
  double chars = 0.0;
  double seconds = 0.0;
  for (const Chunk& c : chunks) {
    chars += static_cast<double>(utf8_length(c.text));
    seconds += c.end_s - c.start_s;
  }
  if (!chunks.empty()) stats.mean_chars = chars / chunks.size();
  stats.total_hours = seconds / 3600.0;
  return stats;
}

IngestResult ingest_corpus(const std::filesystem::path& transcript_dir,
                           const ChunkingConfig& cfg,
                           const SplitterOptions& opts) {
  cfg.validate();
  if (!std::filesystem::is_directory(transcript_dir)) {
    throw NotFoundError("transcript directory not found: " +
                        transcript_dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(transcript_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  IngestResult result;
  std::vector<std::string> failures;
  std::set<std::string> seen_lessons;
  for (const auto& file : files) {
    try {
      TranscriptDoc doc = transcript_from_json(load_json_file(file), file.string());
      if (!seen_lessons.insert(doc.lesson_id).second) {
        throw IntegrityError(file.string() + ": duplicate lesson_id '" +
                             doc.lesson_id + "'");
      }
      auto chunks = build_chunks(doc, cfg, opts);
      std::move(chunks.begin(), chunks.end(), std::back_inserter(result.chunks));
    } catch (const Error& e) {
      failures.push_back(e.what());
    }
  }
  if (!failures.empty()) throw IngestError(std::move(failures));
  result.stats = compute_stats(result.chunks, files.size());
  return result;
}

void write_chunks_jsonl(std::ostream& out, std::span<const Chunk> chunks) {
  for (const Chunk& c : chunks) out << chunk_to_json(c).dump() << '\n';
}

std::vector<Chunk> read_chunks_jsonl(const std::filesystem::path& path) {
  std::vector<Chunk> chunks;
  for_each_jsonl(path, [&](const Json& obj, std::size_t line) {
    chunks.push_back(
        chunk_from_json(obj, path.string() + ":" + std::to_string(line)));
  });
  return chunks;
}

}  // namespace ragear

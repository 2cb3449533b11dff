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

#ifndef RAGEAR_RETRIEVAL_H_
#define RAGEAR_RETRIEVAL_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ragear/embed.h"
#include "ragear/kg_store.h"

namespace ragear {

struct RetrievedChunk {
  std::string chunk_id;
  std::string course_id;
  std::string lesson_id;
  double score = 0.0;  // clamped cosine, in (0, 1]
  int rank = 0;        // 1-based

  bool operator==(const RetrievedChunk&) const = default;
};

// The top-k evidence set for one query. Chunks outside it score zero.
struct EvidenceSet {
  std::string query_id;
  int k = 200;
  std::vector<RetrievedChunk> items;  // by rank

  bool operator==(const EvidenceSet&) const = default;
};

// Cosine similarity in double precision. Throws DimensionError on unequal
// dims and InvalidArgument on a zero vector.
double cosine(const Embedding& a, const Embedding& b);

// Dot product with a fixed 16-lane accumulation order, so results do not
// depend on how the compiler vectorizes it.
float dot_f32(const float* a, const float* b, std::size_t n);

// Exact brute-force index over unit-normalized chunk vectors. Rows are kept
// in chunk_id order in one contiguous buffer; row order doubles as the
// tie-break order.
class DenseIndex {
 public:
  using Entry = std::pair<std::string, Embedding>;

  DenseIndex() = default;

  // Throws NotFoundError for a chunk unknown to the store, IntegrityError for
  // a duplicate id and DimensionError for mixed dims.
  static DenseIndex build(std::span<const Entry> chunks, const KgStore& store);

  // Scans the chunks of `candidates` only. Scores are max(0, cosine) capped
  // at 1; zero scores are dropped; the best k by (score desc, chunk_id asc)
  // are returned with ranks 1..n.
  EvidenceSet retrieve(const Embedding& query, const CourseSet& candidates,
                       int k = 200, std::string query_id = {}) const;

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return dim_; }
  std::span<const std::string> chunk_ids() const { return ids_; }
  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(rows_).subspan(i * dim_, dim_);
  }

  // Little-endian: magic "RGEIDX1\0", u32 dim, u64 count, count x (u32 length,
  // id bytes), then count x dim packed f32.
  void save(const std::filesystem::path& path) const;
  static DenseIndex load(const std::filesystem::path& path,
                         const KgStore& store);

 private:
  void attach(const KgStore& store);

  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> rows_;
  std::vector<std::uint32_t> row_course_;
  std::vector<std::string> row_lesson_;
  std::vector<std::string> course_names_;
  std::unordered_map<std::string, std::uint32_t> course_slot_;
};

}  // namespace ragear

#endif  // RAGEAR_RETRIEVAL_H_

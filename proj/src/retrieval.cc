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

#include "ragear/retrieval.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <queue>

#include "ragear/errors.h"

namespace ragear {

static_assert(std::endian::native == std::endian::little,
              "index file format assumes a little-endian host");

double cosine(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("cosine: dims " + std::to_string(a.dim()) + " and " +
                         std::to_string(b.dim()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    double x = a.values[i], y = b.values[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) throw InvalidArgument("cosine of a zero vector");
  double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

float dot_f32(const float* a, const float* b, std::size_t n) {
  constexpr std::size_t kLanes = 16;
  float acc[kLanes] = {};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t j = 0; j < kLanes; ++j) acc[j] += a[i + j] * b[i + j];
  }
  for (std::size_t j = 0; i < n; ++i, ++j) acc[j] += a[i] * b[i];
  for (std::size_t width = kLanes / 2; width > 0; width /= 2) {
    for (std::size_t j = 0; j < width; ++j) acc[j] += acc[j + width];
  }
  return acc[0];
}

DenseIndex DenseIndex::build(std::span<const Entry> chunks,
                             const KgStore& store) {
  DenseIndex index;
  std::vector<std::size_t> order(chunks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return chunks[a].first < chunks[b].first;
  });
  if (!chunks.empty()) index.dim_ = chunks[order[0]].second.dim();
  if (!chunks.empty() && index.dim_ == 0) {
    throw DimensionError("index rows must have positive dim");
  }
  index.ids_.reserve(chunks.size());
  index.rows_.reserve(chunks.size() * index.dim_);
  for (std::size_t n = 0; n < order.size(); ++n) {
    const auto& [id, emb] = chunks[order[n]];
    if (n > 0 && index.ids_.back() == id) {
      throw IntegrityError("duplicate chunk id '" + id + "' in index input");
    }
    if (emb.dim() != index.dim_) {
      throw DimensionError("chunk '" + id + "' has dim " +
                           std::to_string(emb.dim()) + ", expected " +
                           std::to_string(index.dim_));
    }
    Embedding unit = emb;
    normalize(unit);
    index.ids_.push_back(id);
    index.rows_.insert(index.rows_.end(), unit.values.begin(), unit.values.end());
  }
  index.attach(store);
  return index;
}

void DenseIndex::attach(const KgStore& store) {
  row_course_.resize(ids_.size());
  row_lesson_.resize(ids_.size());
  course_names_.clear();
  course_slot_.clear();
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!store.has_chunk(ids_[i])) {
      throw NotFoundError("index chunk '" + ids_[i] + "' is not in the catalogue");
    }
    const Chunk& c = store.chunk(ids_[i]);
    auto [it, inserted] = course_slot_.emplace(
        c.course_id, static_cast<std::uint32_t>(course_names_.size()));
    if (inserted) course_names_.push_back(c.course_id);
    row_course_[i] = it->second;
    row_lesson_[i] = c.lesson_id;
  }
}

namespace {

struct Hit {
  float score;
  std::uint32_t row;
};

// True when a ranks strictly before b.
bool better(const Hit& a, const Hit& b) {
  return a.score > b.score || (a.score == b.score && a.row < b.row);
}

}  // namespace

EvidenceSet DenseIndex::retrieve(const Embedding& query,
                                 const CourseSet& candidates, int k,
                                 std::string query_id) const {
  if (k < 1) throw InvalidArgument("retrieve: k must be >= 1");
  EvidenceSet out;
  out.query_id = std::move(query_id);
  out.k = k;
  if (ids_.empty() || candidates.empty()) return out;
  if (query.dim() != dim_) {
    throw DimensionError("query dim " + std::to_string(query.dim()) +
                         " does not match index dim " + std::to_string(dim_));
  }
  Embedding q = query;
  normalize(q);

  std::vector<char> allowed(course_names_.size(), 0);
  bool any = false;
  for (const auto& c : candidates) {
    auto it = course_slot_.find(c);
    if (it != course_slot_.end()) {
      allowed[it->second] = 1;
      any = true;
    }
  }
  if (!any) return out;

  const std::size_t limit = static_cast<std::size_t>(k);
  // Max-heap on "worse", so top() is the weakest kept hit.
  auto worse = [](const Hit& a, const Hit& b) { return better(a, b); };
  std::priority_queue<Hit, std::vector<Hit>, decltype(worse)> heap(worse);
  const float* qv = q.values.data();
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!allowed[row_course_[i]]) continue;
    float s = dot_f32(qv, rows_.data() + i * dim_, dim_);
    if (!(s > 0.0f)) continue;
    s = std::min(s, 1.0f);
    Hit h{s, static_cast<std::uint32_t>(i)};
    if (heap.size() < limit) {
      heap.push(h);
    } else if (better(h, heap.top())) {
      heap.pop();
      heap.push(h);
    }
  }
  std::vector<Hit> hits;
  hits.reserve(heap.size());
  while (!heap.empty()) {
    hits.push_back(heap.top());
    heap.pop();
  }
  std::sort(hits.begin(), hits.end(), better);
  out.items.reserve(hits.size());
  for (std::size_t r = 0; r < hits.size(); ++r) {
    const Hit& h = hits[r];
    out.items.push_back(RetrievedChunk{ids_[h.row],
                                       course_names_[row_course_[h.row]],
                                       row_lesson_[h.row],
                                       static_cast<double>(h.score),
                                       static_cast<int>(r + 1)});
  }
  return out;
}

namespace {

constexpr char kMagic[8] = {'R', 'G', 'E', 'I', 'D', 'X', '1', '\0'};

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& path) {
  T value;
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw ParseError(path + ": truncated index file");
  }
  return value;
}

}  // namespace

void DenseIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw NotFoundError("cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, static_cast<std::uint32_t>(dim_));
  write_pod(out, static_cast<std::uint64_t>(ids_.size()));
  for (const auto& id : ids_) {
    write_pod(out, static_cast<std::uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  out.write(reinterpret_cast<const char*>(rows_.data()),
            static_cast<std::streamsize>(rows_.size() * sizeof(float)));
  if (!out) throw Error("failed writing " + path.string());
}

DenseIndex DenseIndex::load(const std::filesystem::path& path,
                            const KgStore& store) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  const std::string name = path.string();
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError(name + ": not an index file");
  }
  DenseIndex index;
  index.dim_ = read_pod<std::uint32_t>(in, name);
  auto count = read_pod<std::uint64_t>(in, name);
  index.ids_.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    auto len = read_pod<std::uint32_t>(in, name);
    std::string id(len, '\0');
    if (!in.read(id.data(), len)) throw ParseError(name + ": truncated id table");
    if (!index.ids_.empty() && !(index.ids_.back() < id)) {
      throw ParseError(name + ": id table not strictly sorted");
    }
    index.ids_.push_back(std::move(id));
  }
  index.rows_.resize(count * index.dim_);
  if (!in.read(reinterpret_cast<char*>(index.rows_.data()),
               static_cast<std::streamsize>(index.rows_.size() * sizeof(float)))) {
    throw ParseError(name + ": truncated vector rows");
  }
  index.attach(store);
  return index;
}

}  // namespace ragear

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

#ifndef RAGEAR_KG_STORE_H_
#define RAGEAR_KG_STORE_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ragear/json_util.h"

namespace ragear {

using CourseSet = std::set<std::string>;

struct Course {
  std::string course_id;
  std::string title;
  std::string description;
  std::string instructor;
  int credits = 1;  // ECTS
  std::string discipline;  // e.g. "INF/01"
  std::set<std::string> prerequisite_ids;
  std::vector<std::string> lesson_ids;
};

struct Lesson {
  std::string lesson_id;
  std::string course_id;
  int index = 0;
  std::string title;
  std::optional<double> duration_s;
};

struct Chunk {
  std::string chunk_id;
  std::string lesson_id;
  std::string course_id;
  int index = 0;
  std::string text;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct StudyPlan {
  std::string plan_id;
  std::string name;
  std::set<std::string> course_ids;
};

struct Student {
  std::string student_id;
  std::string plan_id;
  std::set<std::string> completed_course_ids;
};

// Conjunctive symbolic filter. Absent fields are vacuously satisfied.
struct ConstraintSet {
  std::optional<std::string> plan_id;
  std::optional<int> max_credits;
  std::optional<int> min_credits;
  std::optional<std::string> discipline;
  bool require_prerequisites_met = false;
  std::set<std::string> completed_course_ids;
};

struct ChunkContext {
  const Chunk& chunk;
  const Lesson& lesson;
  const Course& course;
};

struct Catalogue {
  std::vector<Course> courses;
  std::vector<Lesson> lessons;
  std::vector<Chunk> chunks;
  std::vector<StudyPlan> study_plans;
  std::vector<Student> students;
};

// Immutable curricular graph. Lessons are stored grouped by course in
// lesson-index order and chunks grouped by lesson in chunk-index order, so
// containment queries return contiguous spans.
class KgStore {
 public:
  // Validates every referential invariant and throws IntegrityError naming the
  // first violation.
  static KgStore build(Catalogue catalogue);
  static KgStore from_json(const Json& doc);
  // `chunks_jsonl`, when given, supplies chunks in addition to any listed
  // under the catalogue's own "chunks" key.
  static KgStore load_catalogue(
      const std::filesystem::path& catalogue_file,
      const std::optional<std::filesystem::path>& chunks_jsonl = std::nullopt);

  Json to_json() const;

  std::span<const Course> courses() const { return courses_; }
  std::span<const Lesson> lessons() const { return lessons_; }
  std::span<const Chunk> chunks() const { return chunks_; }
  std::span<const StudyPlan> study_plans() const { return plans_; }
  std::span<const Student> students() const { return students_; }

  const Course& course(std::string_view course_id) const;
  const Lesson& lesson(std::string_view lesson_id) const;
  const Chunk& chunk(std::string_view chunk_id) const;
  const StudyPlan& study_plan(std::string_view plan_id) const;
  const Student& student(std::string_view student_id) const;

  bool has_course(std::string_view course_id) const;
  bool has_chunk(std::string_view chunk_id) const;
  bool has_discipline(std::string_view discipline) const;

  // Dense positions into courses()/lessons()/chunks().
  std::size_t course_index(std::string_view course_id) const;
  std::size_t lesson_index(std::string_view lesson_id) const;
  std::size_t chunk_index(std::string_view chunk_id) const;
  std::size_t course_index_of_lesson(std::size_t lesson_index) const {
    return lesson_course_[lesson_index];
  }
  std::size_t lesson_index_of_chunk(std::size_t chunk_index) const {
    return chunk_lesson_[chunk_index];
  }

  std::span<const Lesson> lessons_of(std::string_view course_id) const;
  std::span<const Chunk> chunks_of(std::string_view lesson_id) const;
  ChunkContext resolve_chunk(std::string_view chunk_id) const;

  // Plan + completed courses of a student, with prerequisites enforced.
  ConstraintSet constraints_for_student(std::string_view student_id) const;

 private:
  struct Range {
    std::size_t begin = 0;
    std::size_t end = 0;
  };

  KgStore() = default;
  void index_and_validate();

  std::vector<Course> courses_;
  std::vector<Lesson> lessons_;
  std::vector<Chunk> chunks_;
  std::vector<StudyPlan> plans_;
  std::vector<Student> students_;

  std::unordered_map<std::string, std::size_t> course_pos_;
  std::unordered_map<std::string, std::size_t> lesson_pos_;
  std::unordered_map<std::string, std::size_t> chunk_pos_;
  std::unordered_map<std::string, std::size_t> plan_pos_;
  std::unordered_map<std::string, std::size_t> student_pos_;
  std::set<std::string, std::less<>> disciplines_;

  std::vector<Range> course_lessons_;
  std::vector<Range> lesson_chunks_;
  std::vector<std::size_t> lesson_course_;
  std::vector<std::size_t> chunk_lesson_;
};

// Exactly the courses satisfying every present constraint, in id order.
// Throws ConstraintError for unknown plan, discipline or completed course,
// InvalidArgument for an inconsistent credit range.
CourseSet filter_candidates(const KgStore& store,
                            const ConstraintSet& constraints);

Json chunk_to_json(const Chunk& chunk);
Chunk chunk_from_json(const Json& obj, std::string_view context);
ConstraintSet constraints_from_json(const Json& obj);
Json constraints_to_json(const ConstraintSet& constraints);

}  // namespace ragear

#endif  // RAGEAR_KG_STORE_H_

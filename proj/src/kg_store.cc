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

#include <algorithm>
#include <deque>
#include <map>

#include "ragear/errors.h"

namespace ragear {
namespace {

template <typename Map>
std::size_t find_pos(const Map& map, std::string_view id,
                     std::string_view kind) {
  auto it = map.find(std::string(id));
  if (it == map.end()) {
    throw NotFoundError("unknown " + std::string(kind) + " '" +
                        std::string(id) + "'");
  }
  return it->second;
}

template <typename T, typename IdFn>
std::unordered_map<std::string, std::size_t> index_unique(
    const std::vector<T>& items, IdFn id_of, std::string_view kind) {
  std::unordered_map<std::string, std::size_t> pos;
  pos.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string& id = id_of(items[i]);
    if (id.empty()) {
      throw IntegrityError(std::string(kind) + " #" + std::to_string(i) +
                           " has an empty id");
    }
    if (!pos.emplace(id, i).second) {
      throw IntegrityError("duplicate " + std::string(kind) + " id '" + id +
                           "'");
    }
  }
  return pos;
}

void check_prerequisites_acyclic(const std::vector<Course>& courses,
                                 const std::unordered_map<std::string,
                                                          std::size_t>& pos) {
  // Kahn's algorithm over edges prerequisite -> dependent.
  std::vector<std::size_t> indegree(courses.size(), 0);
  std::vector<std::vector<std::size_t>> dependents(courses.size());
  for (std::size_t i = 0; i < courses.size(); ++i) {
    for (const auto& pre : courses[i].prerequisite_ids) {
      dependents[pos.at(pre)].push_back(i);
      ++indegree[i];
    }
  }
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < courses.size(); ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    std::size_t c = ready.front();
    ready.pop_front();
    ++visited;
    for (std::size_t d : dependents[c]) {
      if (--indegree[d] == 0) ready.push_back(d);
    }
  }
  if (visited != courses.size()) {
    for (std::size_t i = 0; i < courses.size(); ++i) {
      if (indegree[i] != 0) {
        throw IntegrityError("cyclic prerequisites involving course '" +
                             courses[i].course_id + "'");
      }
    }
  }
}

Course course_from_json(const Json& obj, std::size_t i) {
  const std::string ctx = "courses[" + std::to_string(i) + "]";
  Course c;
  c.course_id = required<std::string>(obj, "course_id", ctx);
  c.title = required<std::string>(obj, "title", ctx);
  c.description = optional_or<std::string>(obj, "description", "", ctx);
  c.instructor = optional_or<std::string>(obj, "instructor", "", ctx);
  c.credits = required<int>(obj, "credits", ctx);
  c.discipline = required<std::string>(obj, "discipline", ctx);
  c.prerequisite_ids =
      optional_or<std::set<std::string>>(obj, "prerequisite_ids", {}, ctx);
  c.lesson_ids = optional_or<std::vector<std::string>>(obj, "lesson_ids", {},
                                                       ctx);
  return c;
}

Lesson lesson_from_json(const Json& obj, std::size_t i) {
  const std::string ctx = "lessons[" + std::to_string(i) + "]";
  Lesson l;
  l.lesson_id = required<std::string>(obj, "lesson_id", ctx);
  l.course_id = required<std::string>(obj, "course_id", ctx);
  l.index = required<int>(obj, "index", ctx);
  l.title = optional_or<std::string>(obj, "title", "", ctx);
  if (obj.contains("duration_s") && !obj["duration_s"].is_null()) {
    l.duration_s = required<double>(obj, "duration_s", ctx);
  }
  return l;
}

template <typename T, typename Fn>
std::vector<T> parse_array(const Json& doc, std::string_view key,
                           bool mandatory, Fn parse) {
  std::vector<T> out;
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) {
    if (mandatory) {
      throw ParseError("catalogue: missing top-level key '" +
                       std::string(key) + "'");
    }
    return out;
  }
  if (!it->is_array()) {
    throw ParseError("catalogue: '" + std::string(key) + "' is not an array");
  }
  out.reserve(it->size());
  for (std::size_t i = 0; i < it->size(); ++i) out.push_back(parse((*it)[i], i));
  return out;
}

}  // namespace

Chunk chunk_from_json(const Json& obj, std::string_view context) {
  Chunk c;
  c.chunk_id = required<std::string>(obj, "chunk_id", context);
  c.lesson_id = required<std::string>(obj, "lesson_id", context);
  c.course_id = required<std::string>(obj, "course_id", context);
  c.index = required<int>(obj, "index", context);
  c.text = required<std::string>(obj, "text", context);
  c.start_s = required<double>(obj, "start_s", context);
  c.end_s = required<double>(obj, "end_s", context);
  return c;
}

Json chunk_to_json(const Chunk& chunk) {
  return Json{{"chunk_id", chunk.chunk_id}, {"lesson_id", chunk.lesson_id},
              {"course_id", chunk.course_id}, {"index", chunk.index},
              {"text", chunk.text},           {"start_s", chunk.start_s},
              {"end_s", chunk.end_s}};
}

KgStore KgStore::build(Catalogue catalogue) {
  KgStore store;
  store.courses_ = std::move(catalogue.courses);
  store.lessons_ = std::move(catalogue.lessons);
  store.chunks_ = std::move(catalogue.chunks);
  store.plans_ = std::move(catalogue.study_plans);
  store.students_ = std::move(catalogue.students);
  store.index_and_validate();
  return store;
}

KgStore KgStore::from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("catalogue: top level is not an object");
  Catalogue cat;
  cat.courses = parse_array<Course>(doc, "courses", true, course_from_json);
  cat.lessons = parse_array<Lesson>(doc, "lessons", true, lesson_from_json);
  cat.chunks = parse_array<Chunk>(
      doc, "chunks", false, [](const Json& obj, std::size_t i) {
        return chunk_from_json(obj, "chunks[" + std::to_string(i) + "]");
      });
  cat.study_plans = parse_array<StudyPlan>(
      doc, "study_plans", false, [](const Json& obj, std::size_t i) {
        const std::string ctx = "study_plans[" + std::to_string(i) + "]";
        return StudyPlan{required<std::string>(obj, "plan_id", ctx),
                         optional_or<std::string>(obj, "name", "", ctx),
                         required<std::set<std::string>>(obj, "course_ids", ctx)};
      });
  cat.students = parse_array<Student>(
      doc, "students", false, [](const Json& obj, std::size_t i) {
        const std::string ctx = "students[" + std::to_string(i) + "]";
        return Student{required<std::string>(obj, "student_id", ctx),
                       required<std::string>(obj, "plan_id", ctx),
                       optional_or<std::set<std::string>>(
                           obj, "completed_course_ids", {}, ctx)};
      });
  return build(std::move(cat));
}

KgStore KgStore::load_catalogue(
    const std::filesystem::path& catalogue_file,
    const std::optional<std::filesystem::path>& chunks_jsonl) {
  Json doc = load_json_file(catalogue_file);
  if (chunks_jsonl) {
    if (!doc.is_object()) {
      throw ParseError("catalogue: top level is not an object");
    }
    Json& chunks = doc["chunks"];
    if (chunks.is_null()) chunks = Json::array();
    for_each_jsonl(*chunks_jsonl, [&](const Json& obj, std::size_t) {
      chunks.push_back(obj);
    });
  }
  return from_json(doc);
}

void KgStore::index_and_validate() {
  std::sort(courses_.begin(), courses_.end(),
            [](const Course& a, const Course& b) {
              return a.course_id < b.course_id;
            });
  course_pos_ = index_unique(
      courses_, [](const Course& c) -> const std::string& { return c.course_id; },
      "course");
  for (const Course& c : courses_) {
    if (c.credits < 1) {
      throw IntegrityError("course '" + c.course_id + "' has credits < 1");
    }
    for (const auto& pre : c.prerequisite_ids) {
      if (pre == c.course_id) {
        throw IntegrityError("course '" + c.course_id +
                             "' lists itself as a prerequisite");
      }
      if (!course_pos_.count(pre)) {
        throw IntegrityError("course '" + c.course_id +
                             "' has dangling prerequisite '" + pre + "'");
      }
    }
    disciplines_.insert(c.discipline);
  }
  check_prerequisites_acyclic(courses_, course_pos_);

  // Lessons: each course's lesson_ids must name exactly its lessons, with
  // lesson_ids[i].index == i.
  {
    auto pos = index_unique(
        lessons_, [](const Lesson& l) -> const std::string& { return l.lesson_id; },
        "lesson");
    std::vector<std::size_t> claimed(lessons_.size(), courses_.size());
    std::vector<Lesson> ordered;
    ordered.reserve(lessons_.size());
    course_lessons_.assign(courses_.size(), {});
    for (std::size_t ci = 0; ci < courses_.size(); ++ci) {
      const Course& c = courses_[ci];
      course_lessons_[ci].begin = ordered.size();
      for (std::size_t i = 0; i < c.lesson_ids.size(); ++i) {
        auto it = pos.find(c.lesson_ids[i]);
        if (it == pos.end()) {
          throw IntegrityError("course '" + c.course_id +
                               "' lists dangling lesson '" + c.lesson_ids[i] +
                               "'");
        }
        const Lesson& l = lessons_[it->second];
        if (l.course_id != c.course_id || claimed[it->second] != courses_.size()) {
          throw IntegrityError("lesson '" + l.lesson_id +
                               "' is not owned exclusively by course '" +
                               c.course_id + "'");
        }
        if (l.index != static_cast<int>(i)) {
          throw IntegrityError("lesson '" + l.lesson_id + "' has index " +
                               std::to_string(l.index) + " but is listed at " +
                               std::to_string(i) + " in course '" +
                               c.course_id + "'");
        }
        claimed[it->second] = ci;
        ordered.push_back(l);
      }
      course_lessons_[ci].end = ordered.size();
    }
    for (std::size_t i = 0; i < lessons_.size(); ++i) {
      if (claimed[i] == courses_.size()) {
        const Lesson& l = lessons_[i];
        if (!course_pos_.count(l.course_id)) {
          throw IntegrityError("lesson '" + l.lesson_id +
                               "' references unknown course '" + l.course_id +
                               "'");
        }
        throw IntegrityError("lesson '" + l.lesson_id +
                             "' is missing from lesson_ids of course '" +
                             l.course_id + "'");
      }
      if (lessons_[i].duration_s && *lessons_[i].duration_s < 0) {
        throw IntegrityError("lesson '" + lessons_[i].lesson_id +
                             "' has negative duration");
      }
    }
    lessons_ = std::move(ordered);
    lesson_pos_ = index_unique(
        lessons_, [](const Lesson& l) -> const std::string& { return l.lesson_id; },
        "lesson");
    lesson_course_.resize(lessons_.size());
    for (std::size_t ci = 0; ci < courses_.size(); ++ci) {
      for (std::size_t li = course_lessons_[ci].begin;
           li < course_lessons_[ci].end; ++li) {
        lesson_course_[li] = ci;
      }
    }
  }

  // Chunks.
  index_unique(
      chunks_, [](const Chunk& c) -> const std::string& { return c.chunk_id; },
      "chunk");
  for (const Chunk& ch : chunks_) {
    auto it = lesson_pos_.find(ch.lesson_id);
    if (it == lesson_pos_.end()) {
      throw IntegrityError("chunk '" + ch.chunk_id +
                           "' references unknown lesson '" + ch.lesson_id + "'");
    }
    const Lesson& l = lessons_[it->second];
    if (ch.course_id != l.course_id) {
      throw IntegrityError("chunk '" + ch.chunk_id + "' has course_id '" +
                           ch.course_id + "' but its lesson belongs to '" +
                           l.course_id + "'");
    }
    if (ch.text.empty()) {
      throw IntegrityError("chunk '" + ch.chunk_id + "' has empty text");
    }
    if (!(ch.start_s >= 0.0) || !(ch.end_s > ch.start_s)) {
      throw IntegrityError("chunk '" + ch.chunk_id +
                           "' has an invalid time interval");
    }
  }
  std::stable_sort(chunks_.begin(), chunks_.end(),
                   [this](const Chunk& a, const Chunk& b) {
                     std::size_t la = lesson_pos_.at(a.lesson_id);
                     std::size_t lb = lesson_pos_.at(b.lesson_id);
                     if (la != lb) return la < lb;
                     return a.index < b.index;
                   });
  lesson_chunks_.assign(lessons_.size(), {});
  chunk_lesson_.resize(chunks_.size());
  for (std::size_t i = 0; i < chunks_.size(); ++i) {
    std::size_t li = lesson_pos_.at(chunks_[i].lesson_id);
    chunk_lesson_[i] = li;
    if (i == 0 || chunk_lesson_[i - 1] != li) {
      lesson_chunks_[li].begin = i;
    } else {
      const Chunk& prev = chunks_[i - 1];
      const Chunk& cur = chunks_[i];
      if (prev.index == cur.index) {
        throw IntegrityError("chunks '" + prev.chunk_id + "' and '" +
                             cur.chunk_id + "' share index " +
                             std::to_string(cur.index));
      }
      if (prev.end_s > cur.start_s) {
        throw IntegrityError("chunk '" + cur.chunk_id +
                             "' overlaps the interval of chunk '" +
                             prev.chunk_id + "'");
      }
    }
    lesson_chunks_[li].end = i + 1;
  }
  chunk_pos_ = index_unique(
      chunks_, [](const Chunk& c) -> const std::string& { return c.chunk_id; },
      "chunk");

  std::sort(plans_.begin(), plans_.end(),
            [](const StudyPlan& a, const StudyPlan& b) {
              return a.plan_id < b.plan_id;
            });
  plan_pos_ = index_unique(
      plans_, [](const StudyPlan& p) -> const std::string& { return p.plan_id; },
      "study plan");
  for (const StudyPlan& p : plans_) {
    for (const auto& c : p.course_ids) {
      if (!course_pos_.count(c)) {
        throw IntegrityError("study plan '" + p.plan_id +
                             "' references unknown course '" + c + "'");
      }
    }
  }
  std::sort(students_.begin(), students_.end(),
            [](const Student& a, const Student& b) {
              return a.student_id < b.student_id;
            });
  student_pos_ = index_unique(
      students_,
      [](const Student& s) -> const std::string& { return s.student_id; },
      "student");
  for (const Student& s : students_) {
    if (!plan_pos_.count(s.plan_id)) {
      throw IntegrityError("student '" + s.student_id +
                           "' references unknown study plan '" + s.plan_id +
                           "'");
    }
    for (const auto& c : s.completed_course_ids) {
      if (!course_pos_.count(c)) {
        throw IntegrityError("student '" + s.student_id +
                             "' completed unknown course '" + c + "'");
      }
    }
  }
}

Json KgStore::to_json() const {
  Json courses = Json::array();
  for (const Course& c : courses_) {
    courses.push_back({{"course_id", c.course_id},
                       {"title", c.title},
                       {"description", c.description},
                       {"instructor", c.instructor},
                       {"credits", c.credits},
                       {"discipline", c.discipline},
                       {"prerequisite_ids", c.prerequisite_ids},
                       {"lesson_ids", c.lesson_ids}});
  }
  Json lessons = Json::array();
  for (const Lesson& l : lessons_) {
    Json obj{{"lesson_id", l.lesson_id},
             {"course_id", l.course_id},
             {"index", l.index},
             {"title", l.title}};
    if (l.duration_s) obj["duration_s"] = *l.duration_s;
    lessons.push_back(std::move(obj));
  }
  Json chunks = Json::array();
  for (const Chunk& c : chunks_) chunks.push_back(chunk_to_json(c));
  Json plans = Json::array();
  for (const StudyPlan& p : plans_) {
    plans.push_back(
        {{"plan_id", p.plan_id}, {"name", p.name}, {"course_ids", p.course_ids}});
  }
  Json students = Json::array();
  for (const Student& s : students_) {
    students.push_back({{"student_id", s.student_id},
                        {"plan_id", s.plan_id},
                        {"completed_course_ids", s.completed_course_ids}});
  }
  return Json{{"courses", courses},
              {"lessons", lessons},
              {"chunks", chunks},
              {"study_plans", plans},
              {"students", students}};
}

const Course& KgStore::course(std::string_view id) const {
  return courses_[find_pos(course_pos_, id, "course")];
}
const Lesson& KgStore::lesson(std::string_view id) const {
  return lessons_[find_pos(lesson_pos_, id, "lesson")];
}
const Chunk& KgStore::chunk(std::string_view id) const {
  return chunks_[find_pos(chunk_pos_, id, "chunk")];
}
const StudyPlan& KgStore::study_plan(std::string_view id) const {
  return plans_[find_pos(plan_pos_, id, "study plan")];
}
const Student& KgStore::student(std::string_view id) const {
  return students_[find_pos(student_pos_, id, "student")];
}

bool KgStore::has_course(std::string_view id) const {
  return course_pos_.count(std::string(id)) != 0;
}
bool KgStore::has_chunk(std::string_view id) const {
  return chunk_pos_.count(std::string(id)) != 0;
}
bool KgStore::has_discipline(std::string_view d) const {
  return disciplines_.find(d) != disciplines_.end();
}

std::size_t KgStore::course_index(std::string_view id) const {
  return find_pos(course_pos_, id, "course");
}
std::size_t KgStore::lesson_index(std::string_view id) const {
  return find_pos(lesson_pos_, id, "lesson");
}
std::size_t KgStore::chunk_index(std::string_view id) const {
  return find_pos(chunk_pos_, id, "chunk");
}

std::span<const Lesson> KgStore::lessons_of(std::string_view course_id) const {
  const Range& r = course_lessons_[course_index(course_id)];
  return std::span<const Lesson>(lessons_).subspan(r.begin, r.end - r.begin);
}

std::span<const Chunk> KgStore::chunks_of(std::string_view lesson_id) const {
  const Range& r = lesson_chunks_[lesson_index(lesson_id)];
  return std::span<const Chunk>(chunks_).subspan(r.begin, r.end - r.begin);
}

ChunkContext KgStore::resolve_chunk(std::string_view chunk_id) const {
  std::size_t ci = chunk_index(chunk_id);
  std::size_t li = chunk_lesson_[ci];
  return ChunkContext{chunks_[ci], lessons_[li], courses_[lesson_course_[li]]};
}

ConstraintSet KgStore::constraints_for_student(std::string_view id) const {
  const Student& s = student(id);
  ConstraintSet cs;
  cs.plan_id = s.plan_id;
  cs.require_prerequisites_met = true;
  cs.completed_course_ids = s.completed_course_ids;
  return cs;
}

CourseSet filter_candidates(const KgStore& store, const ConstraintSet& cs) {
  if (cs.max_credits && *cs.max_credits < 1) {
    throw InvalidArgument("max_credits must be positive");
  }
  if (cs.min_credits && *cs.min_credits < 1) {
    throw InvalidArgument("min_credits must be positive");
  }
  if (cs.min_credits && cs.max_credits && *cs.min_credits > *cs.max_credits) {
    throw InvalidArgument("min_credits exceeds max_credits");
  }
  const StudyPlan* plan = nullptr;
  if (cs.plan_id) {
    try {
      plan = &store.study_plan(*cs.plan_id);
    } catch (const NotFoundError&) {
      throw ConstraintError("unknown study plan '" + *cs.plan_id + "'");
    }
  }
  if (cs.discipline && !store.has_discipline(*cs.discipline)) {
    throw ConstraintError("unknown discipline '" + *cs.discipline + "'");
  }
  if (cs.require_prerequisites_met) {
    for (const auto& c : cs.completed_course_ids) {
      if (!store.has_course(c)) {
        throw ConstraintError("unknown completed course '" + c + "'");
      }
    }
  }

  CourseSet out;
  for (const Course& c : store.courses()) {
    if (plan && !plan->course_ids.count(c.course_id)) continue;
    if (cs.max_credits && c.credits > *cs.max_credits) continue;
    if (cs.min_credits && c.credits < *cs.min_credits) continue;
    if (cs.discipline && c.discipline != *cs.discipline) continue;
    if (cs.require_prerequisites_met &&
        !std::includes(cs.completed_course_ids.begin(),
                       cs.completed_course_ids.end(),
                       c.prerequisite_ids.begin(), c.prerequisite_ids.end())) {
      continue;
    }
    out.insert(c.course_id);
  }
  return out;
}

ConstraintSet constraints_from_json(const Json& obj) {
  if (!obj.is_object()) throw InvalidArgument("constraints must be an object");
  static const std::set<std::string> known = {
      "plan_id",    "max_credits",  "min_credits", "discipline",
      "require_prerequisites_met", "completed_course_ids"};
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) {
      throw InvalidArgument("unknown constraint field '" + key + "'");
    }
  }
  ConstraintSet cs;
  try {
    if (obj.contains("plan_id") && !obj["plan_id"].is_null()) {
      cs.plan_id = required<std::string>(obj, "plan_id", "constraints");
    }
    if (obj.contains("max_credits") && !obj["max_credits"].is_null()) {
      cs.max_credits = required<int>(obj, "max_credits", "constraints");
    }
    if (obj.contains("min_credits") && !obj["min_credits"].is_null()) {
      cs.min_credits = required<int>(obj, "min_credits", "constraints");
    }
    if (obj.contains("discipline") && !obj["discipline"].is_null()) {
      cs.discipline = required<std::string>(obj, "discipline", "constraints");
    }
    cs.require_prerequisites_met = optional_or<bool>(
        obj, "require_prerequisites_met", false, "constraints");
    cs.completed_course_ids = optional_or<std::set<std::string>>(
        obj, "completed_course_ids", {}, "constraints");
  } catch (const ParseError& e) {
    throw InvalidArgument(e.what());
  }
  return cs;
}

Json constraints_to_json(const ConstraintSet& cs) {
  Json obj = Json::object();
  if (cs.plan_id) obj["plan_id"] = *cs.plan_id;
  if (cs.max_credits) obj["max_credits"] = *cs.max_credits;
  if (cs.min_credits) obj["min_credits"] = *cs.min_credits;
  if (cs.discipline) obj["discipline"] = *cs.discipline;
  if (cs.require_prerequisites_met) {
    obj["require_prerequisites_met"] = true;
    obj["completed_course_ids"] = cs.completed_course_ids;
  }
  return obj;
}

}  // namespace ragear

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

#include "ragear/service.h"

#include <chrono>

#include "httplib.h"
#include "ragear/errors.h"

namespace ragear {
namespace {

constexpr int kMaxTopN = 50;

Json error_body(const std::string& message) { return Json{{"error", message}}; }

Json chunk_json(const RetrievedChunk& item, const KgStore& store) {
  ChunkContext ctx = store.resolve_chunk(item.chunk_id);
  return Json{{"chunk_id", item.chunk_id},
              {"lesson_id", item.lesson_id},
              {"lesson_title", ctx.lesson.title},
              {"text", ctx.chunk.text},
              {"start_s", ctx.chunk.start_s},
              {"end_s", ctx.chunk.end_s},
              {"similarity", item.score},
              {"rank", item.rank}};
}

Json course_summary(const Course& c) {
  return Json{{"course_id", c.course_id},
              {"title", c.title},
              {"instructor", c.instructor},
              {"credits", c.credits},
              {"discipline", c.discipline},
              {"description", c.description}};
}

}  // namespace

Json recommendation_json(const QueryResult& result, const KgStore& store,
                         int top_n, std::optional<std::size_t> evidence_cap) {
  Json courses = Json::array();
  std::size_t n = std::min<std::size_t>(std::max(top_n, 0),
                                        result.ranking.items.size());
  for (std::size_t i = 0; i < n; ++i) {
    const RankedCourse& item = result.ranking.items[i];
    const CourseScore& parts = result.breakdown[i];
    Json c = course_summary(store.course(item.course_id));
    c["rank"] = i + 1;
    c["score"] = item.score;
    c["rs"] = parts.rs;
    c["ge"] = parts.global_evidence;
    c["re"] = parts.ranked_evidence;
    c["lc"] = parts.lesson_coverage;
    Json chunks = Json::array();
    std::size_t shown = parts.supporting_chunks.size();
    if (evidence_cap) shown = std::min(shown, *evidence_cap);
    for (std::size_t m = 0; m < shown; ++m) {
      chunks.push_back(chunk_json(parts.supporting_chunks[m], store));
    }
    c["supporting_chunks"] = std::move(chunks);
    c["evidence_total"] = parts.supporting_chunks.size();
    courses.push_back(std::move(c));
  }
  Json out{{"query", result.context.text},
           {"method", result.ranking.method},
           {"t_q", result.context.t_q},
           {"k", result.context.k},
           {"candidate_count", result.candidates.size()},
           {"evidence_count", result.evidence.items.size()},
           {"courses", std::move(courses)},
           {"timing_ms",
            {{"embed", result.embed_ms},
             {"retrieve", result.retrieve_ms},
             {"score", result.score_ms}}}};
  if (!result.context.query_id.empty()) out["query_id"] = result.context.query_id;
  if (result.candidates.empty()) {
    out["note"] = "no course satisfies the given constraints";
  } else if (out["courses"].empty()) {
    out["note"] = "no course has supporting evidence for this query";
  }
  return out;
}

int status_for_exception(const std::exception& e) {
  if (dynamic_cast<const InvalidArgument*>(&e) ||
      dynamic_cast<const ParseError*>(&e)) {
    return 400;
  }
  if (dynamic_cast<const ConstraintError*>(&e)) return 422;
  if (dynamic_cast<const TransportError*>(&e)) return 502;
  return 500;
}

RecommendRequest RecommendRequest::from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("request body must be a JSON object");
  static const std::set<std::string> kKnown = {"query", "query_id", "constraints",
                                               "method", "top_n", "t_q"};
  for (const auto& [key, _] : j.items()) {
    if (!kKnown.count(key)) throw InvalidArgument("unknown field '" + key + "'");
  }
  RecommendRequest r;
  constexpr std::string_view ctx = "request";
  try {
    r.query.text = required<std::string>(j, "query", ctx);
    r.query.query_id = optional_or<std::string>(j, "query_id", "", ctx);
    r.query.method = parse_method(optional_or<std::string>(j, "method", "ragear", ctx));
    r.top_n = optional_or<int>(j, "top_n", r.top_n, ctx);
    if (j.contains("t_q") && !j["t_q"].is_null()) {
      r.query.t_q = required<int>(j, "t_q", ctx);
    }
  } catch (const ParseError& e) {
    throw InvalidArgument(e.what());
  }
  if (auto it = j.find("constraints"); it != j.end() && !it->is_null()) {
    r.query.constraints = constraints_from_json(*it);
  }
  bool blank = r.query.text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (blank) throw InvalidArgument("query must not be empty");
  if (r.top_n < 1 || r.top_n > kMaxTopN) {
    throw InvalidArgument("top_n must be in 1.." + std::to_string(kMaxTopN));
  }
  if (r.query.t_q && *r.query.t_q < 1) throw InvalidArgument("t_q must be >= 1");
  return r;
}

RecommenderService::RecommenderService(ServiceOptions options)
    : options_(std::move(options)) {
  if (options_.evidence_cap < 1) {
    throw InvalidArgument("evidence_cap must be >= 1");
  }
}

void RecommenderService::set_snapshot(std::shared_ptr<const Snapshot> snapshot) {
  if (snapshot) snapshot->check();
  std::lock_guard lock(mu_);
  snapshot_ = std::move(snapshot);
}

std::shared_ptr<const Snapshot> RecommenderService::snapshot() const {
  std::lock_guard lock(mu_);
  return snapshot_;
}

HttpReply RecommenderService::not_ready() const {
  return {503, Json{{"status", "loading"}, {"error", "index not loaded yet"}}, {}};
}

HttpReply RecommenderService::recommend(const std::string& body,
                                        bool all_evidence) const {
  auto snap = snapshot();
  if (!snap) return not_ready();
  auto start = std::chrono::steady_clock::now();
  try {
    Json j;
    try {
      j = Json::parse(body);
    } catch (const Json::exception&) {
      throw InvalidArgument("request body is not valid JSON");
    }
    RecommendRequest req = RecommendRequest::from_json(j);
    QueryResult result = run_query(*snap, req.query);
    std::optional<std::size_t> cap;
    if (!all_evidence) cap = static_cast<std::size_t>(options_.evidence_cap);
    Json out = recommendation_json(result, *snap->store, req.top_n, cap);
    out["timing_ms"]["total"] = std::chrono::duration<double, std::milli>(
                                    std::chrono::steady_clock::now() - start)
                                    .count();
    Json log{{"candidates", result.candidates.size()},
             {"results", out["courses"].size()},
             {"method", result.ranking.method}};
    return {200, std::move(out), std::move(log)};
  } catch (const std::exception& e) {
    return {status_for_exception(e), error_body(e.what()), {}};
  }
}

HttpReply RecommenderService::course(const std::string& course_id) const {
  auto snap = snapshot();
  if (!snap) return not_ready();
  if (!snap->store->has_course(course_id)) {
    return {404, error_body("unknown course '" + course_id + "'"), {}};
  }
  const Course& c = snap->store->course(course_id);
  Json out = course_summary(c);
  out["prerequisite_ids"] = c.prerequisite_ids;
  Json lessons = Json::array();
  for (const Lesson& l : snap->store->lessons_of(course_id)) {
    Json lj{{"lesson_id", l.lesson_id},
            {"index", l.index},
            {"title", l.title},
            {"chunk_count", snap->store->chunks_of(l.lesson_id).size()}};
    if (l.duration_s) lj["duration_s"] = *l.duration_s;
    lessons.push_back(std::move(lj));
  }
  out["lessons"] = std::move(lessons);
  return {200, std::move(out), {}};
}

HttpReply RecommenderService::courses() const {
  auto snap = snapshot();
  if (!snap) return not_ready();
  Json list = Json::array();
  for (const Course& c : snap->store->courses()) list.push_back(course_summary(c));
  return {200, Json{{"courses", std::move(list)}}, {}};
}

HttpReply RecommenderService::health() const {
  auto snap = snapshot();
  if (!snap) return not_ready();
  const KgStore& store = *snap->store;
  return {200,
          Json{{"status", "ok"},
               {"courses", store.courses().size()},
               {"lessons", store.lessons().size()},
               {"chunks", store.chunks().size()},
               {"indexed_chunks", snap->index->size()},
               {"metadata_vectors", snap->metadata ? snap->metadata->size() : 0}},
          {}};
}

HttpReply RecommenderService::config() const {
  auto snap = snapshot();
  if (!snap) return not_ready();
  const KgStore& store = *snap->store;
  std::set<std::string> disciplines;
  for (const Course& c : store.courses()) disciplines.insert(c.discipline);
  Json plans = Json::array();
  for (const StudyPlan& p : store.study_plans()) {
    plans.push_back({{"plan_id", p.plan_id}, {"name", p.name}});
  }
  Json methods = Json::array({"ragear", "sump"});
  if (snap->metadata && !snap->metadata->empty()) methods.push_back("metadata");
  return {200,
          Json{{"k", snap->config.k},
               {"t_q", snap->config.t_q ? Json(*snap->config.t_q) : Json("auto")},
               {"embedder", {{"kind", to_string(snap->embedder->kind())},
                             {"dim", snap->embedder->dim()}}},
               {"methods", std::move(methods)},
               {"default_method", "ragear"},
               {"default_top_n", 3},
               {"max_top_n", kMaxTopN},
               {"evidence_cap", options_.evidence_cap},
               {"disciplines", disciplines},
               {"study_plans", std::move(plans)}},
          {}};
}

void RecommenderService::write_log(const Json& line) const {
  if (!options_.log) return;
  std::lock_guard lock(log_mu_);
  *options_.log << line.dump() << '\n';
  options_.log->flush();
}

void RecommenderService::mount(httplib::Server& server) const {
  // httplib's default adds SO_REUSEPORT, which lets a second process bind the
  // same port silently.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  auto respond = [this](const httplib::Request& req, httplib::Response& res,
                        const std::function<HttpReply()>& handler) {
    auto start = std::chrono::steady_clock::now();
    HttpReply reply;
    try {
      reply = handler();
    } catch (const std::exception& e) {
      reply = {status_for_exception(e), error_body(e.what()), {}};
    }
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    Json line{{"http_method", req.method},
              {"path", req.path},
              {"status", reply.status},
              {"latency_ms", ms}};
    if (reply.log.is_object()) line.update(reply.log);
    write_log(line);
  };

  server.set_post_routing_handler(
      [origin = options_.cors_origin](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
      });
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  server.Post("/api/recommend", [this, respond](const httplib::Request& req,
                                                httplib::Response& res) {
    bool all = req.has_param("all_evidence") &&
               req.get_param_value("all_evidence") == "true";
    respond(req, res, [&] { return recommend(req.body, all); });
  });
  server.Get(R"(/api/courses/([^/]+))", [this, respond](const httplib::Request& req,
                                                        httplib::Response& res) {
    std::string id = req.matches[1];
    respond(req, res, [&] { return course(id); });
  });
  server.Get("/api/courses", [this, respond](const httplib::Request& req,
                                             httplib::Response& res) {
    respond(req, res, [&] { return courses(); });
  });
  server.Get("/api/health", [this, respond](const httplib::Request& req,
                                            httplib::Response& res) {
    respond(req, res, [&] { return health(); });
  });
  server.Get("/api/config", [this, respond](const httplib::Request& req,
                                            httplib::Response& res) {
    respond(req, res, [&] { return config(); });
  });
  if (options_.static_dir) server.set_mount_point("/", *options_.static_dir);
}

}  // namespace ragear

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

#ifndef RAGEAR_SERVICE_H_
#define RAGEAR_SERVICE_H_

#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>

#include "ragear/json_util.h"
#include "ragear/pipeline.h"

namespace httplib {
class Server;
}

namespace ragear {

struct HttpReply {
  int status = 200;
  Json body;
  Json log;  // extra fields for the request log line
};

struct RecommendRequest {
  QueryRequest query;
  int top_n = 3;

  // Fields: query (required), query_id, constraints, method, top_n (1..50),
  // t_q. Unknown fields are rejected. Throws InvalidArgument.
  static RecommendRequest from_json(const Json& j);
};

struct ServiceOptions {
  int evidence_cap = 5;
  std::string cors_origin = "*";
  std::optional<std::string> static_dir;
  std::ostream* log = nullptr;  // one JSON line per request; null disables
};

// HTTP front end over an immutable Snapshot. Handlers are plain functions of
// the request so they can be exercised without a socket; mount() wires them
// into an httplib server.
class RecommenderService {
 public:
  explicit RecommenderService(ServiceOptions options);

  // Atomically replaces the snapshot; in-flight requests finish on the old
  // one. A null snapshot puts the service back into the not-ready state.
  void set_snapshot(std::shared_ptr<const Snapshot> snapshot);
  std::shared_ptr<const Snapshot> snapshot() const;

  HttpReply recommend(const std::string& body, bool all_evidence) const;
  HttpReply course(const std::string& course_id) const;
  HttpReply courses() const;
  HttpReply health() const;
  HttpReply config() const;

  void mount(httplib::Server& server) const;

 private:
  HttpReply not_ready() const;
  void write_log(const Json& line) const;

  ServiceOptions options_;
  mutable std::mutex mu_;
  std::shared_ptr<const Snapshot> snapshot_;
  mutable std::mutex log_mu_;
};

// Response body for one query: the top_n courses with metadata, score
// breakdown and at most evidence_cap supporting chunks each (all of them
// when evidence_cap is nullopt), plus query-level counts and timings.
Json recommendation_json(const QueryResult& result, const KgStore& store,
                         int top_n, std::optional<std::size_t> evidence_cap);

// HTTP status for an exception escaping the pipeline.
int status_for_exception(const std::exception& e);

}  // namespace ragear

#endif  // RAGEAR_SERVICE_H_

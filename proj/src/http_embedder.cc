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

#include "ragear/http_embedder.h"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "ragear/errors.h"

namespace ragear {

HttpEndpoint parse_endpoint(std::string_view url) {
  constexpr std::string_view kScheme = "http://";
  if (url.substr(0, kScheme.size()) != kScheme) {
    throw InvalidArgument("endpoint must start with http://: " +
                          std::string(url));
  }
  auto slash = url.find('/', kScheme.size());
  HttpEndpoint ep;
  if (slash == std::string_view::npos) {
    ep.scheme_host_port = std::string(url);
    ep.path = "/";
  } else {
    ep.scheme_host_port = std::string(url.substr(0, slash));
    ep.path = std::string(url.substr(slash));
  }
  if (ep.scheme_host_port.size() == kScheme.size()) {
    throw InvalidArgument("endpoint has no host: " + std::string(url));
  }
  return ep;
}

namespace {

class SemaphoreGuard {
 public:
  explicit SemaphoreGuard(std::counting_semaphore<>& sem) : sem_(sem) {
    sem_.acquire();
  }
  ~SemaphoreGuard() { sem_.release(); }
  SemaphoreGuard(const SemaphoreGuard&) = delete;
  SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

}  // namespace

HttpEmbedder::HttpEmbedder(EmbedderConfig cfg)
    : cfg_(std::move(cfg)),
      endpoint_(parse_endpoint(cfg_.endpoint_url)),
      in_flight_(std::make_unique<std::counting_semaphore<>>(
          static_cast<std::ptrdiff_t>(cfg_.max_in_flight))) {
  cfg_.validate();
}

HttpEmbedder::~HttpEmbedder() = default;

std::vector<Embedding> HttpEmbedder::embed_batch(
    std::span<const std::string> texts, const std::string& prefix) const {
  Json body{{"input", Json(std::vector<std::string>(texts.begin(), texts.end()))},
            {"prefix", prefix}};
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!cfg_.api_key_env.empty()) {
    if (const char* key = std::getenv(cfg_.api_key_env.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }

  std::string last_error;
  int backoff = cfg_.backoff_ms;
  for (int attempt = 1; attempt <= cfg_.attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
    httplib::Result res;
    {
      SemaphoreGuard guard(*in_flight_);
      httplib::Client client(endpoint_.scheme_host_port);
      auto timeout = std::chrono::milliseconds(cfg_.timeout_ms);
      client.set_connection_timeout(timeout);
      client.set_read_timeout(timeout);
      client.set_write_timeout(timeout);
      res = client.Post(endpoint_.path, headers, payload, "application/json");
    }
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw TransportError("embedding service answered HTTP " +
                           std::to_string(res->status));
    }
    Json reply;
    try {
      reply = Json::parse(res->body);
    } catch (const Json::exception& e) {
      throw TransportError(std::string("embedding service reply is not JSON: ") +
                           e.what());
    }
    auto it = reply.find("embeddings");
    if (it == reply.end() || !it->is_array() || it->size() != texts.size()) {
      throw TransportError("embedding service reply has " +
                           std::string(it == reply.end() ? "no" : "a mis-sized") +
                           " 'embeddings' array");
    }
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (const Json& row : *it) {
      Embedding e;
      try {
        e.values = row.get<std::vector<float>>();
      } catch (const Json::exception&) {
        throw TransportError("embedding service returned a non-numeric vector");
      }
      if (e.dim() != cfg_.dim) {
        throw DimensionError("embedding service returned dim " +
                             std::to_string(e.dim()) + ", expected " +
                             std::to_string(cfg_.dim));
      }
      normalize(e);
      out.push_back(std::move(e));
    }
    return out;
  }
  throw TransportError("embedding service " + cfg_.endpoint_url +
                       " unreachable after " + std::to_string(cfg_.attempts) +
                       " attempts: " + last_error);
}

std::vector<Embedding> HttpEmbedder::embed_all(
    std::span<const std::string> texts, const std::string& prefix) const {
  if (texts.empty()) throw InvalidArgument("embed_passages: empty batch");
  for (const auto& t : texts) {
    if (t.empty()) throw InvalidArgument("embed_passages: empty text");
  }
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); i += cfg_.max_batch) {
    auto batch = texts.subspan(i, std::min(cfg_.max_batch, texts.size() - i));
    auto part = embed_batch(batch, prefix);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<Embedding> HttpEmbedder::embed_passages(
    std::span<const std::string> texts) const {
  return embed_all(texts, cfg_.passage_prefix);
}

Embedding HttpEmbedder::embed_query(std::string_view text) const {
  if (text.empty()) throw InvalidArgument("embed_query: empty text");
  std::string one(text);
  return embed_all(std::span<const std::string>(&one, 1), cfg_.query_prefix)
      .front();
}

}  // namespace ragear

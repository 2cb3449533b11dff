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

#ifndef RAGEAR_HTTP_EMBEDDER_H_
#define RAGEAR_HTTP_EMBEDDER_H_

#include <memory>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ragear/embed.h"

namespace ragear {

struct HttpEndpoint {
  std::string scheme_host_port;  // "http://host:port"
  std::string path;              // "/embed"
};

// Accepts "http://host[:port][/path]". Throws InvalidArgument otherwise.
HttpEndpoint parse_endpoint(std::string_view url);

// POSTs {"input": [texts], "prefix": "..."} and expects
// {"embeddings": [[f32...]...]}. Batches of at most max_batch texts; each
// batch is tried `attempts` times with exponential backoff on transport
// failures, 429 and 5xx. In-flight requests across callers are bounded by
// max_in_flight.
class HttpEmbedder final : public Embedder {
 public:
  explicit HttpEmbedder(EmbedderConfig cfg);
  ~HttpEmbedder() override;

  std::vector<Embedding> embed_passages(
      std::span<const std::string> texts) const override;
  Embedding embed_query(std::string_view text) const override;
  std::size_t dim() const override { return cfg_.dim; }
  EmbedderKind kind() const override { return EmbedderKind::kHttp; }

 private:
  std::vector<Embedding> embed_batch(std::span<const std::string> texts,
                                     const std::string& prefix) const;
  std::vector<Embedding> embed_all(std::span<const std::string> texts,
                                   const std::string& prefix) const;

  EmbedderConfig cfg_;
  HttpEndpoint endpoint_;
  mutable std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

}  // namespace ragear

#endif  // RAGEAR_HTTP_EMBEDDER_H_

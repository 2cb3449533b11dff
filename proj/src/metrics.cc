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

#include "ragear/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "ragear/errors.h"

namespace ragear {

void EvalConfig::validate() const {
  if (relevance_threshold < 1 || relevance_threshold > 5) {
    throw InvalidArgument("relevance threshold must be in 1..5");
  }
  if (cutoffs.empty()) throw InvalidArgument("at least one cutoff is required");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (cutoffs[i] < 1 || (i > 0 && cutoffs[i] <= cutoffs[i - 1])) {
      throw InvalidArgument("cutoffs must be positive and ascending");
    }
  }
  if (!(rbo_p > 0.0 && rbo_p < 1.0)) {
    throw InvalidArgument("rbo_p must lie in (0, 1)");
  }
}

Qrels::Qrels(std::span<const Judgment> judgments) {
  for (const auto& j : judgments) add(j);
}

void Qrels::add(const Judgment& j) {
  if (j.score < 0 || j.score > 5) {
    throw InvalidArgument("judgment score " + std::to_string(j.score) +
                          " outside 0..5 for (" + j.query_id + ", " +
                          j.course_id + ")");
  }
  if (!by_query_[j.query_id].emplace(j.course_id, j.score).second) {
    throw IntegrityError("duplicate judgment for (" + j.query_id + ", " +
                         j.course_id + ")");
  }
}

int Qrels::score(const std::string& query_id,
                 const std::string& course_id) const {
  auto q = by_query_.find(query_id);
  if (q == by_query_.end()) return 0;
  auto c = q->second.find(course_id);
  return c == q->second.end() ? 0 : c->second;
}

const std::map<std::string, int>& Qrels::for_query(
    const std::string& query_id) const {
  static const std::map<std::string, int> kEmpty;
  auto q = by_query_.find(query_id);
  return q == by_query_.end() ? kEmpty : q->second;
}

std::set<std::string> Qrels::queries() const {
  std::set<std::string> out;
  for (const auto& [q, _] : by_query_) out.insert(q);
  return out;
}

std::size_t Qrels::relevant_count(const std::string& query_id,
                                  const EvalConfig& cfg) const {
  std::size_t n = 0;
  for (const auto& [_, s] : for_query(query_id)) n += cfg.relevant(s) ? 1 : 0;
  return n;
}

std::vector<Judgment> Qrels::judgments() const {
  std::vector<Judgment> out;
  for (const auto& [q, courses] : by_query_) {
    for (const auto& [c, s] : courses) out.push_back({q, c, s});
  }
  return out;
}

std::size_t Qrels::size() const {
  std::size_t n = 0;
  for (const auto& [_, courses] : by_query_) n += courses.size();
  return n;
}

Qrels Qrels::parse(std::istream& in, const std::string& source) {
  Qrels qrels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string tok; fields >> tok;) f.push_back(tok);
    if (f.empty() || f[0][0] == '#') continue;
    const std::string where = source + ":" + std::to_string(line_no);
    if (f.size() != 3 && f.size() != 4) {
      throw ParseError(where + ": expected 'query_id course_id score'");
    }
    const std::string& course = f.size() == 3 ? f[1] : f[2];
    int score = 0;
    try {
      std::size_t used = 0;
      score = std::stoi(f.back(), &used);
      if (used != f.back().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(where + ": bad score '" + f.back() + "'");
    }
    try {
      qrels.add({f[0], course, score});
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return qrels;
}

Qrels Qrels::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open " + path.string());
  return parse(in, path.string());
}

void Qrels::write(std::ostream& out) const {
  for (const auto& [q, courses] : by_query_) {
    for (const auto& [c, s] : courses) out << q << ' ' << c << ' ' << s << '\n';
  }
}

namespace {

void check_k(int k) {
  if (k < 1) throw InvalidArgument("cutoff k must be >= 1");
}

double gain(int score, const EvalConfig& cfg) {
  return cfg.exponential_gain ? std::exp2(score) - 1.0 : score;
}

double mean_over(std::span<const Ranking> runs,
                 const std::function<double(const Ranking&)>& metric) {
  if (runs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : runs) sum += metric(r);
  return sum / static_cast<double>(runs.size());
}

}  // namespace

double reciprocal_rank(const Ranking& ranking, const Qrels& qrels,
                       const EvalConfig& cfg) {
  for (std::size_t i = 0; i < ranking.items.size(); ++i) {
    if (cfg.relevant(qrels.score(ranking.query_id, ranking.items[i].course_id))) {
      return 1.0 / static_cast<double>(i + 1);
    }
  }
  return 0.0;
}

double precision_at_k(const Ranking& ranking, const Qrels& qrels,
                      const EvalConfig& cfg, int k) {
  check_k(k);
  std::size_t n = std::min<std::size_t>(k, ranking.items.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    hits += cfg.relevant(qrels.score(ranking.query_id, ranking.items[i].course_id));
  }
  return static_cast<double>(hits) / k;
}

double average_precision_at_k(const Ranking& ranking, const Qrels& qrels,
                              const EvalConfig& cfg, int k) {
  check_k(k);
  std::size_t total = qrels.relevant_count(ranking.query_id, cfg);
  if (total == 0) return 0.0;
  std::size_t n = std::min<std::size_t>(k, ranking.items.size());
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cfg.relevant(qrels.score(ranking.query_id, ranking.items[i].course_id))) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(total);
}

double ndcg_at_k(const Ranking& ranking, const Qrels& qrels,
                 const EvalConfig& cfg, int k) {
  check_k(k);
  std::vector<int> ideal;
  for (const auto& [_, s] : qrels.for_query(ranking.query_id)) ideal.push_back(s);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal.size() && i < static_cast<std::size_t>(k); ++i) {
    idcg += gain(ideal[i], cfg) / std::log2(static_cast<double>(i + 2));
  }
  if (idcg == 0.0) return 0.0;
  double dcg = 0.0;
  std::size_t n = std::min<std::size_t>(k, ranking.items.size());
  for (std::size_t i = 0; i < n; ++i) {
    int s = qrels.score(ranking.query_id, ranking.items[i].course_id);
    dcg += gain(s, cfg) / std::log2(static_cast<double>(i + 2));
  }
  return dcg / idcg;
}

double mrr(std::span<const Ranking> runs, const Qrels& qrels,
           const EvalConfig& cfg) {
  return mean_over(runs, [&](const Ranking& r) {
    return reciprocal_rank(r, qrels, cfg);
  });
}

double map_at_k(std::span<const Ranking> runs, const Qrels& qrels,
                const EvalConfig& cfg, int k) {
  return mean_over(runs, [&](const Ranking& r) {
    return average_precision_at_k(r, qrels, cfg, k);
  });
}

}  // namespace ragear

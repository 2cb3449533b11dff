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

#include "ragear/agreement.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ragear/errors.h"

namespace ragear {
namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("correlation inputs differ in length");
  }
  if (a.size() < 2) throw InvalidArgument("correlation needs at least 2 items");
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::optional<double> kendall_tau(std::span<const double> a,
                                  std::span<const double> b) {
  check_pair(a, b);
  const std::size_t n = a.size();
  double concordant = 0, discordant = 0, tied_a = 0, tied_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double da = a[i] - a[j];
      double db = b[i] - b[j];
      if (da == 0) tied_a += 1;
      if (db == 0) tied_b += 1;
      if (da == 0 || db == 0) continue;
      ((da > 0) == (db > 0) ? concordant : discordant) += 1;
    }
  }
  double pairs = static_cast<double>(n) * (n - 1) / 2.0;
  double denom = std::sqrt((pairs - tied_a) * (pairs - tied_b));
  if (denom == 0.0) return std::nullopt;
  return (concordant - discordant) / denom;
}

std::optional<double> spearman_rho(std::span<const double> a,
                                   std::span<const double> b) {
  check_pair(a, b);
  auto ra = average_ranks(a);
  auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return std::nullopt;
  return cov / std::sqrt(va * vb);
}

double rbo_ext(std::span<const std::string> s, std::span<const std::string> t,
               double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("rbo: p must lie in (0, 1)");
  auto check_unique = [](std::span<const std::string> list) {
    std::unordered_set<std::string> seen;
    for (const auto& id : list) {
      if (!seen.insert(id).second) {
        throw InvalidArgument("rbo: duplicate id '" + id + "'");
      }
    }
  };
  check_unique(s);
  check_unique(t);
  if (s.size() > t.size()) std::swap(s, t);  // s is now the shorter list
  const std::size_t sh = s.size();
  const std::size_t lg = t.size();
  if (lg == 0) return 1.0;
  if (sh == 0) return 0.0;

  // overlap[d] = |s[:min(d,sh)] n t[:d]|, tracked incrementally.
  std::unordered_set<std::string> seen_s, seen_t;
  std::vector<double> overlap(lg + 1, 0.0);
  double x = 0.0;
  for (std::size_t d = 1; d <= lg; ++d) {
    const std::string& td = t[d - 1];
    if (d <= sh) {
      const std::string& sd = s[d - 1];
      if (sd == td) {
        x += 1;
      } else {
        if (seen_t.count(sd)) x += 1;
        if (seen_s.count(td)) x += 1;
      }
      seen_s.insert(sd);
    } else if (seen_s.count(td)) {
      x += 1;
    }
    seen_t.insert(td);
    overlap[d] = x;
  }

  const double x_s = overlap[sh];
  const double x_l = overlap[lg];
  double sum = 0.0;
  double weight = 1.0;
  for (std::size_t d = 1; d <= lg; ++d) {
    weight *= p;
    const double dd = static_cast<double>(d);
    sum += overlap[d] / dd * weight;
    if (d > sh) sum += x_s * (dd - sh) / (static_cast<double>(sh) * dd) * weight;
  }
  const double tail = ((x_l - x_s) / lg + x_s / sh) * weight;
  return std::clamp((1.0 - p) / p * sum + tail, 0.0, 1.0);
}

double jaccard_relevant(std::span<const Judgment> left,
                        std::span<const Judgment> right, const EvalConfig& cfg) {
  auto relevant = [&](std::span<const Judgment> js) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& j : js) {
      if (cfg.relevant(j.score)) out.emplace(j.query_id, j.course_id);
    }
    return out;
  };
  auto a = relevant(left);
  auto b = relevant(right);
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  return static_cast<double>(inter) /
         static_cast<double>(a.size() + b.size() - inter);
}

SummaryStat SummaryStat::over(std::span<const std::optional<double>> values) {
  SummaryStat s;
  double sum = 0.0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++s.count;
    }
  }
  if (s.count == 0) return s;
  s.mean = sum / s.count;
  double sq = 0.0;
  for (const auto& v : values) {
    if (v) sq += (*v - s.mean) * (*v - s.mean);
  }
  s.std_dev = std::sqrt(sq / s.count);
  return s;
}

AgreementReport agree(const Qrels& left, const Qrels& right,
                      const EvalConfig& cfg) {
  cfg.validate();
  if (left.queries() != right.queries()) {
    throw InvalidArgument("judges cover different query sets");
  }
  AgreementReport report;
  std::vector<std::optional<double>> tau, rho, rbo, jac;
  for (const auto& q : left.queries()) {
    std::set<std::string> courses;
    for (const auto& [c, _] : left.for_query(q)) courses.insert(c);
    for (const auto& [c, _] : right.for_query(q)) courses.insert(c);
    std::vector<std::string> ids(courses.begin(), courses.end());
    std::vector<double> a, b;
    std::vector<Judgment> ja, jb;
    for (const auto& c : ids) {
      a.push_back(left.score(q, c));
      b.push_back(right.score(q, c));
      ja.push_back({q, c, left.score(q, c)});
      jb.push_back({q, c, right.score(q, c)});
    }
    auto induced = [&](const std::vector<double>& scores) {
      std::vector<std::size_t> order(ids.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t x, std::size_t y) {
                         return scores[x] > scores[y];
                       });
      std::vector<std::string> out;
      for (auto i : order) out.push_back(ids[i]);
      return out;
    };
    AgreementRow row;
    row.query_id = q;
    row.courses = ids.size();
    if (ids.size() >= 2) {
      row.kendall = kendall_tau(a, b);
      row.spearman = spearman_rho(a, b);
    }
    row.rbo = rbo_ext(induced(a), induced(b), cfg.rbo_p);
    row.jaccard = jaccard_relevant(ja, jb, cfg);
    tau.push_back(row.kendall);
    rho.push_back(row.spearman);
    rbo.push_back(row.rbo);
    jac.push_back(row.jaccard);
    report.rows.push_back(std::move(row));
  }
  report.kendall = SummaryStat::over(tau);
  report.spearman = SummaryStat::over(rho);
  report.rbo = SummaryStat::over(rbo);
  report.jaccard = SummaryStat::over(jac);
  return report;
}

namespace {

Json stat_json(const SummaryStat& s) {
  return Json{{"mean", s.mean}, {"std", s.std_dev}, {"n", s.count}};
}

Json opt_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json AgreementReport::to_json() const {
  Json rows_json = Json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"query_id", r.query_id},
                         {"courses", r.courses},
                         {"kendall_tau", opt_json(r.kendall)},
                         {"spearman_rho", opt_json(r.spearman)},
                         {"rbo", r.rbo},
                         {"jaccard", r.jaccard}});
  }
  return Json{{"summary",
               {{"kendall_tau", stat_json(kendall)},
                {"spearman_rho", stat_json(spearman)},
                {"rbo", stat_json(rbo)},
                {"jaccard", stat_json(jaccard)}}},
              {"queries", rows_json}};
}

std::string AgreementReport::to_table() const {
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-16s %8s %8s %5s\n", "Metric", "Mean",
                "Std", "N");
  out << buf;
  auto line = [&](const char* name, const SummaryStat& s) {
    std::snprintf(buf, sizeof(buf), "%-16s %8.3f %8.3f %5zu\n", name, s.mean,
                  s.std_dev, s.count);
    out << buf;
  };
  line("Kendall's tau", kendall);
  line("Spearman's rho", spearman);
  line("RBO", rbo);
  line("Jaccard", jaccard);
  return out.str();
}

}  // namespace ragear

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

#include "ragear/report.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "ragear/errors.h"

namespace ragear {

std::optional<double> delta_percent(double value, double base) {
  if (value == base) return 0.0;
  if (base == 0.0) return std::nullopt;
  return (value - base) / base * 100.0;
}

double MetricReport::value(const std::string& method,
                           const std::string& metric) const {
  auto m = mean.find(method);
  if (m == mean.end()) throw NotFoundError("no method '" + method + "'");
  auto v = m->second.find(metric);
  if (v == m->second.end()) throw NotFoundError("no metric '" + metric + "'");
  return v->second;
}

std::optional<double> MetricReport::delta(const std::string& method,
                                          const std::string& metric) const {
  return delta_percent(value(method, metric), value(baseline, metric));
}

Json MetricReport::to_json() const {
  Json methods_json = Json::object();
  for (const auto& method : methods) {
    Json metrics_json = Json::object();
    for (const auto& metric : metrics) {
      Json entry{{"mean", value(method, metric)},
                 {"per_query", per_query.at(method).at(metric)}};
      if (method != baseline) {
        auto d = delta(method, metric);
        entry["delta_percent"] = d ? Json(*d) : Json(nullptr);
      }
      metrics_json[metric] = std::move(entry);
    }
    methods_json[method] = std::move(metrics_json);
  }
  return Json{{"baseline", baseline},
              {"method_order", methods},
              {"metric_order", metrics},
              {"queries", queries},
              {"methods", methods_json}};
}

std::string MetricReport::to_table() const {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Metric"};
  header.insert(header.end(), methods.begin(), methods.end());
  cells.push_back(header);
  char buf[64];
  for (const auto& metric : metrics) {
    std::vector<std::string> row{metric};
    for (const auto& method : methods) {
      std::snprintf(buf, sizeof(buf), "%.3f", value(method, metric));
      std::string cell = buf;
      if (method != baseline) {
        auto d = delta(method, metric);
        if (d) {
          std::snprintf(buf, sizeof(buf), " (%+.2f%%)", *d);
          cell += buf;
        } else {
          cell += " (n/a)";
        }
      }
      row.push_back(cell);
    }
    cells.push_back(std::move(row));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  }
  std::ostringstream out;
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == 0) {
        out << row[i] << std::string(width[i] - row[i].size(), ' ');
      } else {
        out << "  " << std::string(width[i] - row[i].size(), ' ') << row[i];
      }
    }
    out << '\n';
  }
  return out.str();
}

MetricReport compare_methods(const RunSet& runs, const Qrels& qrels,
                             const EvalConfig& cfg, const std::string& baseline,
                             const std::optional<std::set<std::string>>& universe) {
  cfg.validate();
  if (runs.empty()) throw InvalidArgument("no runs to compare");
  if (!runs.count(baseline)) {
    throw InvalidArgument("baseline method '" + baseline + "' has no run");
  }

  std::set<std::string> query_set;
  if (universe) {
    query_set = *universe;
    for (const auto& [method, run] : runs) {
      for (const auto& [q, _] : run) {
        if (!query_set.count(q)) {
          throw InvalidArgument("method '" + method + "' ranks query '" + q +
                                "' outside the query set");
        }
      }
    }
  } else {
    for (const auto& [q, _] : runs.at(baseline)) query_set.insert(q);
    for (const auto& [method, run] : runs) {
      std::set<std::string> mine;
      for (const auto& [q, _] : run) mine.insert(q);
      if (mine != query_set) {
        throw InvalidArgument("query-set mismatch: method '" + method +
                              "' differs from baseline '" + baseline + "'");
      }
    }
  }

  MetricReport report;
  report.baseline = baseline;
  report.methods.push_back(baseline);
  for (const auto& [method, _] : runs) {
    if (method != baseline) report.methods.push_back(method);
  }
  report.queries.assign(query_set.begin(), query_set.end());
  report.metrics.push_back("MRR");
  for (int k : cfg.cutoffs) report.metrics.push_back("Precision@" + std::to_string(k));
  for (int k : cfg.cutoffs) report.metrics.push_back("MAP@" + std::to_string(k));
  for (int k : cfg.cutoffs) report.metrics.push_back("nDCG@" + std::to_string(k));

  for (const auto& method : report.methods) {
    const Run& run = runs.at(method);
    auto& per = report.per_query[method];
    for (const auto& q : report.queries) {
      Ranking empty{q, method, {}};
      auto it = run.find(q);
      const Ranking& r = it == run.end() ? empty : it->second;
      per["MRR"][q] = reciprocal_rank(r, qrels, cfg);
      for (int k : cfg.cutoffs) {
        const std::string ks = std::to_string(k);
        per["Precision@" + ks][q] = precision_at_k(r, qrels, cfg, k);
        per["MAP@" + ks][q] = average_precision_at_k(r, qrels, cfg, k);
        per["nDCG@" + ks][q] = ndcg_at_k(r, qrels, cfg, k);
      }
    }
    for (const auto& metric : report.metrics) {
      double sum = 0.0;
      for (const auto& q : report.queries) sum += per[metric][q];
      report.mean[method][metric] =
          report.queries.empty() ? 0.0
                                 : sum / static_cast<double>(report.queries.size());
    }
  }
  return report;
}

}  // namespace ragear

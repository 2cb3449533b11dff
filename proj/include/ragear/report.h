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

#ifndef RAGEAR_REPORT_H_
#define RAGEAR_REPORT_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ragear/json_util.h"
#include "ragear/metrics.h"
#include "ragear/run_file.h"

namespace ragear {

// Relative change of `value` over `base`, in percent. Equal values give 0
// (also when both are 0); any other change from a zero base is undefined.
std::optional<double> delta_percent(double value, double base);

struct MetricReport {
  std::string baseline;
  std::vector<std::string> methods;  // baseline first, then by name
  std::vector<std::string> metrics;  // "MRR", "Precision@k", "MAP@k", "nDCG@k"
  std::vector<std::string> queries;
  // method -> metric -> mean over queries
  std::map<std::string, std::map<std::string, double>> mean;
  // method -> metric -> query -> value
  std::map<std::string, std::map<std::string, std::map<std::string, double>>>
      per_query;

  double value(const std::string& method, const std::string& metric) const;
  std::optional<double> delta(const std::string& method,
                              const std::string& metric) const;
  Json to_json() const;
  // Metric rows, method columns; non-baseline cells carry "(+x.xx%)".
  std::string to_table() const;
};

// Scores every method's run against one judge. All runs must rank the same
// query set; when `universe` is given, runs may omit queries from it (an
// omitted query counts as an empty ranking) but must not add others.
// Throws InvalidArgument on a mismatch or an unknown baseline.
MetricReport compare_methods(
    const RunSet& runs, const Qrels& qrels, const EvalConfig& cfg,
    const std::string& baseline,
    const std::optional<std::set<std::string>>& universe = std::nullopt);

}  // namespace ragear

#endif  // RAGEAR_REPORT_H_

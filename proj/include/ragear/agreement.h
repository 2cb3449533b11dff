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

#ifndef RAGEAR_AGREEMENT_H_
#define RAGEAR_AGREEMENT_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ragear/json_util.h"
#include "ragear/metrics.h"

namespace ragear {

// Tie-corrected Kendall tau-b. nullopt when either side is entirely tied.
// Throws InvalidArgument on unequal lengths or fewer than two items.
std::optional<double> kendall_tau(std::span<const double> a,
                                  std::span<const double> b);

// Pearson correlation of average (tie-shared) ranks. nullopt when either
// side is entirely tied.
std::optional<double> spearman_rho(std::span<const double> a,
                                   std::span<const double> b);

// Extrapolated rank-biased overlap at depth max(|s|, |t|), handling uneven
// lengths by freezing the shorter list's agreement past its end. Two empty
// lists score 1, one empty list 0. Throws InvalidArgument for duplicate ids
// or p outside (0, 1).
double rbo_ext(std::span<const std::string> s, std::span<const std::string> t,
               double p);

// |A n B| / |A u B| over the (query, course) pairs each judge rates >=
// threshold; 1 when both sets are empty.
double jaccard_relevant(std::span<const Judgment> left,
                        std::span<const Judgment> right, const EvalConfig& cfg);

struct SummaryStat {
  double mean = 0.0;
  double std_dev = 0.0;  // population
  std::size_t count = 0;  // defined values only

  static SummaryStat over(std::span<const std::optional<double>> values);
};

struct AgreementRow {
  std::string query_id;
  std::size_t courses = 0;
  std::optional<double> kendall;
  std::optional<double> spearman;
  double rbo = 0.0;
  double jaccard = 0.0;
};

struct AgreementReport {
  std::vector<AgreementRow> rows;
  SummaryStat kendall;
  SummaryStat spearman;
  SummaryStat rbo;
  SummaryStat jaccard;

  Json to_json() const;
  std::string to_table() const;
};

// Per query, over the union of courses either judge rated (missing = 0):
// tau and rho on the paired scores, RBO on the two score-induced orderings
// (score desc, course_id asc), Jaccard on the relevant sets. Throws
// InvalidArgument when the judges cover different query sets.
AgreementReport agree(const Qrels& left, const Qrels& right,
                      const EvalConfig& cfg);

}  // namespace ragear

#endif  // RAGEAR_AGREEMENT_H_

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

#ifndef RAGEAR_RUN_FILE_H_
#define RAGEAR_RUN_FILE_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "ragear/scoring.h"

namespace ragear {

// query_id -> ranking, for one method.
using Run = std::map<std::string, Ranking>;
// method -> run.
using RunSet = std::map<std::string, Run>;

// "%.10g"; fixed so run files are byte-stable.
std::string format_score(double score);

// One line per ranked course:
//   query_id<TAB>method<TAB>rank<TAB>course_id<TAB>score
void write_run(std::ostream& out, const Ranking& ranking);

// Parses run lines, grouping by method then query. Ranks of a (query,
// method) pair must be exactly 1..n in file order.
RunSet parse_run(std::istream& in, const std::string& source);
RunSet read_run_file(const std::filesystem::path& path);

// Merges `extra` into `into`; a (method, query) pair may only appear once.
void merge_runs(RunSet& into, RunSet extra);

}  // namespace ragear

#endif  // RAGEAR_RUN_FILE_H_

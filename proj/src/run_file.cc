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

#include "ragear/run_file.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "ragear/errors.h"

namespace ragear {

std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", score);
  return buf;
}

void write_run(std::ostream& out, const Ranking& ranking) {
  for (std::size_t i = 0; i < ranking.items.size(); ++i) {
    const RankedCourse& item = ranking.items[i];
    out << ranking.query_id << '\t' << ranking.method << '\t' << (i + 1) << '\t'
        << item.course_id << '\t' << format_score(item.score) << '\n';
  }
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

RunSet parse_run(std::istream& in, const std::string& source) {
  RunSet runs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    auto f = split_tabs(line);
    if (f.size() != 5) {
      throw ParseError(where + ": expected 5 tab-separated fields");
    }
    int rank = 0;
    auto rank_res = std::from_chars(f[2].data(), f[2].data() + f[2].size(), rank);
    if (rank_res.ec != std::errc() || rank_res.ptr != f[2].data() + f[2].size()) {
      throw ParseError(where + ": bad rank '" + f[2] + "'");
    }
    double score = 0.0;
    try {
      std::size_t used = 0;
      score = std::stod(f[4], &used);
      if (used != f[4].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(where + ": bad score '" + f[4] + "'");
    }
    Ranking& r = runs[f[1]][f[0]];
    r.query_id = f[0];
    r.method = f[1];
    if (rank != static_cast<int>(r.items.size()) + 1) {
      throw ParseError(where + ": rank " + f[2] + " out of sequence");
    }
    r.items.push_back({f[3], score});
  }
  return runs;
}

RunSet read_run_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open " + path.string());
  return parse_run(in, path.string());
}

void merge_runs(RunSet& into, RunSet extra) {
  for (auto& [method, run] : extra) {
    Run& target = into[method];
    for (auto& [query, ranking] : run) {
      if (!target.emplace(query, std::move(ranking)).second) {
        throw InvalidArgument("method '" + method + "' ranks query '" + query +
                              "' in more than one run file");
      }
    }
  }
}

}  // namespace ragear

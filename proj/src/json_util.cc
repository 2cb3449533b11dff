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

#include "ragear/json_util.h"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <vector>

#include "ragear/errors.h"
#include "ragear/text.h"

namespace ragear {

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

Json load_json_file(const std::filesystem::path& path) {
  return parse_json(read_file(path), path.string());
}

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    fn(parse_json(line, path.string() + ":" + std::to_string(line_no)),
       line_no);
  }
}

template <typename T>
T required(const Json& obj, std::string_view key, std::string_view context) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    throw ParseError(std::string(context) + ": missing field '" +
                     std::string(key) + "'");
  }
  try {
    return it->template get<T>();
  } catch (const Json::exception&) {
    throw ParseError(std::string(context) + ": field '" + std::string(key) +
                     "' has the wrong type");
  }
}

template <typename T>
T optional_or(const Json& obj, std::string_view key, T fallback,
              std::string_view context) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return required<T>(obj, key, context);
}

#define RAGEAR_INSTANTIATE(T)                                           \
  template T required<T>(const Json&, std::string_view, std::string_view); \
  template T optional_or<T>(const Json&, std::string_view, T,            \
                            std::string_view);

RAGEAR_INSTANTIATE(std::string)
RAGEAR_INSTANTIATE(int)
RAGEAR_INSTANTIATE(std::int64_t)
RAGEAR_INSTANTIATE(double)
RAGEAR_INSTANTIATE(bool)
RAGEAR_INSTANTIATE(std::vector<std::string>)
RAGEAR_INSTANTIATE(std::set<std::string>)
RAGEAR_INSTANTIATE(std::vector<float>)
RAGEAR_INSTANTIATE(std::vector<int>)
RAGEAR_INSTANTIATE(Json)

#undef RAGEAR_INSTANTIATE

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_float(float value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace ragear

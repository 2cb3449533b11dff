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

#ifndef RAGEAR_JSON_UTIL_H_
#define RAGEAR_JSON_UTIL_H_

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace ragear {

using Json = nlohmann::json;

// Parses `text`, rethrowing nlohmann errors as ParseError tagged with `what`.
Json parse_json(std::string_view text, std::string_view what);
Json load_json_file(const std::filesystem::path& path);

// Calls `fn(object, line_number)` for every non-blank line of a JSONL file.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const Json&, std::size_t)>& fn);

// Typed field access that reports the missing/mistyped key and context.
template <typename T>
T required(const Json& obj, std::string_view key, std::string_view context);

template <typename T>
T optional_or(const Json& obj, std::string_view key, T fallback,
              std::string_view context);

// Shortest round-trip decimal form.
std::string format_double(double value);
std::string format_float(float value);

}  // namespace ragear

#endif  // RAGEAR_JSON_UTIL_H_

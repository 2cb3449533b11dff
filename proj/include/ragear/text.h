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

#ifndef RAGEAR_TEXT_H_
#define RAGEAR_TEXT_H_

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ragear {

// 64-bit FNV-1a over the raw bytes.
std::uint64_t fnv1a64(std::string_view bytes);

// Splits on every byte that is not an ASCII letter/digit and not part of a
// multi-byte UTF-8 sequence, lowercasing ASCII letters. Empty pieces are
// dropped.
std::vector<std::string> tokenize(std::string_view text);

// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

std::string to_lower_ascii(std::string_view text);

// One entry per non-empty, non-comment ('#') line, trimmed.
std::set<std::string> read_word_list(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace ragear

#endif  // RAGEAR_TEXT_H_

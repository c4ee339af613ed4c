// Copyright 2026 The Privscope Authors.
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

#ifndef PRIVSCOPE_COMMON_IO_H_
#define PRIVSCOPE_COMMON_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace privscope {

using Json = nlohmann::json;

// Sorted keys, two-space indent, trailing newline. Every machine-readable
// artifact goes through this so that identical inputs give identical bytes.
std::string CanonicalJson(const Json& value);

// Single-line form used for JSON lines output.
std::string CompactJson(const Json& value);

std::string ReadFile(const std::filesystem::path& path);

// Writes only when the content differs. Returns true when bytes were written.
bool WriteFileIfChanged(const std::filesystem::path& path,
                        std::string_view content);

Json ParseJsonFile(const std::filesystem::path& path);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

}  // namespace privscope

#endif  // PRIVSCOPE_COMMON_IO_H_

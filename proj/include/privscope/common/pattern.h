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

#ifndef PRIVSCOPE_COMMON_PATTERN_H_
#define PRIVSCOPE_COMMON_PATTERN_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace privscope {

// Resource patterns: "*" matches anything, a trailing "*" matches by
// prefix, anything else matches exactly. No mid-string globs.
bool PatternMatches(std::string_view pattern, std::string_view resource);

// Names of ${NAME} placeholders, in order of appearance.
std::vector<std::string> PlaceholderNames(std::string_view pattern);

// Replaces ${NAME} placeholders. Returns nullopt when a value is missing;
// `missing` then receives the absent name.
std::optional<std::string> SubstitutePlaceholders(std::string_view pattern,
                                                  const std::map<std::string, std::string>& env,
                                                  std::string* missing = nullptr);

}  // namespace privscope

#endif  // PRIVSCOPE_COMMON_PATTERN_H_

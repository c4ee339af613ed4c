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

#include "privscope/common/pattern.h"

namespace privscope {

bool PatternMatches(std::string_view pattern, std::string_view resource) {
  if (pattern == "*") return true;
  if (!pattern.empty() && pattern.back() == '*') {
    std::string_view head = pattern.substr(0, pattern.size() - 1);
    return resource.substr(0, head.size()) == head;
  }
  return pattern == resource;
}

std::vector<std::string> PlaceholderNames(std::string_view pattern) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = pattern.find("${", pos)) != std::string_view::npos) {
    std::size_t close = pattern.find('}', pos);
    if (close == std::string_view::npos) break;
    out.emplace_back(pattern.substr(pos + 2, close - pos - 2));
    pos = close + 1;
  }
  return out;
}

std::optional<std::string> SubstitutePlaceholders(std::string_view pattern,
                                                  const std::map<std::string, std::string>& env,
                                                  std::string* missing) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = pattern.find("${", pos);
    std::size_t close = open == std::string_view::npos ? open : pattern.find('}', open);
    if (close == std::string_view::npos) {
      out.append(pattern.substr(pos));
      return out;
    }
    out.append(pattern.substr(pos, open - pos));
    std::string name(pattern.substr(open + 2, close - open - 2));
    auto it = env.find(name);
    if (it == env.end()) {
      if (missing != nullptr) *missing = name;
      return std::nullopt;
    }
    out += it->second;
    pos = close + 1;
  }
}

}  // namespace privscope

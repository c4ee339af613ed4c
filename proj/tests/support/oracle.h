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

#ifndef PRIVSCOPE_TESTS_SUPPORT_ORACLE_H_
#define PRIVSCOPE_TESTS_SUPPORT_ORACLE_H_

#include <fnmatch.h>

#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "privscope/allow/allowlist.h"

namespace privscope::testing {

using Triple = std::tuple<std::string, std::string, std::string>;  // service, resource, action

// Enumerates every (service, resource, action) of a finite alphabet that an
// allowlist grants, matching patterns with fnmatch rather than the library
// matcher. Membership in the result is the reference verdict.
class FlatSetOracle {
 public:
  FlatSetOracle(const AllowList& allow, const std::vector<std::string>& resources) {
    for (const auto& [service, by_resource] : allow.entries) {
      for (const auto& [pattern, actions] : by_resource) {
        for (const auto& r : resources) {
          if (fnmatch(pattern.c_str(), r.c_str(), 0) != 0) continue;
          for (const auto& a : actions) permitted_.insert({service, r, a});
        }
      }
    }
  }

  bool Permits(const std::string& service, const std::string& resource,
               const std::string& action) const {
    return permitted_.count({service, resource, action}) > 0;
  }
  std::size_t size() const { return permitted_.size(); }

 private:
  std::set<Triple> permitted_;
};

// Small alphabets: three services, each with three actions, and resources
// drawn from a shared pool that includes prefix relationships.
struct Alphabet {
  std::vector<std::string> services;
  std::vector<std::vector<std::string>> actions;  // per service
  std::vector<std::string> resources;
  std::vector<std::string> patterns;  // resources plus prefix and full wildcards
};

inline Alphabet SmallAlphabet() {
  Alphabet a;
  a.services = {"s3", "dynamodb", "lambda"};
  a.actions = {{"s3:GetObject", "s3:PutObject", "s3:DeleteObject"},
               {"dynamodb:GetItem", "dynamodb:PutItem", "dynamodb:Query"},
               {"lambda:InvokeFunction", "lambda:ListFunctions", "lambda:GetFunction"}};
  a.resources = {"b/k", "b/k2", "c/k"};
  a.patterns = {"b/k", "b/k2", "c/k", "b/*", "b/k*", "c*", "*"};
  return a;
}

template <typename Rng>
AllowList RandomAllowList(Rng& rng, const Alphabet& a, std::size_t max_entries = 6) {
  AllowList allow;
  allow.function_id = "gen";
  allow.built_from = std::string(64, '0');
  std::uniform_int_distribution<std::size_t> count(0, max_entries);
  std::size_t n = count(rng);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t s = std::uniform_int_distribution<std::size_t>(0, a.services.size() - 1)(rng);
    const auto& pattern = a.patterns[std::uniform_int_distribution<std::size_t>(0, a.patterns.size() - 1)(rng)];
    const auto& action = a.actions[s][std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
    allow.entries[a.services[s]][pattern].insert(action);
  }
  return allow;
}

}  // namespace privscope::testing

#endif  // PRIVSCOPE_TESTS_SUPPORT_ORACLE_H_

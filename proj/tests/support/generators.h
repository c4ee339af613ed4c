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

#ifndef PRIVSCOPE_TESTS_SUPPORT_GENERATORS_H_
#define PRIVSCOPE_TESTS_SUPPORT_GENERATORS_H_

#include <random>
#include <string>
#include <vector>

#include "privscope/extract/permissions.h"

namespace privscope::testing {

using Rng = std::mt19937_64;

template <typename T>
const T& Pick(Rng& rng, const std::vector<T>& items) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

inline bool Coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// Unified actions of services owned by `vendor`.
inline std::vector<std::string> ActionsOf(const RuleSet& rules, Vendor vendor) {
  std::vector<std::string> out;
  for (const auto& [unified, rendering] : rules.actions()) {
    const ServiceInfo* info = rules.FindService(ActionService(unified));
    if (info != nullptr && info->vendor == vendor) out.push_back(unified);
  }
  return out;
}

// Neutral pattern for a service with `slots` components: "*", a literal
// path, an env-prefixed path, or any of those cut short with a trailing "*".
inline std::string RandomPattern(Rng& rng, std::size_t slots) {
  static const std::vector<std::string> parts = {"a", "b", "logs", "${BUCKET}", "x-1"};
  if (Coin(rng, 0.15)) return "*";
  std::size_t n = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(slots, 1))(rng);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) out += "/";
    out += Pick(rng, parts);
  }
  if (n < slots && Coin(rng)) out += "/*";
  else if (Coin(rng, 0.25)) out += "*";
  return out;
}

inline PermissionSet RandomPermissionSet(Rng& rng, const RuleSet& rules, Vendor vendor,
                                         std::size_t max_requirements = 6) {
  PermissionSet ps;
  ps.function_id = "gen";
  ps.vendor = vendor;
  ps.scope = ScopeLevel::kEntity;
  auto actions = ActionsOf(rules, vendor);
  std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_requirements)(rng);
  std::map<std::pair<std::string, std::string>, PermissionRequirement> reqs;
  for (std::size_t i = 0; i < n; ++i) {
    PermissionRequirement r;
    r.action = Pick(rng, actions);
    r.resource = RandomPattern(rng, rules.FindService(r.service())->slots.size());
    if (r.resource.find('*') != std::string::npos) r.resolvability = Resolvability::kPrefix;
    if (r.resource == "*") r.resolvability = Resolvability::kDynamic;
    reqs.emplace(std::make_pair(r.action, r.resource), r);
  }
  for (auto& [key, r] : reqs) ps.requirements.push_back(r);
  return ps;
}

}  // namespace privscope::testing

#endif  // PRIVSCOPE_TESTS_SUPPORT_GENERATORS_H_

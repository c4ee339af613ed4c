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

#ifndef PRIVSCOPE_EXTRACT_PERMISSIONS_H_
#define PRIVSCOPE_EXTRACT_PERMISSIONS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "privscope/source/registry.h"

namespace privscope {

enum class ScopeLevel { kService, kObject, kEntity };

std::string_view ScopeName(ScopeLevel scope);  // "service", "object", "entity"
std::optional<ScopeLevel> ParseScope(std::string_view name);

// A call site matched to its action rule.
struct MatchedSite {
  const ServiceCallSite* site = nullptr;
  const ActionRule* rule = nullptr;
};

struct DetectedCalls {
  std::vector<MatchedSite> matched;
  std::vector<Finding> findings;  // unknown-method
};

DetectedCalls DetectCalls(const SemanticRegistry& reg, const RuleSet& rules);

// One way a resource may be addressed, in neutral form ("bucket/key").
struct ResolvedResource {
  std::string pattern;  // literal, ${ENV} placeholders, "prefix*" or "*"
  Resolvability resolvability = Resolvability::kStatic;
  // Slot fed by each env placeholder in the pattern.
  std::map<std::string, std::string> env_slots;
};

// Resolutions of the rule's resource parameters at `scope`, one per path
// combination. Entity joins every parameter; object keeps the first and
// covers the rest with "/*"; service is always "*".
std::vector<ResolvedResource> TraceValues(const SemanticRegistry& reg, const ServiceCallSite& site,
                                          const ActionRule& rule, const RuleSet& rules,
                                          ScopeLevel scope = ScopeLevel::kEntity);

// The rule's actions verbatim. Throws MissingRule when the site has none.
std::vector<std::string> MapActions(const ServiceCallSite& site, const SemanticRegistry& reg,
                                    const RuleSet& rules);

struct PermissionRequirement {
  std::string action;    // unified "service:Action"
  std::string resource;  // neutral pattern
  Resolvability resolvability = Resolvability::kStatic;
  std::vector<SourceLocation> provenance;  // call sites, ascending

  std::string service() const { return ActionService(action); }
};

struct Fallback {
  SourceLocation location;
  std::optional<SourceLocation> via;
  std::string service;
  std::string method;
  std::string reason;  // dynamic-resource, wildcard-required
  std::string detail;
};

struct EnvRole {
  std::string service;
  std::string slot;

  friend bool operator==(const EnvRole&, const EnvRole&) = default;
  friend auto operator<=>(const EnvRole&, const EnvRole&) = default;
};

struct EnvBinding {
  std::string env_name;
  std::vector<EnvRole> roles;
  std::vector<SourceLocation> use_sites;
};

using EnvBindingSet = std::map<std::string, EnvBinding>;

struct PermissionSet {
  std::string function_id;
  ScopeLevel scope = ScopeLevel::kEntity;
  Vendor vendor = Vendor::kUnknown;
  std::string source_digest;
  std::string rules_digest;
  bool empty_source = false;  // the registry had no call sites
  std::vector<PermissionRequirement> requirements;  // sorted by (action, resource)
  EnvBindingSet env_bindings;
  std::vector<Fallback> fallbacks;
  std::vector<Finding> findings;

  Json ToJson() const;
  static PermissionSet FromJson(const Json& json);
  // Hash of the canonical JSON.
  std::string Digest() const;
};

PermissionSet ExtractPermissions(const SemanticRegistry& reg, const RuleSet& rules,
                                 ScopeLevel scope);

EnvBindingSet ResolveEnvBindings(const SemanticRegistry& reg, const RuleSet& rules);

}  // namespace privscope

#endif  // PRIVSCOPE_EXTRACT_PERMISSIONS_H_

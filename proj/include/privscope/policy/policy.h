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

#ifndef PRIVSCOPE_POLICY_POLICY_H_
#define PRIVSCOPE_POLICY_POLICY_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "privscope/extract/permissions.h"

namespace privscope {

// Account, project and subscription identifiers that resource grammars
// interpolate ({region}, {account_id}, {project}, {subscription}, ...).
struct NamingConfig {
  std::map<std::string, std::string> values;

  // Fills {name} slots. Throws MissingNaming for an absent identifier.
  std::string Apply(const std::string& text, Vendor vendor) const;
};

// One grant in neutral terms.
struct PolicyTriple {
  std::string service;
  std::string resource;  // neutral pattern
  std::string action;    // unified action

  friend bool operator==(const PolicyTriple&, const PolicyTriple&) = default;
  friend auto operator<=>(const PolicyTriple&, const PolicyTriple&) = default;
};

Json TripleJson(const PolicyTriple& t);

struct PolicyDocument {
  Vendor vendor = Vendor::kAws;
  ScopeLevel scope = ScopeLevel::kEntity;
  std::string function_id;
  std::string source_set_digest;
  bool no_permissions_required = false;
  // Native actions granted service-wide because of a recorded fallback.
  std::vector<std::string> service_wide_actions;
  Json body;
  bool bare = false;  // read without the envelope

  Json ToJson() const;
  // Accepts the emitted envelope or a bare vendor body, whose vendor is
  // recognized by shape. Throws UnparseablePolicy.
  static PolicyDocument FromJson(const Json& json);
};

// Vendor resource string for a neutral pattern of `service`.
std::string RenderResource(const RuleSet& rules, const std::string& service, Vendor vendor,
                           const std::string& neutral, const NamingConfig& naming);
// Inverse of RenderResource; nullopt when the string is outside the grammar.
std::optional<std::string> ParseResource(const RuleSet& rules, const std::string& service,
                                         Vendor vendor, const std::string& rendered,
                                         const NamingConfig& naming);

// Throws UnmappableAction or MissingNaming.
PolicyDocument EmitPolicy(const PermissionSet& pset, Vendor vendor, const NamingConfig& naming,
                          const RuleSet& rules);

struct PolicyGrants {
  std::set<PolicyTriple> triples;
  // Grants outside the known vocabulary, kept verbatim so drift still
  // reports them.
  std::set<PolicyTriple> foreign;
};

// Neutral triples granted by the document's Allow statements. Native
// actions are read back through the rendering tables of `source` vendor
// services. Throws UnparseablePolicy.
PolicyGrants ExpandPolicy(const PolicyDocument& doc, const RuleSet& rules, Vendor source,
                          const NamingConfig& naming);

struct PolicyFinding {
  std::string severity;  // error, warning
  std::string kind;      // schema, wildcard-action, wildcard-resource, duplicate, stale
  std::string message;
};

struct ValidationReport {
  std::vector<PolicyFinding> findings;

  bool ok() const;  // no errors
  Json ToJson() const;
};

ValidationReport ValidatePolicy(const PolicyDocument& doc, const RuleSet& rules,
                                const std::optional<std::string>& current_set_digest = {});

// Allow-only evaluator over neutral grants.
class PolicyEvaluator {
 public:
  explicit PolicyEvaluator(std::set<PolicyTriple> grants) : grants_(std::move(grants)) {}

  bool Permits(const std::string& service, const std::string& resource,
               const std::string& action) const;

 private:
  std::set<PolicyTriple> grants_;
};

}  // namespace privscope

#endif  // PRIVSCOPE_POLICY_POLICY_H_

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

#ifndef PRIVSCOPE_ALLOW_ALLOWLIST_H_
#define PRIVSCOPE_ALLOW_ALLOWLIST_H_

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "privscope/policy/policy.h"

namespace privscope {

using EnvValues = std::map<std::string, std::string>;

enum class AllowlistMode { kSnapshot, kDeferred };

std::string_view AllowlistModeName(AllowlistMode mode);
std::optional<AllowlistMode> ParseAllowlistMode(std::string_view name);

// service -> resource pattern -> unified actions
using AllowEntries = std::map<std::string, std::map<std::string, std::set<std::string>>>;

struct AllowList {
  std::string function_id;
  std::string built_from;  // permission set digest
  AllowEntries entries;
  EnvValues env_snapshot;  // empty when deferred

  bool empty() const { return entries.empty(); }
  std::set<PolicyTriple> Triples() const;
  Json ToJson() const;
  // Throws Error(kValidationFailed) on a malformed document.
  static AllowList FromJson(const Json& json);
};

// Snapshot mode substitutes ${NAME} placeholders from `env`; a missing value
// throws MissingEnvValue when `strict`, otherwise the placeholder is left for
// the verifier. Deferred mode keeps every placeholder.
AllowList BuildAllowList(const PermissionSet& pset, const EnvValues& env,
                         AllowlistMode mode = AllowlistMode::kSnapshot, bool strict = true);

struct EventParam {
  std::string value;
  std::string env;  // when set, the value is read from this variable at call time
};

struct ServiceCallEvent {
  std::string service;
  std::string operation;  // unified action
  std::map<std::string, EventParam> params;
  std::optional<std::string> resolved_resource;
  // False for operations addressed to the whole account (list buckets);
  // those are checked against the default identifier "*".
  bool requires_resource = true;

  Json ToJson() const;
  static ServiceCallEvent FromJson(const Json& json);
};

enum class Verdict { kAllow = 0, kDeny = 1 };
enum class DecisionReason { kMatched, kServiceMiss, kResourceMiss, kActionMiss, kResolutionFailure };

std::string_view VerdictName(Verdict v);
std::string_view DecisionReasonName(DecisionReason r);

struct VerificationDecision {
  Verdict verdict = Verdict::kDeny;
  DecisionReason reason = DecisionReason::kResolutionFailure;
  std::optional<PolicyTriple> matched_entry;
  std::string resource;  // resolved identifier, empty on resolution failure
};

inline constexpr char kDefaultResource[] = "*";

// Joins the service's slot parameters ("b/k"). The leading slot must be
// present; later slots are appended while present. Env-typed parameters are
// read from `env`. nullopt is a resolution failure.
std::optional<std::string> ResolveEventResource(const ServiceCallEvent& event, const EnvValues& env,
                                                const RuleSet& rules);

// Hierarchical lookup: service, then matching resource patterns, then
// action. Never throws; every failure is a Deny with its reason.
// `runtime_env` feeds env-typed parameters and deferred placeholders.
VerificationDecision VerifyCall(const ServiceCallEvent& event, const AllowList& allow,
                                const EnvValues& runtime_env, const RuleSet& rules);

// {service, resource, action, reason}, the payload of a denial error.
Json ErrorPayload(const ServiceCallEvent& event, const VerificationDecision& decision);

std::string Iso8601(std::chrono::system_clock::time_point t);

Json DecisionLogLine(const ServiceCallEvent& event, const VerificationDecision& decision,
                     const std::string& timestamp);

// Shared verifier. Verify() may run on any number of threads; Replace()
// swaps in a new allowlist as one unit.
class Verifier {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;
  using Sink = std::function<void(const std::string& line)>;

  Verifier(AllowList allow, EnvValues runtime_env, const RuleSet& rules);

  VerificationDecision Verify(const ServiceCallEvent& event) const;
  void Replace(AllowList next);
  std::shared_ptr<const AllowList> Current() const;

  // Each decision is written to `sink` as one JSON line.
  void SetDecisionLog(Sink sink, Clock clock = std::chrono::system_clock::now);

 private:
  mutable std::mutex mu_;
  mutable std::mutex log_mu_;
  std::shared_ptr<const AllowList> current_;
  EnvValues runtime_env_;
  const RuleSet& rules_;
  Sink sink_;
  Clock clock_;
};

struct DriftReport {
  std::vector<PolicyTriple> excess;   // granted by the policy only
  std::vector<PolicyTriple> missing;  // granted by the allowlist only
  std::string timestamp;

  bool empty() const { return excess.empty() && missing.empty(); }
  Json ToJson() const;
};

// Compares grants as (service, resource pattern, action) triples. Policy
// placeholders are filled from the allowlist's env snapshot; grants the
// rules cannot read back count as excess.
DriftReport DiffPolicy(const PolicyDocument& live, const AllowList& allow, const RuleSet& rules,
                       Vendor source, const NamingConfig& naming, const std::string& timestamp);

}  // namespace privscope

#endif  // PRIVSCOPE_ALLOW_ALLOWLIST_H_

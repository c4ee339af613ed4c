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

#include "privscope/allow/allowlist.h"

#include <ctime>

#include "privscope/common/pattern.h"
#include "privscope/common/schema.h"

namespace privscope {
namespace {

// Substitutes the placeholders `env` knows, leaving the rest in place.
std::string PartialSubstitute(const std::string& pattern, const EnvValues& env,
                              EnvValues* used, std::vector<std::string>* unresolved) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = pattern.find("${", pos);
    std::size_t close = open == std::string::npos ? open : pattern.find('}', open);
    if (close == std::string::npos) return out + pattern.substr(pos);
    out += pattern.substr(pos, open - pos);
    std::string name = pattern.substr(open + 2, close - open - 2);
    auto it = env.find(name);
    if (it != env.end()) {
      out += it->second;
      if (used) (*used)[name] = it->second;
    } else {
      out += pattern.substr(open, close - open + 1);
      if (unresolved) unresolved->push_back(name);
    }
    pos = close + 1;
  }
}

// Higher is more specific: exact, then longer prefixes, then "*".
std::pair<int, std::size_t> Specificity(const std::string& pattern) {
  if (pattern == "*") return {0, 0};
  if (pattern.back() == '*') return {1, pattern.size()};
  return {2, pattern.size()};
}

VerificationDecision Deny(DecisionReason reason, std::string resource = {}) {
  return {Verdict::kDeny, reason, std::nullopt, std::move(resource)};
}

const SchemaValidator& AllowListSchema() {
  static const SchemaValidator v(
      ParseJsonFile(RuleSet::DefaultSchemasDirectory() / "allowlist.schema.json"));
  return v;
}

}  // namespace

std::string_view AllowlistModeName(AllowlistMode mode) {
  return mode == AllowlistMode::kSnapshot ? "snapshot" : "deferred";
}

std::optional<AllowlistMode> ParseAllowlistMode(std::string_view name) {
  if (name == "snapshot") return AllowlistMode::kSnapshot;
  if (name == "deferred") return AllowlistMode::kDeferred;
  return std::nullopt;
}

std::set<PolicyTriple> AllowList::Triples() const {
  std::set<PolicyTriple> out;
  for (const auto& [service, by_resource] : entries) {
    for (const auto& [resource, actions] : by_resource) {
      for (const auto& a : actions) out.insert({service, resource, a});
    }
  }
  return out;
}

Json AllowList::ToJson() const {
  Json e = Json::object();
  for (const auto& [service, by_resource] : entries) {
    Json r = Json::object();
    for (const auto& [resource, actions] : by_resource) {
      r[resource] = std::vector<std::string>(actions.begin(), actions.end());
    }
    e[service] = std::move(r);
  }
  return {{"function_id", function_id},
          {"built_from", built_from},
          {"entries", std::move(e)},
          {"env_snapshot", env_snapshot}};
}

AllowList AllowList::FromJson(const Json& json) {
  auto problems = AllowListSchema().Validate(json);
  if (!problems.empty()) throw Error(ErrorCode::kValidationFailed, "allowlist " + problems.front());
  AllowList a;
  a.function_id = json.at("function_id").get<std::string>();
  a.built_from = json.at("built_from").get<std::string>();
  for (const auto& [service, by_resource] : json.at("entries").items()) {
    for (const auto& [resource, actions] : by_resource.items()) {
      auto& set = a.entries[service][resource];
      for (const auto& act : actions) set.insert(act.get<std::string>());
    }
  }
  a.env_snapshot = json.at("env_snapshot").get<EnvValues>();
  return a;
}

AllowList BuildAllowList(const PermissionSet& pset, const EnvValues& env, AllowlistMode mode,
                         bool strict) {
  AllowList a;
  a.function_id = pset.function_id;
  a.built_from = pset.Digest();
  for (const auto& req : pset.requirements) {
    std::string pattern = req.resource;
    if (mode == AllowlistMode::kSnapshot) {
      std::vector<std::string> unresolved;
      pattern = PartialSubstitute(req.resource, env, &a.env_snapshot, &unresolved);
      if (strict && !unresolved.empty()) {
        throw Error(ErrorCode::kMissingEnvValue, unresolved.front());
      }
    }
    a.entries[req.service()][pattern].insert(req.action);
  }
  return a;
}

Json ServiceCallEvent::ToJson() const {
  Json p = Json::object();
  for (const auto& [name, param] : params) {
    p[name] = param.env.empty() ? Json(param.value) : Json{{"env", param.env}};
  }
  Json j = {{"service", service},
            {"operation", operation},
            {"params", std::move(p)},
            {"requires_resource", requires_resource}};
  if (resolved_resource) j["resolved_resource"] = *resolved_resource;
  return j;
}

ServiceCallEvent ServiceCallEvent::FromJson(const Json& json) {
  ServiceCallEvent e;
  e.service = json.at("service").get<std::string>();
  e.operation = json.at("operation").get<std::string>();
  if (json.contains("params")) {
    for (const auto& [name, v] : json.at("params").items()) {
      EventParam p;
      if (v.is_object()) {
        p.env = v.at("env").get<std::string>();
      } else if (v.is_string()) {
        p.value = v.get<std::string>();
      } else {
        p.value = v.dump();
      }
      e.params.emplace(name, std::move(p));
    }
  }
  if (json.contains("resolved_resource") && json["resolved_resource"].is_string()) {
    e.resolved_resource = json["resolved_resource"].get<std::string>();
  }
  e.requires_resource = json.value("requires_resource", true);
  return e;
}

std::string_view VerdictName(Verdict v) { return v == Verdict::kAllow ? "Allow" : "Deny"; }

std::string_view DecisionReasonName(DecisionReason r) {
  switch (r) {
    case DecisionReason::kMatched: return "Matched";
    case DecisionReason::kServiceMiss: return "ServiceMiss";
    case DecisionReason::kResourceMiss: return "ResourceMiss";
    case DecisionReason::kActionMiss: return "ActionMiss";
    case DecisionReason::kResolutionFailure: return "ResolutionFailure";
  }
  return "ResolutionFailure";
}

std::optional<std::string> ResolveEventResource(const ServiceCallEvent& event, const EnvValues& env,
                                                const RuleSet& rules) {
  const ServiceInfo* info = rules.FindService(event.service);
  if (info == nullptr) return std::nullopt;
  if (!info->resource_addressed) return std::string(kDefaultResource);
  std::string out;
  for (std::size_t i = 0; i < info->slots.size(); ++i) {
    const EventParam* param = nullptr;
    for (const auto& name : info->slots[i].params) {
      auto it = event.params.find(name);
      if (it != event.params.end()) {
        param = &it->second;
        break;
      }
    }
    if (param == nullptr) {
      if (i == 0) return std::nullopt;
      break;
    }
    std::string value = param->value;
    if (!param->env.empty()) {
      auto it = env.find(param->env);
      if (it == env.end()) return std::nullopt;
      value = it->second;
    }
    if (value.empty()) return std::nullopt;
    if (i > 0) out += "/";
    out += value;
  }
  return out;
}

VerificationDecision VerifyCall(const ServiceCallEvent& event, const AllowList& allow,
                                const EnvValues& runtime_env, const RuleSet& rules) {
  try {
    const std::string& action = event.operation;
    std::string resource;
    if (!event.requires_resource) {
      resource = kDefaultResource;
    } else if (event.resolved_resource) {
      resource = *event.resolved_resource;
    } else {
      auto resolved = ResolveEventResource(event, runtime_env, rules);
      if (!resolved) return Deny(DecisionReason::kResolutionFailure);
      resource = *resolved;
    }
    if (event.service.empty() || action.empty()) {
      return Deny(DecisionReason::kResolutionFailure, resource);
    }

    auto service = allow.entries.find(event.service);
    if (service == allow.entries.end()) return Deny(DecisionReason::kServiceMiss, resource);

    bool resource_hit = false;
    const std::string* best = nullptr;
    for (const auto& [pattern, actions] : service->second) {
      std::string concrete = pattern;
      if (pattern.find("${") != std::string::npos) {
        auto filled = SubstitutePlaceholders(pattern, runtime_env);
        if (!filled) continue;
        concrete = *filled;
      }
      if (!PatternMatches(concrete, resource)) continue;
      resource_hit = true;
      if (actions.count(action) && (best == nullptr || Specificity(pattern) > Specificity(*best))) {
        best = &pattern;
      }
    }
    if (!resource_hit) return Deny(DecisionReason::kResourceMiss, resource);
    if (best == nullptr) return Deny(DecisionReason::kActionMiss, resource);
    return {Verdict::kAllow, DecisionReason::kMatched, PolicyTriple{event.service, *best, action},
            resource};
  } catch (...) {
    return Deny(DecisionReason::kResolutionFailure);
  }
}

Json ErrorPayload(const ServiceCallEvent& event, const VerificationDecision& decision) {
  return {{"service", event.service},
          {"resource", decision.resource},
          {"action", event.operation},
          {"reason", std::string(DecisionReasonName(decision.reason))}};
}

std::string Iso8601(std::chrono::system_clock::time_point t) {
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  std::time_t secs = static_cast<std::time_t>(ms / 1000);
  if (ms % 1000 < 0) --secs;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  std::size_t n = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  std::snprintf(buf + n, sizeof buf - n, ".%03dZ", static_cast<int>(((ms % 1000) + 1000) % 1000));
  return buf;
}

Json DecisionLogLine(const ServiceCallEvent& event, const VerificationDecision& decision,
                     const std::string& timestamp) {
  Json j = {{"event", event.ToJson()},
            {"verdict", std::string(VerdictName(decision.verdict))},
            {"reason", std::string(DecisionReasonName(decision.reason))},
            {"timestamp", timestamp}};
  if (!decision.resource.empty()) j["resource"] = decision.resource;
  return j;
}

Verifier::Verifier(AllowList allow, EnvValues runtime_env, const RuleSet& rules)
    : current_(std::make_shared<const AllowList>(std::move(allow))),
      runtime_env_(std::move(runtime_env)),
      rules_(rules) {}

std::shared_ptr<const AllowList> Verifier::Current() const {
  std::lock_guard<std::mutex> lock(mu_);
  return current_;
}

void Verifier::Replace(AllowList next) {
  auto fresh = std::make_shared<const AllowList>(std::move(next));
  std::lock_guard<std::mutex> lock(mu_);
  current_.swap(fresh);
}

void Verifier::SetDecisionLog(Sink sink, Clock clock) {
  std::lock_guard<std::mutex> lock(log_mu_);
  sink_ = std::move(sink);
  clock_ = std::move(clock);
}

VerificationDecision Verifier::Verify(const ServiceCallEvent& event) const {
  auto allow = Current();
  VerificationDecision d = VerifyCall(event, *allow, runtime_env_, rules_);
  std::lock_guard<std::mutex> lock(log_mu_);
  if (sink_) sink_(CompactJson(DecisionLogLine(event, d, Iso8601(clock_()))));
  return d;
}

Json DriftReport::ToJson() const {
  Json e = Json::array(), m = Json::array();
  for (const auto& t : excess) e.push_back(TripleJson(t));
  for (const auto& t : missing) m.push_back(TripleJson(t));
  return {{"excess", std::move(e)}, {"missing", std::move(m)}, {"timestamp", timestamp}};
}

DriftReport DiffPolicy(const PolicyDocument& live, const AllowList& allow, const RuleSet& rules,
                       Vendor source, const NamingConfig& naming, const std::string& timestamp) {
  PolicyGrants grants = ExpandPolicy(live, rules, source, naming);
  std::set<PolicyTriple> granted;
  for (auto t : grants.triples) {
    t.resource = PartialSubstitute(t.resource, allow.env_snapshot, nullptr, nullptr);
    granted.insert(std::move(t));
  }
  std::set<PolicyTriple> allowed = allow.Triples();
  DriftReport report;
  report.timestamp = timestamp;
  std::set<PolicyTriple> excess;
  for (const auto& t : grants.foreign) {
    if (!allowed.count(t)) excess.insert(t);
  }
  for (const auto& t : granted) {
    if (!allowed.count(t)) excess.insert(t);
  }
  report.excess.assign(excess.begin(), excess.end());
  for (const auto& t : allowed) {
    if (!granted.count(t)) report.missing.push_back(t);
  }
  return report;
}

}  // namespace privscope

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

#include "privscope/extract/permissions.h"

#include <algorithm>
#include <set>

namespace privscope {
namespace {

constexpr std::size_t kMaxResolutions = 16;

Json LocationsJson(const std::vector<SourceLocation>& locs) {
  Json out = Json::array();
  for (const auto& l : locs) out.push_back(LocationJson(l));
  return out;
}

SourceLocation LocationFromJson(const Json& j) {
  return {j.at("line").get<std::uint32_t>(), j.at("column").get<std::uint32_t>()};
}

std::vector<SourceLocation> LocationsFromJson(const Json& j) {
  std::vector<SourceLocation> out;
  for (const auto& l : j) out.push_back(LocationFromJson(l));
  return out;
}

Resolvability ParseResolvability(const std::string& s) {
  if (s == "static") return Resolvability::kStatic;
  if (s == "prefix") return Resolvability::kPrefix;
  return Resolvability::kDynamic;
}

std::string SlotOf(const RuleSet& rules, const std::string& service, const std::string& param) {
  if (const ServiceInfo* info = rules.FindService(service)) {
    for (const auto& slot : info->slots) {
      if (std::find(slot.params.begin(), slot.params.end(), param) != slot.params.end()) {
        return slot.name;
      }
    }
  }
  return param;
}

const LanguageVendorRules* PairFor(const SemanticRegistry& reg, const RuleSet& rules) {
  return reg.vendor == Vendor::kUnknown ? nullptr : rules.Find(reg.language, reg.vendor);
}

void AddSorted(std::vector<SourceLocation>& into, const SourceLocation& loc) {
  auto it = std::lower_bound(into.begin(), into.end(), loc);
  if (it == into.end() || *it != loc) into.insert(it, loc);
}

struct Part {
  ValuePtr value;
  std::string slot;
};

}  // namespace

std::string_view ScopeName(ScopeLevel scope) {
  switch (scope) {
    case ScopeLevel::kService: return "service";
    case ScopeLevel::kObject: return "object";
    case ScopeLevel::kEntity: return "entity";
  }
  return "entity";
}

std::optional<ScopeLevel> ParseScope(std::string_view name) {
  if (name == "service") return ScopeLevel::kService;
  if (name == "object") return ScopeLevel::kObject;
  if (name == "entity") return ScopeLevel::kEntity;
  return std::nullopt;
}

DetectedCalls DetectCalls(const SemanticRegistry& reg, const RuleSet& rules) {
  DetectedCalls out;
  const LanguageVendorRules* pair = PairFor(reg, rules);
  for (const auto& site : reg.call_sites) {
    const ActionRule* rule = pair ? pair->FindAction(site.service, site.method) : nullptr;
    if (rule == nullptr) {
      out.findings.push_back({"unknown-method",
                              site.service + " method " + site.method + " has no action rule",
                              site.location});
      continue;
    }
    out.matched.push_back({&site, rule});
  }
  return out;
}

std::vector<std::string> MapActions(const ServiceCallSite& site, const SemanticRegistry& reg,
                                    const RuleSet& rules) {
  const LanguageVendorRules* pair = PairFor(reg, rules);
  const ActionRule* rule = pair ? pair->FindAction(site.service, site.method) : nullptr;
  if (rule == nullptr) {
    throw Error(ErrorCode::kMissingRule, "no action rule for " + site.service + "." + site.method,
                site.location);
  }
  return rule->actions;
}

std::vector<ResolvedResource> TraceValues(const SemanticRegistry& /*reg*/,
                                          const ServiceCallSite& site, const ActionRule& rule,
                                          const RuleSet& rules, ScopeLevel scope) {
  std::vector<ResolvedResource> out;
  if (rule.wildcard_required || rule.resource_params.empty()) {
    out.push_back({"*", Resolvability::kStatic, {}});
    return out;
  }
  std::vector<std::string> params = rule.resource_params;
  if (scope == ScopeLevel::kObject) params.resize(1);

  // Every combination of alternative values across the parameters.
  std::vector<std::vector<Part>> combos{{}};
  for (const auto& name : params) {
    ValueSet values;
    auto it = site.params.find(name);
    if (it != site.params.end()) values = it->second;
    if (values.empty()) values.push_back(ValueExpr::Unknown("missing:" + name));
    std::string slot = SlotOf(rules, rule.service, name);
    std::vector<std::vector<Part>> next;
    for (const auto& combo : combos) {
      for (const auto& v : values) {
        auto grown = combo;
        grown.push_back({v, slot});
        next.push_back(std::move(grown));
      }
    }
    combos = std::move(next);
    if (combos.size() > kMaxResolutions) {
      out.push_back({"*", Resolvability::kDynamic, {}});
      return out;
    }
  }
  bool covered = scope == ScopeLevel::kObject && rule.resource_params.size() > 1;

  std::set<std::string> seen;
  for (const auto& combo : combos) {
    std::vector<ValuePtr> parts;
    std::map<std::string, std::string> env_slots;
    for (std::size_t i = 0; i < combo.size(); ++i) {
      if (i) parts.push_back(ValueExpr::Literal("/"));
      parts.push_back(combo[i].value);
      for (const auto& env : EnvNames(*combo[i].value)) env_slots.emplace(env, combo[i].slot);
    }
    if (covered) {
      parts.push_back(ValueExpr::Literal("/"));
      parts.push_back(ValueExpr::Unknown("object-scope"));
    }
    ValuePtr composite = ValueExpr::Concat(parts);
    ResolvedResource r;
    r.resolvability = ResolvabilityOf(*composite);
    r.pattern = r.resolvability == Resolvability::kDynamic ? "*" : RenderPattern(*composite);
    if (covered) {
      // The wildcard tail is a scope choice, not a property of the values.
      ValuePtr head = ValueExpr::Concat({combo[0].value});
      r.resolvability = ResolvabilityOf(*head);
    }
    if (scope == ScopeLevel::kService) r.pattern = "*";
    for (const auto& [env, slot] : env_slots) {
      if (r.pattern.find("${" + env + "}") != std::string::npos) r.env_slots[env] = slot;
    }
    if (!seen.insert(r.pattern + "\n" + std::string(ResolvabilityName(r.resolvability))).second) {
      continue;
    }
    out.push_back(std::move(r));
  }
  return out;
}

PermissionSet ExtractPermissions(const SemanticRegistry& reg, const RuleSet& rules,
                                 ScopeLevel scope) {
  PermissionSet set;
  set.function_id = reg.path;
  set.scope = scope;
  set.vendor = reg.vendor;
  set.source_digest = reg.source_digest;
  set.rules_digest = rules.digest();
  set.empty_source = reg.call_sites.empty();
  set.findings = reg.findings;

  DetectedCalls calls = DetectCalls(reg, rules);
  set.findings.insert(set.findings.end(), calls.findings.begin(), calls.findings.end());

  std::map<std::pair<std::string, std::string>, PermissionRequirement> reqs;
  for (const auto& [site, rule] : calls.matched) {
    auto resources = TraceValues(reg, *site, *rule, rules, scope);
    // Fallbacks follow the entity view unless the scope is narrower than it.
    auto judged = scope == ScopeLevel::kService
                      ? TraceValues(reg, *site, *rule, rules, ScopeLevel::kEntity)
                      : resources;
    std::vector<std::string> dynamic_params;
    bool dynamic = std::any_of(judged.begin(), judged.end(), [](const ResolvedResource& r) {
      return r.resolvability == Resolvability::kDynamic;
    });
    if (rule->wildcard_required) {
      set.fallbacks.push_back({site->location, site->via, site->service, site->method,
                               "wildcard-required", rule->note});
    } else if (dynamic) {
      std::string detail;
      for (const auto& name : rule->resource_params) {
        auto it = site->params.find(name);
        bool bad = it == site->params.end() ||
                   std::any_of(it->second.begin(), it->second.end(), [](const ValuePtr& v) {
                     return ResolvabilityOf(*v) == Resolvability::kDynamic;
                   });
        if (bad) detail += (detail.empty() ? "" : ", ") + name;
        if (scope == ScopeLevel::kObject) break;
      }
      set.fallbacks.push_back({site->location, site->via, site->service, site->method,
                               "dynamic-resource", "unresolved " + detail});
    }
    for (const auto& action : rule->actions) {
      for (const auto& r : resources) {
        auto key = std::make_pair(action, r.pattern);
        auto it = reqs.find(key);
        Resolvability res = scope == ScopeLevel::kService ? Resolvability::kStatic : r.resolvability;
        if (scope == ScopeLevel::kService) {
          for (const auto& j : judged) res = std::max(res, j.resolvability);
        }
        if (it == reqs.end()) {
          PermissionRequirement req;
          req.action = action;
          req.resource = r.pattern;
          req.resolvability = res;
          it = reqs.emplace(key, std::move(req)).first;
        } else {
          it->second.resolvability = std::max(it->second.resolvability, res);
        }
        AddSorted(it->second.provenance, site->location);
      }
    }
    for (const auto& r : resources) {
      for (const auto& [env, slot] : r.env_slots) {
        EnvBinding& b = set.env_bindings[env];
        b.env_name = env;
        EnvRole role{site->service, slot};
        if (std::find(b.roles.begin(), b.roles.end(), role) == b.roles.end()) {
          b.roles.insert(std::upper_bound(b.roles.begin(), b.roles.end(), role), role);
        }
        AddSorted(b.use_sites, site->location);
      }
    }
  }
  for (auto& [key, req] : reqs) set.requirements.push_back(std::move(req));
  std::sort(set.fallbacks.begin(), set.fallbacks.end(), [](const Fallback& a, const Fallback& b) {
    auto va = a.via.value_or(SourceLocation{}), vb = b.via.value_or(SourceLocation{});
    return std::tie(a.location, va, a.service, a.method, a.reason) <
           std::tie(b.location, vb, b.service, b.method, b.reason);
  });
  set.fallbacks.erase(std::unique(set.fallbacks.begin(), set.fallbacks.end(),
                                  [](const Fallback& a, const Fallback& b) {
                                    return a.location == b.location && a.method == b.method &&
                                           a.reason == b.reason && a.service == b.service;
                                  }),
                      set.fallbacks.end());
  std::sort(set.findings.begin(), set.findings.end(), [](const auto& a, const auto& b) {
    return std::tie(a.location, a.kind, a.message) < std::tie(b.location, b.kind, b.message);
  });
  return set;
}

EnvBindingSet ResolveEnvBindings(const SemanticRegistry& reg, const RuleSet& rules) {
  return ExtractPermissions(reg, rules, ScopeLevel::kEntity).env_bindings;
}

Json PermissionSet::ToJson() const {
  Json j;
  j["function_id"] = function_id;
  j["scope"] = std::string(ScopeName(scope));
  j["vendor"] = std::string(VendorName(vendor));
  j["source_digest"] = source_digest;
  j["rules_digest"] = rules_digest;
  j["empty_source"] = empty_source;
  Json reqs = Json::array();
  for (const auto& r : requirements) {
    reqs.push_back({{"action", r.action},
                    {"resource", r.resource},
                    {"resolvability", std::string(ResolvabilityName(r.resolvability))},
                    {"provenance", LocationsJson(r.provenance)}});
  }
  j["requirements"] = std::move(reqs);
  Json envs = Json::object();
  for (const auto& [name, b] : env_bindings) {
    Json roles = Json::array();
    for (const auto& role : b.roles) roles.push_back({{"service", role.service}, {"slot", role.slot}});
    envs[name] = {{"roles", std::move(roles)}, {"use_sites", LocationsJson(b.use_sites)}};
  }
  j["env_bindings"] = std::move(envs);
  Json fbs = Json::array();
  for (const auto& f : fallbacks) {
    fbs.push_back({{"location", LocationJson(f.location)},
                   {"via", f.via ? LocationJson(*f.via) : Json(nullptr)},
                   {"service", f.service},
                   {"method", f.method},
                   {"reason", f.reason},
                   {"detail", f.detail}});
  }
  j["fallbacks"] = std::move(fbs);
  Json finds = Json::array();
  for (const auto& f : findings) {
    finds.push_back({{"kind", f.kind}, {"message", f.message}, {"location", LocationJson(f.location)}});
  }
  j["findings"] = std::move(finds);
  return j;
}

PermissionSet PermissionSet::FromJson(const Json& j) {
  try {
    PermissionSet set;
    set.function_id = j.at("function_id").get<std::string>();
    auto scope = ParseScope(j.at("scope").get<std::string>());
    if (!scope) throw Error(ErrorCode::kIo, "bad scope in permission set");
    set.scope = *scope;
    set.vendor = ParseVendor(j.at("vendor").get<std::string>()).value_or(Vendor::kUnknown);
    set.source_digest = j.at("source_digest").get<std::string>();
    set.rules_digest = j.at("rules_digest").get<std::string>();
    set.empty_source = j.at("empty_source").get<bool>();
    for (const auto& r : j.at("requirements")) {
      PermissionRequirement req;
      req.action = r.at("action").get<std::string>();
      req.resource = r.at("resource").get<std::string>();
      req.resolvability = ParseResolvability(r.at("resolvability").get<std::string>());
      req.provenance = LocationsFromJson(r.at("provenance"));
      set.requirements.push_back(std::move(req));
    }
    for (const auto& [name, b] : j.at("env_bindings").items()) {
      EnvBinding binding;
      binding.env_name = name;
      for (const auto& role : b.at("roles")) {
        binding.roles.push_back({role.at("service").get<std::string>(), role.at("slot").get<std::string>()});
      }
      binding.use_sites = LocationsFromJson(b.at("use_sites"));
      set.env_bindings[name] = std::move(binding);
    }
    for (const auto& f : j.at("fallbacks")) {
      Fallback fb;
      fb.location = LocationFromJson(f.at("location"));
      if (!f.at("via").is_null()) fb.via = LocationFromJson(f.at("via"));
      fb.service = f.at("service").get<std::string>();
      fb.method = f.at("method").get<std::string>();
      fb.reason = f.at("reason").get<std::string>();
      fb.detail = f.at("detail").get<std::string>();
      set.fallbacks.push_back(std::move(fb));
    }
    for (const auto& f : j.at("findings")) {
      set.findings.push_back({f.at("kind").get<std::string>(), f.at("message").get<std::string>(),
                              LocationFromJson(f.at("location"))});
    }
    return set;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("malformed permission set: ") + e.what());
  }
}

std::string PermissionSet::Digest() const { return Sha256Hex(CanonicalJson(ToJson())); }

}  // namespace privscope

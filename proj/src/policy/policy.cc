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

#include "privscope/policy/policy.h"

#include <algorithm>
#include <regex>

#include "privscope/common/pattern.h"
#include "privscope/common/schema.h"

namespace privscope {
namespace {

constexpr char kAwsVersion[] = "2012-10-17";

[[noreturn]] void Unparseable(const std::string& message) {
  throw Error(ErrorCode::kUnparseablePolicy, message);
}

const SchemaValidator& Schema(const std::string& name) {
  static const std::map<std::string, SchemaValidator> validators = [] {
    std::map<std::string, SchemaValidator> m;
    for (const char* n : {"policy-aws", "policy-gcp", "policy-azure", "policy-document"}) {
      m.emplace(n, SchemaValidator(ParseJsonFile(RuleSet::DefaultSchemasDirectory() /
                                                 (std::string(n) + ".schema.json"))));
    }
    return m;
  }();
  return validators.at(name);
}

std::string BodySchema(Vendor vendor) {
  return "policy-" + std::string(VendorName(vendor));
}

Json OneOrMany(const std::set<std::string>& values) {
  if (values.size() == 1) return *values.begin();
  return Json(std::vector<std::string>(values.begin(), values.end()));
}

std::vector<std::string> Strings(const Json& j) {
  std::vector<std::string> out;
  if (j.is_string()) {
    out.push_back(j.get<std::string>());
  } else if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<std::string>());
  }
  return out;
}

std::string Quote(const std::string& s) { return Json(s).dump(); }

Vendor SourceVendorOf(const RuleSet& rules, const std::string& unified) {
  const ServiceInfo* info = rules.FindService(ActionService(unified));
  return info ? info->vendor : Vendor::kUnknown;
}

// Unified actions of `source` services whose `doc_vendor` rendering matches
// a native action, which may carry a trailing-star glob.
std::vector<std::string> UnifiedFor(const RuleSet& rules, Vendor doc_vendor, Vendor source,
                                    const std::string& native) {
  std::vector<std::string> out;
  if (native.find('*') == std::string::npos) {
    if (auto u = rules.UnifiedFromNative(doc_vendor, source, native)) out.push_back(*u);
    return out;
  }
  for (const auto& [unified, rendering] : rules.actions()) {
    if (SourceVendorOf(rules, unified) != source) continue;
    if (PatternMatches(native, rendering.For(doc_vendor))) out.push_back(unified);
  }
  return out;
}

struct NativeGrant {
  std::vector<std::string> actions;
  std::vector<std::string> resources;  // vendor strings, or GCP expressions
};

std::vector<NativeGrant> NativeGrants(const PolicyDocument& doc) {
  std::vector<NativeGrant> out;
  const Json& body = doc.body;
  switch (doc.vendor) {
    case Vendor::kAws: {
      Json statements = body.at("Statement");
      if (statements.is_object()) statements = Json::array({statements});
      for (const auto& s : statements) {
        if (s.at("Effect") != "Allow") continue;
        if (s.contains("NotAction") || s.contains("NotResource")) {
          Unparseable("NotAction and NotResource statements are not supported");
        }
        out.push_back({Strings(s.value("Action", Json::array())),
                       Strings(s.value("Resource", Json::array()))});
      }
      break;
    }
    case Vendor::kGcp: {
      std::set<std::string> bound;
      for (const auto& b : body.at("bindings")) {
        auto perms = Strings(b.at("permissions"));
        bound.insert(perms.begin(), perms.end());
        out.push_back({perms, {b.at("condition").at("expression").get<std::string>()}});
      }
      // Role permissions outside every binding apply unconditionally.
      NativeGrant rest;
      for (const auto& p : Strings(body.at("includedPermissions"))) {
        if (!bound.count(p)) rest.actions.push_back(p);
      }
      if (!rest.actions.empty()) {
        rest.resources.push_back("true");
        out.push_back(std::move(rest));
      }
      break;
    }
    case Vendor::kAzure:
      for (const auto& role : body.at("roleDefinitions")) {
        NativeGrant g;
        auto deny = Strings(role.at("NotActions"));
        auto deny_data = Strings(role.at("NotDataActions"));
        deny.insert(deny.end(), deny_data.begin(), deny_data.end());
        for (const char* key : {"Actions", "DataActions"}) {
          for (const auto& a : Strings(role.at(key))) {
            bool excluded = std::any_of(deny.begin(), deny.end(),
                                        [&](const std::string& d) { return PatternMatches(d, a); });
            if (!excluded) g.actions.push_back(a);
          }
        }
        g.resources = Strings(role.at("AssignableScopes"));
        out.push_back(std::move(g));
      }
      break;
    case Vendor::kUnknown:
      Unparseable("policy vendor is unknown");
  }
  return out;
}

// GCP condition expression to a rendered resource pattern.
std::optional<std::string> GcpExpressionPattern(const std::string& expression) {
  static const std::regex eq(R"re(^resource\.name == "((?:[^"\\]|\\.)*)"$)re");
  static const std::regex starts(R"re(^resource\.name\.startsWith\("((?:[^"\\]|\\.)*)"\)$)re");
  if (expression == "true") return "*";
  std::smatch m;
  if (std::regex_match(expression, m, eq)) return Json::parse("\"" + m[1].str() + "\"").get<std::string>();
  if (std::regex_match(expression, m, starts)) {
    return Json::parse("\"" + m[1].str() + "\"").get<std::string>() + "*";
  }
  return std::nullopt;
}

bool IsFullWildcard(Vendor vendor, const std::string& resource) {
  static const std::regex subscription("^/subscriptions/[^/]+/?$");
  switch (vendor) {
    case Vendor::kAws: return resource == "*";
    case Vendor::kGcp: return resource == "true" || resource == "*";
    case Vendor::kAzure: return resource == "/" || std::regex_match(resource, subscription);
    case Vendor::kUnknown: return false;
  }
  return false;
}

}  // namespace

std::string NamingConfig::Apply(const std::string& text, Vendor vendor) const {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = text.find('{', pos);
    std::size_t close = open == std::string::npos ? open : text.find('}', open);
    if (close == std::string::npos) return out + text.substr(pos);
    out += text.substr(pos, open - pos);
    std::string name = text.substr(open + 1, close - open - 1);
    auto it = values.find(name);
    if (it == values.end() || it->second.empty()) {
      throw Error(ErrorCode::kMissingNaming, std::string(VendorName(vendor)) +
                                                 " resource names need naming." + name);
    }
    out += it->second;
    pos = close + 1;
  }
}

Json TripleJson(const PolicyTriple& t) {
  return Json{{"service", t.service}, {"resource", t.resource}, {"action", t.action}};
}

std::string RenderResource(const RuleSet& rules, const std::string& service, Vendor vendor,
                           const std::string& neutral, const NamingConfig& naming) {
  const ServiceInfo* info = rules.FindService(service);
  if (info == nullptr || !info->templates.count(vendor)) {
    throw Error(ErrorCode::kMissingRule, "no resource template for " + service);
  }
  const ResourceTemplate& t = info->templates.at(vendor);
  if (neutral == "*") return naming.Apply(t.service_wide, vendor);
  std::string out = naming.Apply(t.prefix, vendor);
  std::size_t cursor = 0;
  for (const auto& sep : t.separators) {
    std::size_t slash = neutral.find('/', cursor);
    if (slash == std::string::npos) break;
    out += neutral.substr(cursor, slash - cursor) + sep;
    cursor = slash + 1;
  }
  return out + neutral.substr(cursor);
}

std::optional<std::string> ParseResource(const RuleSet& rules, const std::string& service,
                                         Vendor vendor, const std::string& rendered,
                                         const NamingConfig& naming) {
  const ServiceInfo* info = rules.FindService(service);
  if (info == nullptr || !info->templates.count(vendor)) return std::nullopt;
  const ResourceTemplate& t = info->templates.at(vendor);
  try {
    if (rendered == naming.Apply(t.service_wide, vendor)) return "*";
    std::string prefix = naming.Apply(t.prefix, vendor);
    if (rendered.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
    std::string rest = rendered.substr(prefix.size());
    std::string out;
    std::size_t cursor = 0;
    for (const auto& sep : t.separators) {
      std::size_t at = rest.find(sep, cursor);
      if (at == std::string::npos) break;
      out += rest.substr(cursor, at - cursor) + "/";
      cursor = at + sep.size();
    }
    out += rest.substr(cursor);
    if (out.empty()) return std::nullopt;
    return out;
  } catch (const Error&) {
    return std::nullopt;
  }
}

PolicyDocument EmitPolicy(const PermissionSet& pset, Vendor vendor, const NamingConfig& naming,
                          const RuleSet& rules) {
  if (vendor == Vendor::kUnknown) throw Error(ErrorCode::kUsage, "no target vendor");
  PolicyDocument doc;
  doc.vendor = vendor;
  doc.scope = pset.scope;
  doc.function_id = pset.function_id;
  doc.source_set_digest = pset.Digest();
  doc.no_permissions_required = pset.requirements.empty();

  // resource (rendered) -> native actions, split by plane for Azure
  std::map<std::string, std::set<std::string>> control, data;
  std::set<std::string> service_wide;
  for (const auto& req : pset.requirements) {
    const ActionRendering* rendering = rules.FindAction(req.action);
    if (rendering == nullptr || rendering->For(vendor).empty()) {
      throw Error(ErrorCode::kUnmappableAction, req.action + " on " + req.resource + " has no " +
                                                    std::string(VendorName(vendor)) + " rendering");
    }
    const std::string& native = rendering->For(vendor);
    std::string resource = RenderResource(rules, req.service(), vendor, req.resource, naming);
    if (vendor == Vendor::kGcp) {
      if (req.resource == "*") {
        resource = "true";
      } else if (!resource.empty() && resource.back() == '*') {
        resource = "resource.name.startsWith(" + Quote(resource.substr(0, resource.size() - 1)) + ")";
      } else {
        resource = "resource.name == " + Quote(resource);
      }
    }
    bool is_data = vendor == Vendor::kAzure && rendering->azure_data;
    (is_data ? data : control)[resource].insert(native);
    if (req.resource == "*") service_wide.insert(native);
  }
  doc.service_wide_actions.assign(service_wide.begin(), service_wide.end());

  std::set<std::string> resources;
  for (const auto& [r, a] : control) resources.insert(r);
  for (const auto& [r, a] : data) resources.insert(r);

  switch (vendor) {
    case Vendor::kAws: {
      Json statements = Json::array();
      int n = 0;
      for (const auto& r : resources) {
        statements.push_back({{"Sid", "Stmt" + std::to_string(++n)},
                              {"Effect", "Allow"},
                              {"Action", OneOrMany(control[r])},
                              {"Resource", r}});
      }
      doc.body = {{"Version", kAwsVersion}, {"Statement", std::move(statements)}};
      break;
    }
    case Vendor::kGcp: {
      std::set<std::string> all;
      Json bindings = Json::array();
      int n = 0;
      for (const auto& r : resources) {
        all.insert(control[r].begin(), control[r].end());
        bindings.push_back(
            {{"permissions", std::vector<std::string>(control[r].begin(), control[r].end())},
             {"condition", {{"title", "grant" + std::to_string(++n)}, {"expression", r}}}});
      }
      doc.body = {{"title", "privscope " + pset.function_id},
                  {"description", std::string(ScopeName(pset.scope)) + " scope"},
                  {"stage", "GA"},
                  {"includedPermissions", std::vector<std::string>(all.begin(), all.end())},
                  {"bindings", std::move(bindings)}};
      break;
    }
    case Vendor::kAzure: {
      Json roles = Json::array();
      int n = 0;
      for (const auto& r : resources) {
        roles.push_back(
            {{"Name", "privscope " + pset.function_id + " " + std::to_string(++n)},
             {"IsCustom", true},
             {"Description", std::string(ScopeName(pset.scope)) + " scope"},
             {"Actions", std::vector<std::string>(control[r].begin(), control[r].end())},
             {"NotActions", Json::array()},
             {"DataActions", std::vector<std::string>(data[r].begin(), data[r].end())},
             {"NotDataActions", Json::array()},
             {"AssignableScopes", Json::array({r})}});
      }
      doc.body = {{"roleDefinitions", std::move(roles)}};
      break;
    }
    case Vendor::kUnknown:
      break;
  }
  return doc;
}

Json PolicyDocument::ToJson() const {
  return {{"vendor", std::string(VendorName(vendor))},
          {"scope", std::string(ScopeName(scope))},
          {"function_id", function_id},
          {"source_set_digest", source_set_digest},
          {"no_permissions_required", no_permissions_required},
          {"service_wide_actions", service_wide_actions},
          {"policy", body}};
}

PolicyDocument PolicyDocument::FromJson(const Json& json) {
  if (!json.is_object()) Unparseable("policy is not a JSON object");
  PolicyDocument doc;
  if (json.contains("policy") && json.contains("vendor")) {
    auto problems = Schema("policy-document").Validate(json);
    if (!problems.empty()) Unparseable(problems.front());
    doc.vendor = *ParseVendor(json.at("vendor").get<std::string>());
    doc.scope = *ParseScope(json.at("scope").get<std::string>());
    doc.function_id = json.at("function_id").get<std::string>();
    doc.source_set_digest = json.at("source_set_digest").get<std::string>();
    doc.no_permissions_required = json.at("no_permissions_required").get<bool>();
    doc.service_wide_actions = Strings(json.at("service_wide_actions"));
    doc.body = json.at("policy");
  } else {
    doc.bare = true;
    if (json.contains("Statement")) {
      doc.vendor = Vendor::kAws;
    } else if (json.contains("includedPermissions") || json.contains("bindings")) {
      doc.vendor = Vendor::kGcp;
    } else if (json.contains("roleDefinitions")) {
      doc.vendor = Vendor::kAzure;
    } else if (json.contains("AssignableScopes")) {
      doc.vendor = Vendor::kAzure;
      doc.body = {{"roleDefinitions", Json::array({json})}};
    } else {
      Unparseable("unrecognized policy shape");
    }
    if (doc.body.is_null()) doc.body = json;
  }
  auto problems = Schema(BodySchema(doc.vendor)).Validate(doc.body);
  if (!problems.empty()) Unparseable(problems.front());
  return doc;
}

PolicyGrants ExpandPolicy(const PolicyDocument& doc, const RuleSet& rules, Vendor source,
                          const NamingConfig& naming) {
  PolicyGrants out;
  for (const auto& grant : NativeGrants(doc)) {
    for (const auto& native : grant.actions) {
      auto unified = UnifiedFor(rules, doc.vendor, source, native);
      for (const auto& raw : grant.resources) {
        std::optional<std::string> rendered =
            doc.vendor == Vendor::kGcp ? GcpExpressionPattern(raw) : std::optional(raw);
        if (unified.empty()) {
          out.foreign.insert({"", raw, native});
          continue;
        }
        for (const auto& u : unified) {
          std::string service = ActionService(u);
          std::optional<std::string> neutral;
          if (rendered) {
            neutral = *rendered == "*" ? std::optional<std::string>("*")
                                       : ParseResource(rules, service, doc.vendor, *rendered, naming);
          }
          if (neutral) {
            out.triples.insert({service, *neutral, u});
          } else {
            out.foreign.insert({service, raw, u});
          }
        }
      }
    }
  }
  return out;
}

bool ValidationReport::ok() const {
  return std::none_of(findings.begin(), findings.end(),
                      [](const PolicyFinding& f) { return f.severity == "error"; });
}

Json ValidationReport::ToJson() const {
  Json list = Json::array();
  for (const auto& f : findings) {
    list.push_back({{"severity", f.severity}, {"kind", f.kind}, {"message", f.message}});
  }
  return {{"ok", ok()}, {"findings", std::move(list)}};
}

ValidationReport ValidatePolicy(const PolicyDocument& doc, const RuleSet& /*rules*/,
                                const std::optional<std::string>& current_set_digest) {
  ValidationReport report;
  auto add = [&](const char* severity, const char* kind, std::string message) {
    report.findings.push_back({severity, kind, std::move(message)});
  };
  if (!doc.bare) {
    for (const auto& p : Schema("policy-document").Validate(doc.ToJson())) add("error", "schema", p);
  }
  for (const auto& p : Schema(BodySchema(doc.vendor)).Validate(doc.body)) add("error", "schema", p);
  if (!report.ok()) return report;

  std::set<std::string> service_wide(doc.service_wide_actions.begin(),
                                     doc.service_wide_actions.end());
  std::map<std::pair<std::string, std::string>, int> seen;
  std::set<std::string> wildcard_actions;
  std::vector<NativeGrant> grants;
  try {
    grants = NativeGrants(doc);
  } catch (const Error& e) {
    add("error", "schema", e.what());
    return report;
  }
  for (const auto& g : grants) {
    for (const auto& a : g.actions) {
      if (a.find('*') != std::string::npos && wildcard_actions.insert(a).second) {
        add("error", "wildcard-action", "action " + a + " uses a wildcard");
      }
      for (const auto& r : g.resources) {
        if (++seen[{a, r}] == 2) add("warning", "duplicate", a + " on " + r + " is granted more than once");
        if (doc.scope == ScopeLevel::kEntity && IsFullWildcard(doc.vendor, r) &&
            !service_wide.count(a)) {
          add("error", "wildcard-resource", a + " is granted on every resource");
        }
      }
    }
  }
  if (current_set_digest && *current_set_digest != doc.source_set_digest) {
    add("warning", "stale", "document was derived from permission set " +
                                doc.source_set_digest.substr(0, 12) + ", current is " +
                                current_set_digest->substr(0, 12));
  }
  return report;
}

bool PolicyEvaluator::Permits(const std::string& service, const std::string& resource,
                              const std::string& action) const {
  for (const auto& g : grants_) {
    if (g.service == service && g.action == action && PatternMatches(g.resource, resource)) {
      return true;
    }
  }
  return false;
}

}  // namespace privscope

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

#include "privscope/source/rules.h"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "privscope/common/error.h"
#include "privscope/common/schema.h"

namespace privscope {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void Invalid(const fs::path& file, const std::string& message) {
  throw Error(ErrorCode::kInvalidRules, file.filename().string() + ": " + message);
}

void ValidateAgainst(const fs::path& schema_path, const fs::path& file, const Json& doc) {
  SchemaValidator validator(ParseJsonFile(schema_path));
  auto problems = validator.Validate(doc);
  if (!problems.empty()) Invalid(file, problems.front());
}

std::map<std::string, std::string> StringMap(const Json& j) {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) out[k] = v.get<std::string>();
  return out;
}

std::vector<std::string> Strings(const Json& j, const char* key) {
  std::vector<std::string> out;
  if (j.contains(key)) {
    for (const auto& v : j.at(key)) out.push_back(v.get<std::string>());
  }
  return out;
}

LanguageVendorRules ParsePair(const fs::path& file, const Json& j) {
  LanguageVendorRules r;
  auto lang = ParseLanguage(j.at("language").get<std::string>());
  auto vendor = ParseVendor(j.at("vendor").get<std::string>());
  if (!lang || !vendor || *vendor == Vendor::kUnknown) Invalid(file, "bad language or vendor");
  r.language = *lang;
  r.vendor = *vendor;
  r.version = j.at("version").get<int>();
  for (const auto& c : j.at("constructors")) {
    ConstructorRule cr;
    cr.symbol = c.at("symbol").get<std::string>();
    cr.service = c.value("service", "");
    cr.kind = c.value("kind", "client");
    if (c.contains("service_arg")) cr.service_arg = c.at("service_arg").get<int>();
    if (c.contains("service_map")) cr.service_map = StringMap(c.at("service_map"));
    cr.command_style = c.value("command_style", false);
    if (cr.service.empty() && !cr.service_arg) Invalid(file, cr.symbol + ": no service");
    r.constructors.push_back(std::move(cr));
  }
  if (j.contains("derivations")) {
    for (const auto& d : j.at("derivations")) {
      DerivationRule dr;
      dr.service = d.value("service", "");
      dr.on = d.at("on").get<std::string>();
      if (d.contains("property")) {
        dr.method = d.at("property").get<std::string>();
        dr.property = true;
      } else {
        dr.method = d.at("method").get<std::string>();
      }
      dr.kind = d.at("kind").get<std::string>();
      dr.bind = Strings(d, "bind");
      if (d.contains("service_arg")) dr.service_arg = d.at("service_arg").get<int>();
      if (d.contains("service_map")) dr.service_map = StringMap(d.at("service_map"));
      r.derivations.push_back(std::move(dr));
    }
  }
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& a : j.at("actions")) {
    ActionRule ar;
    ar.service = a.at("service").get<std::string>();
    ar.on = a.value("on", "client");
    ar.method = a.at("method").get<std::string>();
    ar.actions = Strings(a, "actions");
    ar.resource_params = Strings(a, "resource_params");
    ar.positional = Strings(a, "positional");
    ar.wildcard_required = a.value("wildcard_required", false);
    ar.note = a.value("note", "");
    if (!keys.emplace(ar.service, ar.QualifiedMethod()).second) {
      Invalid(file, "duplicate rule for " + ar.service + "." + ar.QualifiedMethod());
    }
    if (ar.resource_params.empty() && !ar.wildcard_required) {
      Invalid(file, ar.service + "." + ar.QualifiedMethod() +
                        ": needs resource_params or wildcard_required");
    }
    r.actions.push_back(std::move(ar));
  }
  r.transparent = Strings(j, "transparent");
  r.passthrough = Strings(j, "passthrough");
  r.method_suffixes = Strings(j, "method_suffixes");
  if (j.contains("value_methods")) {
    for (const auto& [k, v] : j.at("value_methods").items()) r.value_methods[k] = v.get<int>();
  }
  if (j.contains("command")) {
    r.send_method = j.at("command").at("method").get<std::string>();
    r.command_suffix = j.at("command").at("suffix").get<std::string>();
  }
  return r;
}

ResourceTemplate ParseTemplate(const Json& j) {
  ResourceTemplate t;
  t.prefix = j.at("prefix").get<std::string>();
  t.separators = Strings(j, "separators");
  t.service_wide = j.at("service_wide").get<std::string>();
  return t;
}

}  // namespace

std::string ActionRule::QualifiedMethod() const {
  return on == "client" ? method : on + "." + method;
}

const ConstructorRule* LanguageVendorRules::FindConstructor(const std::string& symbol) const {
  for (const auto& c : constructors) {
    if (c.symbol == symbol) return &c;
  }
  return nullptr;
}

const DerivationRule* LanguageVendorRules::FindDerivation(const std::string& service,
                                                          const std::string& kind,
                                                          const std::string& method,
                                                          bool property) const {
  for (const auto& d : derivations) {
    if (d.on == kind && d.method == method && d.property == property &&
        (d.service.empty() || d.service == service)) {
      return &d;
    }
  }
  return nullptr;
}

const ActionRule* LanguageVendorRules::FindAction(const std::string& service,
                                                  const std::string& qualified_method) const {
  for (const auto& a : actions) {
    if (a.service == service && a.QualifiedMethod() == qualified_method) return &a;
  }
  return nullptr;
}

const std::string& ActionRendering::For(Vendor vendor) const {
  return vendor == Vendor::kAws ? aws : vendor == Vendor::kGcp ? gcp : azure;
}

std::string ActionService(const std::string& unified) {
  auto colon = unified.find(':');
  return colon == std::string::npos ? unified : unified.substr(0, colon);
}

fs::path RuleSet::DefaultDirectory() {
  if (const char* env = std::getenv("PRIVSCOPE_RULES_DIR"); env != nullptr && *env) {
    return env;
  }
  return PRIVSCOPE_DEFAULT_RULES_DIR;
}

fs::path RuleSet::DefaultSchemasDirectory() {
  if (const char* env = std::getenv("PRIVSCOPE_SCHEMAS_DIR"); env != nullptr && *env) {
    return env;
  }
  return PRIVSCOPE_DEFAULT_SCHEMAS_DIR;
}

const RuleSet& RuleSet::Default() {
  static const RuleSet rules = Load(DefaultDirectory(), DefaultSchemasDirectory());
  return rules;
}

RuleSet RuleSet::Load(const fs::path& dir, const fs::path& schemas_dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kInvalidRules, "rules directory not found: " + dir.string());
  }
  RuleSet set;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::string combined;
  for (const auto& file : files) {
    Json doc = ParseJsonFile(file);
    combined += file.filename().string() + "\n" + CanonicalJson(doc);
    std::string name = file.filename().string();
    if (name == "actions.json") {
      ValidateAgainst(schemas_dir / "actions.schema.json", file, doc);
      for (const auto& [unified, r] : doc.at("actions").items()) {
        ActionRendering ar;
        ar.aws = r.at("aws").get<std::string>();
        ar.gcp = r.at("gcp").get<std::string>();
        ar.azure = r.at("azure").get<std::string>();
        ar.azure_data = r.value("azure_data", false);
        set.actions_[unified] = ar;
      }
    } else if (name == "services.json") {
      ValidateAgainst(schemas_dir / "services.schema.json", file, doc);
      for (const auto& [svc, s] : doc.at("services").items()) {
        ServiceInfo info;
        info.name = svc;
        auto vendor = ParseVendor(s.at("vendor").get<std::string>());
        if (!vendor) Invalid(file, svc + ": bad vendor");
        info.vendor = *vendor;
        info.resource_addressed = s.value("resource_addressed", true);
        for (const auto& slot : s.at("slots")) {
          info.slots.push_back({slot.at("name").get<std::string>(), Strings(slot, "params")});
        }
        for (const auto& [v, t] : s.at("templates").items()) {
          auto tv = ParseVendor(v);
          if (!tv) Invalid(file, svc + ": bad template vendor " + v);
          info.templates[*tv] = ParseTemplate(t);
        }
        for (Vendor v : {Vendor::kAws, Vendor::kGcp, Vendor::kAzure}) {
          if (!info.templates.count(v)) {
            Invalid(file, svc + ": missing template for " + std::string(VendorName(v)));
          }
        }
        set.services_[svc] = std::move(info);
      }
    } else if (name == "vendors.json") {
      ValidateAgainst(schemas_dir / "vendors.schema.json", file, doc);
      for (const auto& [lang_name, vendors] : doc.at("imports").items()) {
        auto lang = ParseLanguage(lang_name);
        if (!lang) Invalid(file, "bad language " + lang_name);
        for (const auto& [vendor_name, prefixes] : vendors.items()) {
          auto vendor = ParseVendor(vendor_name);
          if (!vendor) Invalid(file, "bad vendor " + vendor_name);
          for (const auto& p : prefixes) {
            set.import_prefixes_[{*lang, *vendor}].push_back(p.get<std::string>());
          }
        }
      }
    } else {
      ValidateAgainst(schemas_dir / "rules.schema.json", file, doc);
      set.pairs_.push_back(ParsePair(file, doc));
    }
  }
  // Cross-file consistency.
  for (const auto& pair : set.pairs_) {
    for (const auto& a : pair.actions) {
      const ServiceInfo* svc = set.FindService(a.service);
      if (svc == nullptr) Invalid(dir / "services.json", "unknown service " + a.service);
      if (svc->vendor != pair.vendor) {
        Invalid(dir, a.service + " used by a rule file of another vendor");
      }
      for (const auto& act : a.actions) {
        if (!set.actions_.count(act)) Invalid(dir / "actions.json", "unknown action " + act);
        if (ActionService(act) != a.service) {
          Invalid(dir, act + " does not belong to service " + a.service);
        }
      }
    }
  }
  // Renderings must be injective for actions of the same source vendor so
  // that emitted documents grant exactly what the permission set does.
  for (Vendor source : {Vendor::kAws, Vendor::kGcp, Vendor::kAzure}) {
    for (Vendor target : {Vendor::kAws, Vendor::kGcp, Vendor::kAzure}) {
      std::map<std::string, std::string> seen;
      for (const auto& [unified, r] : set.actions_) {
        const ServiceInfo* svc = set.FindService(ActionService(unified));
        if (svc == nullptr) Invalid(dir / "actions.json", "unknown service in " + unified);
        if (svc->vendor != source) continue;
        const std::string& native = r.For(target);
        auto [it, inserted] = seen.emplace(native, unified);
        if (!inserted) {
          Invalid(dir / "actions.json",
                  unified + " and " + it->second + " share rendering " + native);
        }
      }
    }
  }
  set.digest_ = Sha256Hex(combined);
  return set;
}

const LanguageVendorRules* RuleSet::Find(Language language, Vendor vendor) const {
  for (const auto& p : pairs_) {
    if (p.language == language && p.vendor == vendor) return &p;
  }
  return nullptr;
}

bool RuleSet::IsSupported(Language language, Vendor vendor) const {
  return Find(language, vendor) != nullptr;
}

std::vector<Vendor> RuleSet::VendorsForImport(Language language,
                                              const std::string& module) const {
  std::vector<Vendor> out;
  for (const auto& [key, prefixes] : import_prefixes_) {
    if (key.first != language) continue;
    for (const auto& p : prefixes) {
      bool match = module == p;
      if (!match && module.size() > p.size() && module.compare(0, p.size(), p) == 0) {
        char next = module[p.size()];
        match = p.back() == '/' || next == '/' || next == '.';
      }
      if (match) {
        out.push_back(key.second);
        break;
      }
    }
  }
  return out;
}

const ActionRendering* RuleSet::FindAction(const std::string& unified) const {
  auto it = actions_.find(unified);
  return it == actions_.end() ? nullptr : &it->second;
}

const ServiceInfo* RuleSet::FindService(const std::string& name) const {
  auto it = services_.find(name);
  return it == services_.end() ? nullptr : &it->second;
}

std::optional<std::string> RuleSet::UnifiedFromNative(Vendor doc_vendor, Vendor source,
                                                      const std::string& native) const {
  for (const auto& [unified, r] : actions_) {
    const ServiceInfo* svc = FindService(ActionService(unified));
    if (svc == nullptr || svc->vendor != source) continue;
    const std::string& rendered = r.For(doc_vendor);
    if (rendered == native) return unified;
  }
  return std::nullopt;
}

}  // namespace privscope

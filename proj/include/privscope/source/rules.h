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

#ifndef PRIVSCOPE_SOURCE_RULES_H_
#define PRIVSCOPE_SOURCE_RULES_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "privscope/common/io.h"
#include "privscope/source/source_unit.h"

namespace privscope {

// Client construction: a call (or `new`) of a fully qualified imported
// symbol, e.g. "aws-sdk.S3" or "boto3.client".
struct ConstructorRule {
  std::string symbol;
  std::string service;  // empty when chosen by service_arg
  std::string kind = "client";
  std::optional<int> service_arg;
  std::map<std::string, std::string> service_map;  // SDK name -> service
  bool command_style = false;                      // v3-style send(new XCommand)
};

// Method or property on a handle that yields a narrower handle, binding
// its arguments to named resource slots (bucket(), Table(), container()).
struct DerivationRule {
  std::string service;  // empty matches any service
  std::string on;       // handle kind
  std::string method;
  bool property = false;
  std::string kind;
  std::vector<std::string> bind;
  std::optional<int> service_arg;
  std::map<std::string, std::string> service_map;
};

struct ActionRule {
  std::string service;
  std::string on = "client";
  std::string method;
  std::vector<std::string> actions;
  std::vector<std::string> resource_params;
  std::vector<std::string> positional;
  bool wildcard_required = false;
  std::string note;

  // Method name as recorded on call sites: plain for client methods,
  // "<kind>.<method>" for derived handles.
  std::string QualifiedMethod() const;
};

struct LanguageVendorRules {
  Language language = Language::kJavaScript;
  Vendor vendor = Vendor::kAws;
  int version = 0;
  std::vector<ConstructorRule> constructors;
  std::vector<DerivationRule> derivations;
  std::vector<ActionRule> actions;
  std::vector<std::string> transparent;   // identity wrappers (aws.String)
  std::vector<std::string> passthrough;   // methods that are not SDK calls
  std::vector<std::string> method_suffixes;  // stripped before lookup (WithContext)
  // Methods on handles returning a plain value built from one argument
  // (topic_path(project, topic) -> topic).
  std::map<std::string, int> value_methods;
  std::string send_method;     // "send" for command-style clients
  std::string command_suffix;  // "Command"

  const ConstructorRule* FindConstructor(const std::string& symbol) const;
  const DerivationRule* FindDerivation(const std::string& service, const std::string& kind,
                                       const std::string& method, bool property) const;
  const ActionRule* FindAction(const std::string& service,
                               const std::string& qualified_method) const;
};

struct ActionRendering {
  std::string aws;
  std::string gcp;
  std::string azure;
  bool azure_data = false;  // rendered under DataActions

  const std::string& For(Vendor vendor) const;
};

// Per-vendor resource grammar for one service. A neutral resource
// "a/b/c" renders as prefix + a + separators[0] + b + ...
struct ResourceTemplate {
  std::string prefix;
  std::vector<std::string> separators;
  std::string service_wide;  // rendering of the service wildcard
};

// One component of a resource path and the call parameters that may
// carry it at runtime.
struct ResourceSlot {
  std::string name;
  std::vector<std::string> params;
};

struct ServiceInfo {
  std::string name;
  Vendor vendor = Vendor::kAws;
  bool resource_addressed = true;
  std::vector<ResourceSlot> slots;  // neutral order, e.g. bucket then key
  std::map<Vendor, ResourceTemplate> templates;
};

class RuleSet {
 public:
  // Loads every rule file from `dir`, validating each against the schemas
  // under `schemas_dir`. Throws Error(kInvalidRules) naming the file.
  static RuleSet Load(const std::filesystem::path& dir,
                      const std::filesystem::path& schemas_dir);
  // Directory from PRIVSCOPE_RULES_DIR or the compiled-in default.
  static std::filesystem::path DefaultDirectory();
  static std::filesystem::path DefaultSchemasDirectory();
  // Process-wide instance loaded from the default directories.
  static const RuleSet& Default();

  const LanguageVendorRules* Find(Language language, Vendor vendor) const;
  // Vendors whose SDK import prefixes match `module` for this language.
  std::vector<Vendor> VendorsForImport(Language language, const std::string& module) const;
  bool IsSupported(Language language, Vendor vendor) const;

  const ActionRendering* FindAction(const std::string& unified) const;
  const ServiceInfo* FindService(const std::string& name) const;
  const std::map<std::string, ActionRendering>& actions() const { return actions_; }
  const std::map<std::string, ServiceInfo>& services() const { return services_; }
  const std::vector<LanguageVendorRules>& pairs() const { return pairs_; }

  // Unified action whose `doc_vendor` rendering is `native`, considering
  // only actions of services owned by `source`. Renderings are injective
  // per source vendor, so the answer is unique.
  std::optional<std::string> UnifiedFromNative(Vendor doc_vendor, Vendor source,
                                               const std::string& native) const;

  // Content hash of all loaded rule files.
  const std::string& digest() const { return digest_; }

 private:
  std::vector<LanguageVendorRules> pairs_;
  std::map<std::pair<Language, Vendor>, std::vector<std::string>> import_prefixes_;
  std::map<std::string, ActionRendering> actions_;
  std::map<std::string, ServiceInfo> services_;
  std::string digest_;
};

// Service part of a unified action ("s3:PutObject" -> "s3").
std::string ActionService(const std::string& unified);

}  // namespace privscope

#endif  // PRIVSCOPE_SOURCE_RULES_H_

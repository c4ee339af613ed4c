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

#ifndef PRIVSCOPE_SOURCE_REGISTRY_H_
#define PRIVSCOPE_SOURCE_REGISTRY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "privscope/common/error.h"
#include "privscope/common/io.h"
#include "privscope/source/rules.h"
#include "privscope/source/source_unit.h"
#include "privscope/source/value.h"

namespace privscope {

// Alternative values a name or parameter may hold across paths.
using ValueSet = std::vector<ValuePtr>;

struct SdkImport {
  std::string module;
  std::string local;  // empty for side-effect imports
  Vendor vendor = Vendor::kUnknown;
  SourceLocation location;
};

struct ClientConstruction {
  std::string service;
  std::string symbol;
  SourceLocation location;
  std::uint32_t begin = 0;  // whole constructor expression
  std::uint32_t end = 0;
  bool guarded = false;  // already wrapped by an injected guard
};

struct ServiceCallSite {
  std::string client;   // receiver source text
  std::string service;
  std::string method;   // qualified: "putObject", "file.save"
  bool known_method = false;
  std::map<std::string, ValueSet> params;
  SourceLocation location;  // method name token
  std::uint32_t offset = 0;
  // Helper call through which this site was reached, when expanded from a
  // one-level wrapper.
  std::optional<SourceLocation> via;
  std::optional<SourceLocation> client_origin;  // construction of the client
  bool guarded = false;
  // Byte ranges in the source, used by the integrator.
  std::uint32_t call_begin = 0;
  std::uint32_t call_end = 0;
  std::uint32_t receiver_begin = 0;
  std::uint32_t receiver_end = 0;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> input;  // request argument
  // Start of the innermost statement that can host a line inserted before it.
  std::uint32_t anchor = 0;
};

struct EnvRef {
  std::string env_name;
  std::vector<SourceLocation> reads;
  std::vector<SourceLocation> use_sites;  // call sites whose parameters it feeds
};

struct Finding {
  std::string kind;  // unknown-method, unknown-service, ...
  std::string message;
  SourceLocation location;
};

struct SemanticRegistry {
  std::string path;
  Language language = Language::kJavaScript;
  Vendor vendor = Vendor::kUnknown;
  std::string source_digest;
  std::vector<SdkImport> imports;
  std::vector<ClientConstruction> constructions;
  std::vector<ServiceCallSite> call_sites;
  std::vector<EnvRef> env_refs;
  // "<scope>:<name>" -> string values assigned on any path.
  std::map<std::string, ValueSet> assignments;
  std::vector<Finding> findings;
  // End offsets of top-level import statements (and top-level require
  // declarations), ascending.
  std::vector<std::uint32_t> import_ends;

  Json ToJson() const;
};

struct VendorDetection {
  Vendor vendor = Vendor::kUnknown;
  std::vector<Vendor> candidates;  // vendors whose SDK imports appear
};

// Vendor by SDK import table. Several vendors are resolved by client
// construction: exactly one must construct clients, otherwise throws
// ConflictingVendors. Throws UnsupportedCombination for pairs without rules.
VendorDetection IdentifyVendor(const SourceUnit& unit, Language language,
                               const RuleSet& rules);

// Parses, identifies language and vendor (unless already set on the unit)
// and builds the registry. Throws ParseError on invalid input.
SemanticRegistry BuildSemanticRegistry(const SourceUnit& unit, const RuleSet& rules);

// Findings as JSON lines with file/line/column.
std::string FindingsJsonLines(const SemanticRegistry& registry);

Json LocationJson(const SourceLocation& location);

}  // namespace privscope

#endif  // PRIVSCOPE_SOURCE_REGISTRY_H_

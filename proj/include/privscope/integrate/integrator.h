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

#ifndef PRIVSCOPE_INTEGRATE_INTEGRATOR_H_
#define PRIVSCOPE_INTEGRATE_INTEGRATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "privscope/allow/allowlist.h"

namespace privscope {

enum class HookKind { kWrapperClass, kMethodRedefinition, kExplicitCall };

std::string_view HookKindName(HookKind kind);

struct HookTemplate {
  Language language = Language::kJavaScript;
  Vendor vendor = Vendor::kAws;
  HookKind kind = HookKind::kMethodRedefinition;
  std::vector<std::string> insertion_points;  // after-imports, around-construction, before-call, end-of-file
};

// Throws UnsupportedCombination for pairs without rules.
HookTemplate HookTemplateFor(Language language, Vendor vendor, const RuleSet& rules);

enum class EmbedMode { kInline, kSidecar };

std::string_view EmbedModeName(EmbedMode mode);
std::optional<EmbedMode> ParseEmbedMode(std::string_view name);

// First line of every instrumented file, after any shebang or encoding
// line: "<comment> privscope:instrumented sha256=<original digest>".
inline constexpr char kSentinelMarker[] = "privscope:instrumented";

bool IsInstrumented(const std::string& text);

struct InjectedRegion {
  std::uint32_t begin = 0;  // offsets in the instrumented text
  std::uint32_t end = 0;
  // sentinel, preamble, imports, guard-open, guard-close, check, helpers
  std::string role;
};

struct InstrumentedSource {
  std::string path;
  Language language = Language::kJavaScript;
  Vendor vendor = Vendor::kUnknown;
  std::string text;
  std::vector<InjectedRegion> injected_regions;  // ascending, disjoint
  std::string embedded_allowlist_ref;  // "inline" or the sidecar file name
  std::string original_digest;
  std::optional<std::string> sidecar;  // allowlist JSON in sidecar mode

  Json RegionsJson() const;
};

// Sidecar file name for a function source: "<stem>.allowlist.json".
std::string SidecarName(const std::string& source_path);

// Throws AlreadyInstrumented, UnsupportedCombination, ParseError and
// AnchorNotFound.
InstrumentedSource InjectHooks(const SourceUnit& unit, const AllowList& allow, EmbedMode mode,
                               const RuleSet& rules);

// The instrumented text with every injected region removed.
std::string StripInjected(const InstrumentedSource& inst);

struct ReconstructionCheck {
  std::string name;  // parses, strip-equals-original, same-call-sites, sites-guarded
  bool passed = false;
  std::string detail;
};

struct ReconstructionReport {
  std::vector<ReconstructionCheck> checks;

  bool ok() const;
  Json ToJson() const;
};

ReconstructionReport ValidateReconstruction(const SourceUnit& original,
                                            const InstrumentedSource& inst, const RuleSet& rules);

}  // namespace privscope

#endif  // PRIVSCOPE_INTEGRATE_INTEGRATOR_H_

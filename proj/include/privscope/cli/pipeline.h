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

#ifndef PRIVSCOPE_CLI_PIPELINE_H_
#define PRIVSCOPE_CLI_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "privscope/integrate/integrator.h"
#include "privscope/policy/policy.h"

namespace privscope {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 2;      // per-function errors or fallbacks
inline constexpr int kExitDrift = 3;        // live policy grants more than the allowlist
inline constexpr int kExitUsage = 64;
inline constexpr int kExitUnavailable = 69;  // sandbox harness not installed

struct ToolConfig {
  std::vector<std::string> targets;
  std::optional<Vendor> vendor_override;
  ScopeLevel scope = ScopeLevel::kEntity;
  NamingConfig naming;
  std::filesystem::path rules_dir;  // empty: built-in rules
  std::filesystem::path output_dir = "privscope-out";
  bool strict_env = false;
  EnvValues env;  // values for ${NAME} placeholders in allowlists
  EmbedMode allowlist_mode = EmbedMode::kSidecar;
  std::vector<Vendor> emit_vendors;  // empty: the function's own vendor
  // Relative targets, rules_dir and output_dir resolve against this.
  std::filesystem::path base_dir = ".";

  // Validates against the config schema. Throws Error(kUsage).
  static ToolConfig FromJson(const Json& json, const std::filesystem::path& base_dir);
  static ToolConfig Load(const std::filesystem::path& path);
};

// One function: a source file, or every source file under a directory.
struct FunctionTarget {
  std::string id;
  std::string target;                        // as written
  std::vector<std::string> display_names;    // target joined with the relative name
  std::vector<std::string> relative_names;   // inside the target; a file target's own name
  std::vector<std::filesystem::path> files;  // resolved
};

// Throws Error(kUsage) for empty, missing or colliding targets.
std::vector<FunctionTarget> ResolveTargets(const ToolConfig& config);

// Union of per-file sets of one function. Throws ConflictingVendors when
// the files use different vendors.
PermissionSet MergePermissionSets(const std::string& function_id,
                                  const std::vector<PermissionSet>& parts);

// Commands. Each returns the process exit code; machine output goes to
// files under the output directory, summaries to `out`, problems to `err`.
int RunAnalyze(const ToolConfig& config, std::ostream& out, std::ostream& err);
int RunEmit(const ToolConfig& config, std::ostream& out, std::ostream& err);
int RunInstrument(const ToolConfig& config, std::ostream& out, std::ostream& err);
int RunDiff(const ToolConfig& config, const std::filesystem::path& live_policy,
            const std::optional<std::string>& function_id, std::ostream& out, std::ostream& err);
int RunReanalyze(const ToolConfig& config, std::ostream& out, std::ostream& err);

}  // namespace privscope

#endif  // PRIVSCOPE_CLI_PIPELINE_H_

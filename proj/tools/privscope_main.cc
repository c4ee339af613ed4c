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

// privscope: least-privilege permissions for serverless functions.

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "privscope/cli/pipeline.h"

namespace {

using privscope::Error;
using privscope::ErrorCode;
using privscope::ToolConfig;

struct Flags {
  std::string config;
  std::string scope;
  std::string vendor;
  bool strict_env = false;
  std::string output;
  std::string mode;
  std::vector<std::string> targets;
};

ToolConfig BuildConfig(const Flags& f) {
  ToolConfig c = f.config.empty() ? ToolConfig{} : ToolConfig::Load(f.config);
  if (!f.targets.empty()) {
    c.targets = f.targets;
    if (!f.config.empty()) {
      // Command-line targets are relative to the working directory.
      auto base = std::filesystem::absolute(c.base_dir).lexically_normal();
      for (auto& t : c.targets) {
        t = std::filesystem::absolute(t).lexically_normal().lexically_relative(base).generic_string();
      }
    }
  }
  if (!f.scope.empty()) {
    auto s = privscope::ParseScope(f.scope);
    if (!s) throw Error(ErrorCode::kUsage, "unknown scope " + f.scope);
    c.scope = *s;
  }
  if (!f.vendor.empty()) {
    auto v = privscope::ParseVendor(f.vendor);
    if (!v || *v == privscope::Vendor::kUnknown) {
      throw Error(ErrorCode::kUsage, "unknown vendor " + f.vendor);
    }
    c.vendor_override = *v;
  }
  if (f.strict_env) c.strict_env = true;
  if (!f.output.empty()) c.output_dir = std::filesystem::absolute(f.output);
  if (!f.mode.empty()) {
    auto m = privscope::ParseEmbedMode(f.mode);
    if (!m) throw Error(ErrorCode::kUsage, "unknown allowlist mode " + f.mode);
    c.allowlist_mode = *m;
  }
  return c;
}

int Sandbox(const std::vector<std::string>& args) {
  if (args.size() < 2 || (args[0] != "run" && args[0] != "bench")) {
    std::cerr << "usage: privscope sandbox run|bench <fixture> [harness options]\n";
    return privscope::kExitUsage;
  }
  const char* harness = std::getenv("PRIVSCOPE_SANDBOX");
  if (!harness || !*harness || !std::filesystem::exists(harness)) {
    std::cerr << "privscope: sandbox harness not installed (set PRIVSCOPE_SANDBOX to its executable)\n";
    return privscope::kExitUnavailable;
  }
  std::vector<char*> argv;
  argv.push_back(const_cast<char*>(harness));
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  std::cout.flush();
  execv(harness, argv.data());
  std::cerr << "privscope: cannot run " << harness << "\n";
  return privscope::kExitUnavailable;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-privilege permissions for serverless functions"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, "JSON configuration file");
  app.add_option("--scope", flags.scope, "service, object or entity (default entity)");
  app.add_option("--vendor", flags.vendor, "force the source vendor: aws, gcp or azure");
  app.add_flag("--strict-env", flags.strict_env, "fail when an allowlist placeholder has no value");
  app.add_option("--output", flags.output, "artifact directory (default privscope-out)");

  auto* analyze = app.add_subcommand("analyze", "extract permission sets");
  auto* emit = app.add_subcommand("emit", "write vendor policies and allowlists");
  auto* instrument = app.add_subcommand("instrument", "inject runtime hooks");
  auto* diff = app.add_subcommand("diff", "compare a live policy with the allowlist");
  auto* reanalyze = app.add_subcommand("reanalyze", "refresh artifacts of changed functions");
  auto* sandbox = app.add_subcommand("sandbox", "run the sandbox harness (run|bench <fixture>)");
  for (auto* sub : {analyze, emit, instrument, diff, reanalyze}) {
    sub->fallthrough();
    sub->add_option("targets", flags.targets, "function files or directories");
  }
  instrument->add_option("--mode", flags.mode, "inline or sidecar allowlist");
  std::string policy;
  std::string function;
  diff->add_option("--policy", policy, "live policy file")->required();
  diff->add_option("--function", function, "function id when several targets are given");
  sandbox->prefix_command();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : privscope::kExitUsage;
  }

  if (*sandbox) return Sandbox(sandbox->remaining());

  try {
    ToolConfig config = BuildConfig(flags);
    if (*analyze) return privscope::RunAnalyze(config, std::cout, std::cerr);
    if (*emit) return privscope::RunEmit(config, std::cout, std::cerr);
    if (*instrument) return privscope::RunInstrument(config, std::cout, std::cerr);
    if (*reanalyze) return privscope::RunReanalyze(config, std::cout, std::cerr);
    if (*diff) {
      std::optional<std::string> id;
      if (!function.empty()) id = function;
      return privscope::RunDiff(config, std::filesystem::absolute(policy), id, std::cout,
                               std::cerr);
    }
  } catch (const Error& e) {
    std::cerr << "privscope: " << e.what() << "\n";
    return e.code() == ErrorCode::kUsage ? privscope::kExitUsage : privscope::kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "privscope: " << e.what() << "\n";
    return privscope::kExitFailure;
  }
  return privscope::kExitUsage;
}

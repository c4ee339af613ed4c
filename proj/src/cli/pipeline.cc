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

#include "privscope/cli/pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "privscope/common/schema.h"

namespace privscope {
namespace {

namespace fs = std::filesystem;

constexpr int kManifestVersion = 1;
constexpr char kManifestName[] = "manifest.json";

bool IsSourceFile(const fs::path& p) {
  static const std::set<std::string> kExtensions = {".js", ".mjs", ".cjs", ".py", ".go"};
  return kExtensions.count(p.extension().string()) > 0;
}

bool Skipped(const fs::path& name) {
  std::string s = name.string();
  return s.empty() || s[0] == '.' || s == "node_modules" || s == "__pycache__";
}

fs::path Resolve(const fs::path& base, const fs::path& p) { return p.is_absolute() ? p : base / p; }

// Runs fn(i) for i in [0, n) on a small worker pool.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

class Workspace {
 public:
  explicit Workspace(const ToolConfig& config)
      : config_(config), root_(Resolve(config.base_dir, config.output_dir)) {
    if (config.rules_dir.empty()) {
      rules_ = &RuleSet::Default();
    } else {
      owned_ = RuleSet::Load(Resolve(config.base_dir, config.rules_dir),
                             RuleSet::DefaultSchemasDirectory());
      rules_ = &*owned_;
    }
    fs::path manifest = root_ / kManifestName;
    if (fs::exists(manifest)) {
      try {
        manifest_ = ParseJsonFile(manifest);
      } catch (const std::exception&) {
        manifest_ = Json::object();
      }
    }
    if (!manifest_.is_object() || manifest_.value("manifest_version", 0) != kManifestVersion) {
      manifest_ = Json::object();
    }
    manifest_["manifest_version"] = kManifestVersion;
    manifest_["rules_digest"] = rules_->digest();
    if (!manifest_.contains("functions")) manifest_["functions"] = Json::object();
  }

  const RuleSet& rules() const { return *rules_; }
  const ToolConfig& config() const { return config_; }
  const fs::path& root() const { return root_; }

  static std::string Dir(const std::string& id) { return "functions/" + id; }

  void Write(const std::string& rel, std::string_view content) const {
    fs::path p = root_ / rel;
    fs::create_directories(p.parent_path());
    WriteFileIfChanged(p, content);
  }

  bool Exists(const std::string& rel) const { return fs::exists(root_ / rel); }
  Json ReadJson(const std::string& rel) const { return ParseJsonFile(root_ / rel); }

  Json Entry(const std::string& id) const {
    const Json& fns = manifest_["functions"];
    return fns.contains(id) ? fns[id] : Json::object();
  }
  void SetEntry(const std::string& id, Json entry) { manifest_["functions"][id] = std::move(entry); }

  void SaveManifest() const { Write(kManifestName, CanonicalJson(manifest_)); }

 private:
  const ToolConfig& config_;
  fs::path root_;
  std::optional<RuleSet> owned_;
  const RuleSet* rules_ = nullptr;
  Json manifest_ = Json::object();
};

SourceUnit LoadUnit(const FunctionTarget& fn, std::size_t i, const ToolConfig& config) {
  SourceUnit unit = SourceUnit::FromText(fn.display_names[i], ReadFile(fn.files[i]));
  if (config.vendor_override) unit.vendor = *config.vendor_override;
  return unit;
}

std::string FunctionDigest(const std::vector<std::string>& file_digests) {
  if (file_digests.size() == 1) return file_digests.front();
  std::string joined;
  for (const auto& d : file_digests) joined += d + "\n";
  return Sha256Hex(joined);
}

std::string CurrentDigest(const FunctionTarget& fn) {
  std::vector<std::string> digests;
  for (const auto& f : fn.files) digests.push_back(Sha256Hex(ReadFile(f)));
  return FunctionDigest(digests);
}

struct Outcome {
  bool ok = true;
  bool fallback = false;
  std::string error;
  std::vector<std::string> lines;  // summary output
  std::vector<std::string> warnings;
};

void Fail(Outcome& o, const std::string& id, const std::exception& e) {
  o.ok = false;
  o.error = e.what();
  o.warnings.push_back(id + ": " + o.error);
}

// --- stages ---------------------------------------------------------------

void Analyze(Workspace& ws, const FunctionTarget& fn, Json& entry, Outcome& o) {
  std::vector<PermissionSet> parts;
  std::string findings;
  for (std::size_t i = 0; i < fn.files.size(); ++i) {
    SemanticRegistry reg = BuildSemanticRegistry(LoadUnit(fn, i, ws.config()), ws.rules());
    parts.push_back(ExtractPermissions(reg, ws.rules(), ws.config().scope));
    findings += FindingsJsonLines(reg);
  }
  PermissionSet pset = MergePermissionSets(fn.id, parts);
  std::string dir = Workspace::Dir(fn.id);
  ws.Write(dir + "/permissions.json", CanonicalJson(pset.ToJson()));
  ws.Write(dir + "/findings.jsonl", findings);
  o.fallback = !pset.fallbacks.empty();
  entry["source_digest"] = pset.source_digest;
  entry["vendor"] = VendorName(pset.vendor);
  entry["scope"] = ScopeName(pset.scope);
  entry["analyze"] = Json{{"status", o.fallback ? "fallback" : "ok"},
                          {"permissions", pset.requirements.size()},
                          {"fallbacks", pset.fallbacks.size()}};
  entry["artifacts"]["permissions"] = dir + "/permissions.json";
  entry["artifacts"]["findings"] = dir + "/findings.jsonl";
  o.lines.push_back(fn.id + ": " + std::to_string(pset.requirements.size()) + " permissions, " +
                    std::to_string(pset.fallbacks.size()) + " fallbacks");
  if (pset.empty_source) o.warnings.push_back("warning: " + fn.id + ": no SDK calls found");
}

PermissionSet LoadPermissions(const Workspace& ws, const std::string& id) {
  std::string rel = Workspace::Dir(id) + "/permissions.json";
  if (!ws.Exists(rel)) {
    throw Error(ErrorCode::kIo, id + ": no permission set; run analyze first");
  }
  return PermissionSet::FromJson(ws.ReadJson(rel));
}

AllowList WriteAllowList(Workspace& ws, const PermissionSet& pset, Json& entry) {
  AllowList allow = BuildAllowList(pset, ws.config().env, AllowlistMode::kSnapshot,
                                   ws.config().strict_env);
  std::string rel = Workspace::Dir(pset.function_id) + "/allowlist.json";
  ws.Write(rel, CanonicalJson(allow.ToJson()));
  entry["artifacts"]["allowlist"] = rel;
  return allow;
}

void Emit(Workspace& ws, const FunctionTarget& fn, Json& entry, Outcome& o) {
  PermissionSet pset = LoadPermissions(ws, fn.id);
  std::vector<Vendor> vendors = ws.config().emit_vendors;
  if (vendors.empty() && pset.vendor != Vendor::kUnknown) vendors.push_back(pset.vendor);
  std::vector<std::pair<std::string, std::string>> files;
  Json policies = Json::object();
  for (Vendor v : vendors) {
    PolicyDocument doc = EmitPolicy(pset, v, ws.config().naming, ws.rules());
    ValidationReport report = ValidatePolicy(doc, ws.rules(), pset.Digest());
    if (!report.ok()) {
      throw Error(ErrorCode::kValidationFailed,
                  fn.id + ": " + std::string(VendorName(v)) + " policy fails validation: " +
                      CompactJson(report.ToJson()));
    }
    std::string rel = Workspace::Dir(fn.id) + "/policy-" + std::string(VendorName(v)) + ".json";
    files.emplace_back(rel, CanonicalJson(doc.ToJson()));
    policies[std::string(VendorName(v))] = rel;
    for (const auto& f : report.findings) {
      o.warnings.push_back("warning: " + fn.id + ": " + f.kind + ": " + f.message);
    }
  }
  for (const auto& [rel, text] : files) ws.Write(rel, text);
  WriteAllowList(ws, pset, entry);
  entry["artifacts"]["policies"] = policies;
  entry["emit"] = Json{{"status", "ok"}};
  o.lines.push_back(fn.id + ": " + std::to_string(files.size()) + " policies");
}

void Instrument(Workspace& ws, const FunctionTarget& fn, Json& entry, Outcome& o) {
  PermissionSet pset = LoadPermissions(ws, fn.id);
  AllowList allow = BuildAllowList(pset, ws.config().env, AllowlistMode::kSnapshot,
                                   ws.config().strict_env);
  std::string dir = Workspace::Dir(fn.id);
  std::vector<std::pair<std::string, std::string>> files;
  Json reports = Json::object();
  Json instrumented = Json::array();
  Json sidecars = Json::array();
  for (std::size_t i = 0; i < fn.files.size(); ++i) {
    SourceUnit unit = LoadUnit(fn, i, ws.config());
    InstrumentedSource inst = InjectHooks(unit, allow, ws.config().allowlist_mode, ws.rules());
    ReconstructionReport report = ValidateReconstruction(unit, inst, ws.rules());
    if (!report.ok()) {
      for (const auto& c : report.checks) {
        if (!c.passed) {
          throw Error(ErrorCode::kValidationFailed,
                      fn.display_names[i] + ": " + c.name + " failed: " + c.detail);
        }
      }
    }
    fs::path rel = fs::path(dir) / "instrumented" / fn.relative_names[i];
    files.emplace_back(rel.generic_string(), inst.text);
    instrumented.push_back(rel.generic_string());
    if (inst.sidecar) {
      std::string side = (rel.parent_path() / inst.embedded_allowlist_ref).generic_string();
      files.emplace_back(side, *inst.sidecar);
      sidecars.push_back(side);
    }
    reports[fn.relative_names[i]] = report.ToJson();
  }
  for (const auto& [rel, text] : files) ws.Write(rel, text);
  ws.Write(dir + "/reconstruction.json", CanonicalJson(reports));
  WriteAllowList(ws, pset, entry);
  entry["artifacts"]["instrumented"] = instrumented;
  entry["artifacts"]["sidecars"] = sidecars;
  entry["artifacts"]["reconstruction"] = dir + "/reconstruction.json";
  entry["instrument"] = Json{{"status", "ok"}, {"mode", EmbedModeName(ws.config().allowlist_mode)}};
  o.lines.push_back(fn.id + ": " + std::to_string(instrumented.size()) + " files instrumented");
}

using Stage = std::function<void(Workspace&, const FunctionTarget&, Json&, Outcome&)>;

// Runs `stage` for every function concurrently, then records the results
// in the manifest in target order.
int RunStages(const ToolConfig& config, const std::vector<std::pair<std::string, Stage>>& stages,
              std::ostream& out, std::ostream& err, bool fallback_fails) {
  std::vector<FunctionTarget> targets = ResolveTargets(config);
  Workspace ws(config);
  std::vector<Json> entries(targets.size());
  std::vector<Outcome> outcomes(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) entries[i] = ws.Entry(targets[i].id);

  ParallelFor(targets.size(), [&](std::size_t i) {
    const FunctionTarget& fn = targets[i];
    Json& entry = entries[i];
    entry["target"] = fn.target;
    entry["sources"] = fn.display_names;
    for (const auto& [name, stage] : stages) {
      try {
        stage(ws, fn, entry, outcomes[i]);
      } catch (const std::exception& e) {
        Fail(outcomes[i], fn.id, e);
        entry[name] = Json{{"status", "error"}, {"error", outcomes[i].error}};
        return;
      }
    }
  });

  int code = kExitOk;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    ws.SetEntry(targets[i].id, entries[i]);
    for (const auto& line : outcomes[i].lines) out << line << "\n";
    for (const auto& line : outcomes[i].warnings) err << line << "\n";
    if (!outcomes[i].ok || (fallback_fails && outcomes[i].fallback)) code = kExitFailure;
  }
  ws.SaveManifest();
  return code;
}

}  // namespace

ToolConfig ToolConfig::FromJson(const Json& json, const fs::path& base_dir) {
  SchemaValidator schema(ParseJsonFile(RuleSet::DefaultSchemasDirectory() / "config.schema.json"));
  auto problems = schema.Validate(json);
  if (!problems.empty()) throw Error(ErrorCode::kUsage, "invalid config: " + problems.front());
  ToolConfig c;
  c.base_dir = base_dir;
  c.targets = json.value("targets", std::vector<std::string>{});
  if (json.contains("vendor_override")) {
    c.vendor_override = ParseVendor(json["vendor_override"].get<std::string>());
  }
  if (json.contains("scope")) c.scope = *ParseScope(json["scope"].get<std::string>());
  c.naming.values = json.value("naming", std::map<std::string, std::string>{});
  c.rules_dir = json.value("rules_dir", std::string());
  c.output_dir = json.value("output_dir", c.output_dir.string());
  c.strict_env = json.value("strict_env", false);
  c.env = json.value("env", EnvValues{});
  if (json.contains("allowlist_mode")) {
    c.allowlist_mode = *ParseEmbedMode(json["allowlist_mode"].get<std::string>());
  }
  for (const auto& v : json.value("emit_vendors", std::vector<std::string>{})) {
    c.emit_vendors.push_back(*ParseVendor(v));
  }
  return c;
}

ToolConfig ToolConfig::Load(const fs::path& path) {
  Json json;
  try {
    json = ParseJsonFile(path);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kUsage, "cannot read config " + path.string() + ": " + e.what());
  }
  return FromJson(json, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

std::vector<FunctionTarget> ResolveTargets(const ToolConfig& config) {
  if (config.targets.empty()) throw Error(ErrorCode::kUsage, "no targets given");
  std::vector<FunctionTarget> out;
  std::set<std::string> ids;
  for (const auto& target : config.targets) {
    fs::path p = Resolve(config.base_dir, target);
    FunctionTarget fn;
    fn.target = target;
    if (fs::is_regular_file(p)) {
      fn.id = p.stem().string();
      fn.files.push_back(p);
      fn.display_names.push_back(fs::path(target).generic_string());
      fn.relative_names.push_back(p.filename().string());
    } else if (fs::is_directory(p)) {
      fn.id = p.lexically_normal().parent_path().filename().string();
      if (p.filename() != "") fn.id = p.filename().string();
      std::vector<fs::path> rels;
      for (auto it = fs::recursive_directory_iterator(p); it != fs::recursive_directory_iterator();
           ++it) {
        if (Skipped(it->path().filename())) {
          if (it->is_directory()) it.disable_recursion_pending();
          continue;
        }
        if (it->is_regular_file() && IsSourceFile(it->path())) {
          rels.push_back(it->path().lexically_relative(p));
        }
      }
      std::sort(rels.begin(), rels.end());
      if (rels.empty()) throw Error(ErrorCode::kUsage, "no source files under " + target);
      for (const auto& r : rels) {
        fn.files.push_back(p / r);
        fn.relative_names.push_back(r.generic_string());
        fn.display_names.push_back((fs::path(target) / r).lexically_normal().generic_string());
      }
    } else {
      throw Error(ErrorCode::kUsage, "target not found: " + target);
    }
    if (!ids.insert(fn.id).second) {
      throw Error(ErrorCode::kUsage, "two targets share the function id " + fn.id);
    }
    out.push_back(std::move(fn));
  }
  return out;
}

PermissionSet MergePermissionSets(const std::string& function_id,
                                  const std::vector<PermissionSet>& parts) {
  PermissionSet out;
  out.function_id = function_id;
  if (parts.empty()) return out;
  out.scope = parts.front().scope;
  out.rules_digest = parts.front().rules_digest;
  out.empty_source = true;
  std::vector<std::string> digests;
  std::map<std::pair<std::string, std::string>, PermissionRequirement> reqs;
  for (const auto& p : parts) {
    if (p.vendor != Vendor::kUnknown) {
      if (out.vendor != Vendor::kUnknown && out.vendor != p.vendor) {
        throw Error(ErrorCode::kConflictingVendors,
                    function_id + ": files use " + std::string(VendorName(out.vendor)) + " and " +
                        std::string(VendorName(p.vendor)));
      }
      out.vendor = p.vendor;
    }
    digests.push_back(p.source_digest);
    out.empty_source = out.empty_source && p.empty_source;
    for (const auto& r : p.requirements) {
      auto [it, fresh] = reqs.try_emplace({r.action, r.resource}, r);
      if (fresh) continue;
      it->second.resolvability = std::max(it->second.resolvability, r.resolvability);
      auto& prov = it->second.provenance;
      prov.insert(prov.end(), r.provenance.begin(), r.provenance.end());
      std::sort(prov.begin(), prov.end());
      prov.erase(std::unique(prov.begin(), prov.end()), prov.end());
    }
    for (const auto& [name, b] : p.env_bindings) {
      auto [it, fresh] = out.env_bindings.try_emplace(name, b);
      if (fresh) continue;
      auto& roles = it->second.roles;
      roles.insert(roles.end(), b.roles.begin(), b.roles.end());
      std::sort(roles.begin(), roles.end());
      roles.erase(std::unique(roles.begin(), roles.end()), roles.end());
      auto& uses = it->second.use_sites;
      uses.insert(uses.end(), b.use_sites.begin(), b.use_sites.end());
      std::sort(uses.begin(), uses.end());
      uses.erase(std::unique(uses.begin(), uses.end()), uses.end());
    }
    out.fallbacks.insert(out.fallbacks.end(), p.fallbacks.begin(), p.fallbacks.end());
    out.findings.insert(out.findings.end(), p.findings.begin(), p.findings.end());
  }
  for (auto& [key, r] : reqs) out.requirements.push_back(std::move(r));
  out.source_digest = FunctionDigest(digests);
  return out;
}

int RunAnalyze(const ToolConfig& config, std::ostream& out, std::ostream& err) {
  return RunStages(config, {{"analyze", Analyze}}, out, err, true);
}

int RunEmit(const ToolConfig& config, std::ostream& out, std::ostream& err) {
  return RunStages(config, {{"emit", Emit}}, out, err, false);
}

int RunInstrument(const ToolConfig& config, std::ostream& out, std::ostream& err) {
  return RunStages(config, {{"instrument", Instrument}}, out, err, false);
}

int RunDiff(const ToolConfig& config, const fs::path& live_policy,
            const std::optional<std::string>& function_id, std::ostream& out, std::ostream& err) {
  std::vector<FunctionTarget> targets = ResolveTargets(config);
  const FunctionTarget* fn = nullptr;
  for (const auto& t : targets) {
    if (function_id ? t.id == *function_id : targets.size() == 1) fn = &t;
  }
  if (!fn) {
    throw Error(ErrorCode::kUsage, function_id ? "unknown function " + *function_id
                                               : "diff needs one target or --function");
  }
  Workspace ws(config);
  try {
    PermissionSet pset = LoadPermissions(ws, fn->id);
    std::string rel = Workspace::Dir(fn->id) + "/allowlist.json";
    if (!ws.Exists(rel)) {
      throw Error(ErrorCode::kIo, fn->id + ": no allowlist; run emit or instrument first");
    }
    AllowList allow = AllowList::FromJson(ws.ReadJson(rel));
    Json body;
    try {
      body = Json::parse(ReadFile(Resolve(config.base_dir, live_policy)));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kUnparseablePolicy, live_policy.string() + ": " + e.what());
    }
    PolicyDocument live = PolicyDocument::FromJson(body);
    DriftReport report = DiffPolicy(live, allow, ws.rules(), pset.vendor, config.naming,
                                    Iso8601(std::chrono::system_clock::now()));
    ws.Write(Workspace::Dir(fn->id) + "/drift.json", CanonicalJson(report.ToJson()));
    out << CanonicalJson(report.ToJson());
    for (const auto& t : report.excess) {
      err << "excess: " << t.service << " " << t.resource << " " << t.action << "\n";
    }
    for (const auto& t : report.missing) {
      err << "missing: " << t.service << " " << t.resource << " " << t.action << "\n";
    }
    return report.excess.empty() ? kExitOk : kExitDrift;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
}

int RunReanalyze(const ToolConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<FunctionTarget> targets = ResolveTargets(config);
  std::vector<std::string> changed;
  std::vector<std::string> unchanged;
  {
    Workspace ws(config);
    for (const auto& fn : targets) {
      Json entry = ws.Entry(fn.id);
      bool same = false;
      try {
        same = entry.value("source_digest", "") == CurrentDigest(fn) &&
               entry.contains("analyze") && entry["analyze"].value("status", "") != "error";
      } catch (const std::exception&) {
        same = false;
      }
      (same ? unchanged : changed).push_back(fn.id);
    }
  }
  for (const auto& id : unchanged) out << id << ": unchanged\n";
  if (changed.empty()) return kExitOk;

  ToolConfig subset = config;
  subset.targets.clear();
  std::vector<std::string> was_instrumented;
  {
    Workspace ws(config);
    for (const auto& fn : targets) {
      if (std::find(changed.begin(), changed.end(), fn.id) == changed.end()) continue;
      subset.targets.push_back(fn.target);
      if (ws.Entry(fn.id).contains("instrument")) was_instrumented.push_back(fn.target);
    }
  }
  int code = RunStages(subset, {{"analyze", Analyze}, {"emit", Emit}}, out, err, true);
  if (!was_instrumented.empty()) {
    ToolConfig again = config;
    again.targets = was_instrumented;
    std::ostringstream ignored;
    code = std::max(code, RunInstrument(again, ignored, err));
  }
  return code;
}

}  // namespace privscope

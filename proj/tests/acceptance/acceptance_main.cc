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

// Acceptance run: one PASS/FAIL line per criterion.

#include <fnmatch.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "privscope/allow/allowlist.h"
#include "privscope/integrate/integrator.h"
#include "support/corpus.h"
#include "support/generators.h"
#include "support/oracle.h"

namespace privscope {
namespace {

namespace fs = std::filesystem;

// Pinned thresholds.
constexpr int kOraclePairs = 20000;
constexpr double kOracleSeconds = 10.0;
constexpr int kDenyAllowlists = 200;
constexpr std::size_t kMinFixtures = 60;
constexpr int kRoundTripRandomSets = 500;

const RuleSet& Rules() { return RuleSet::Default(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Analysis {
  SourceUnit unit;
  SemanticRegistry registry;
  PermissionSet pset;
};

Analysis Analyze(const testing::Fixture& f) {
  Analysis a{SourceUnit::FromFile(f.source), {}, {}};
  a.registry = BuildSemanticRegistry(a.unit, Rules());
  a.pset = ExtractPermissions(a.registry, Rules(), ScopeLevel::kEntity);
  return a;
}

std::set<PolicyTriple> Triples(const PermissionSet& ps) {
  std::set<PolicyTriple> out;
  for (const auto& r : ps.requirements) out.insert({r.service(), r.resource, r.action});
  return out;
}

ServiceCallEvent Event(const std::string& service, const std::string& action, const std::string& resource) {
  ServiceCallEvent e;
  e.service = service;
  e.operation = action;
  e.resolved_resource = resource;
  return e;
}

struct Cli {
  int code = -1;
  std::string out;
};

Cli RunCli(const fs::path& cwd, const std::string& args) {
  auto out = cwd / ".stdout";
  std::string cmd = "cd '" + cwd.string() + "' && '" PRIVSCOPE_CLI_PATH "' " + args + " > '" +
                    out.string() + "' 2> /dev/null";
  int status = std::system(cmd.c_str());
  Cli r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = ReadFile(out);
  return r;
}

fs::path Scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("privscope-acceptance-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Random allowlists and events over a wider alphabet than the unit tests,
// checked against fnmatch-based membership.
Outcome OracleEquivalence() {
  testing::Rng rng(20240601);
  const std::vector<std::string> services = {"s3", "dynamodb", "lambda", "storage"};
  const std::vector<std::vector<std::string>> actions = {
      {"s3:GetObject", "s3:PutObject", "s3:DeleteObject", "s3:ListBucket"},
      {"dynamodb:GetItem", "dynamodb:PutItem", "dynamodb:Query"},
      {"lambda:InvokeFunction", "lambda:ListFunctions"},
      {"storage:objects.get", "storage:objects.create"}};
  const std::vector<std::string> parts = {"a", "b", "logs", "x-1", "in", "2024"};
  auto resource = [&] {
    std::string r = testing::Pick(rng, parts);
    int depth = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int i = 0; i < depth; ++i) r += "/" + testing::Pick(rng, parts);
    return r;
  };
  auto pattern = [&] {
    if (testing::Coin(rng, 0.1)) return std::string("*");
    std::string p = resource();
    if (testing::Coin(rng, 0.3)) p += "/*";
    else if (testing::Coin(rng, 0.2)) p += "*";
    return p;
  };

  int disagreements = 0, allowed_count = 0;
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < kOraclePairs; ++i) {
    AllowList allow;
    allow.function_id = "gen";
    int entries = std::uniform_int_distribution<int>(0, 8)(rng);
    for (int k = 0; k < entries; ++k) {
      std::size_t s = std::uniform_int_distribution<std::size_t>(0, services.size() - 1)(rng);
      allow.entries[services[s]][pattern()].insert(testing::Pick(rng, actions[s]));
    }
    std::size_t s = std::uniform_int_distribution<std::size_t>(0, services.size() - 1)(rng);
    auto event = Event(services[s], testing::Pick(rng, actions[s]), resource());
    // Bias half the events toward an allowlisted pattern so both verdicts occur.
    if (testing::Coin(rng) && !allow.entries.empty()) {
      auto it = allow.entries.begin();
      std::advance(it, std::uniform_int_distribution<std::size_t>(0, allow.entries.size() - 1)(rng));
      auto jt = it->second.begin();
      std::advance(jt, std::uniform_int_distribution<std::size_t>(0, it->second.size() - 1)(rng));
      std::string r = jt->first;
      while (!r.empty() && r.back() == '*') r.pop_back();
      if (r.empty() || r.back() == '/') r += testing::Pick(rng, parts);
      event = Event(it->first, *jt->second.begin(), r);
    }

    bool expect = false;
    auto by = allow.entries.find(event.service);
    if (by != allow.entries.end()) {
      for (const auto& [p, acts] : by->second) {
        if (fnmatch(p.c_str(), event.resolved_resource->c_str(), 0) == 0 && acts.count(event.operation)) {
          expect = true;
        }
      }
    }
    auto d = VerifyCall(event, allow, {}, Rules());
    bool allowed = d.verdict == Verdict::kAllow;
    allowed_count += allowed;
    if (allowed != expect || allowed != (d.reason == DecisionReason::kMatched)) ++disagreements;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream o;
  o << kOraclePairs << " pairs (" << allowed_count << " allowed), " << disagreements
    << " disagreements, " << secs << " s (limit " << kOracleSeconds << " s)";
  return {disagreements == 0 && allowed_count > 0 && secs < kOracleSeconds, o.str()};
}

Outcome DenyByDefault() {
  auto alphabet = testing::SmallAlphabet();
  testing::Rng rng(77);
  int violations = 0, outside = 0, events = 0;
  for (int i = 0; i < kDenyAllowlists; ++i) {
    auto allow = testing::RandomAllowList(rng, alphabet);
    testing::FlatSetOracle oracle(allow, alphabet.resources);
    for (std::size_t s = 0; s < alphabet.services.size(); ++s) {
      for (const auto& r : alphabet.resources) {
        for (const auto& act : alphabet.actions[s]) {
          ++events;
          if (oracle.Permits(alphabet.services[s], r, act)) continue;
          ++outside;
          if (VerifyCall(Event(alphabet.services[s], act, r), allow, {}, Rules()).verdict != Verdict::kDeny) {
            ++violations;
          }
        }
      }
    }
  }
  std::ostringstream o;
  o << kDenyAllowlists << " allowlists, " << events << " events, " << outside << " outside the grant, "
    << violations << " violations";
  return {violations == 0 && outside > 0, o.str()};
}

Outcome Coverage(const std::vector<testing::Fixture>& corpus) {
  int statics = 0, dynamics = 0, static_ok = 0, dynamic_ok = 0;
  std::set<std::pair<Language, Vendor>> combos;
  std::vector<std::string> failed;
  for (const auto& f : corpus) {
    combos.insert({f.language, f.vendor});
    bool ok = false;
    try {
      auto a = Analyze(f);
      std::set<std::pair<std::string, std::string>> perms;
      for (const auto& r : a.pset.requirements) perms.insert({r.action, r.resource});
      std::set<std::tuple<std::string, std::string, std::string>> fallbacks;
      bool reasons = true;
      for (const auto& fb : a.pset.fallbacks) {
        fallbacks.insert({fb.service, fb.method, fb.reason});
        reasons &= !fb.reason.empty() && !fb.detail.empty();
      }
      ok = perms == f.permissions && fallbacks == f.fallbacks && reasons &&
           a.registry.vendor == f.vendor && a.registry.language == f.language;
      ok &= f.dynamic ? !fallbacks.empty() : fallbacks.empty();
    } catch (const std::exception&) {
      ok = false;
    }
    (f.dynamic ? dynamics : statics)++;
    if (ok) (f.dynamic ? dynamic_ok : static_ok)++;
    else failed.push_back(f.id);
  }
  std::size_t supported = 0;
  for (Language l : {Language::kJavaScript, Language::kPython, Language::kGo}) {
    for (Vendor v : {Vendor::kAws, Vendor::kGcp, Vendor::kAzure}) supported += Rules().IsSupported(l, v);
  }
  std::ostringstream o;
  o << corpus.size() << " fixtures over " << combos.size() << "/" << supported << " combinations; static "
    << static_ok << "/" << statics << " exact; dynamic " << dynamic_ok << "/" << dynamics << " with reasons";
  for (const auto& id : failed) o << " [" << id << "]";
  return {corpus.size() >= kMinFixtures && combos.size() == supported && failed.empty() && dynamics > 0,
          o.str()};
}

Outcome DriftScenario() {
  auto dir = Scratch("drift");
  fs::copy(testing::FixturesDir() / "function-a", dir / "function-a", fs::copy_options::recursive);
  fs::copy(testing::FixturesDir() / "function-b", dir / "function-b", fs::copy_options::recursive);
  fs::copy(testing::FixturesDir() / "policies" / "function-a-overpermissive.json", dir / "live.json");
  WriteFileIfChanged(dir / "cfg.json",
                     R"({"targets": ["function-a", "function-b"], "naming": {"region": "us-east-1", "account_id": "123456789012"}})");
  int analyze = RunCli(dir, "--config cfg.json analyze").code;
  auto pset = ParseJsonFile(dir / "privscope-out" / "functions" / "function-a" / "permissions.json");
  bool invokes = false;
  for (const auto& r : pset.at("requirements")) {
    invokes |= r.at("action").get<std::string>().rfind("lambda:", 0) == 0;
  }
  int emit = RunCli(dir, "--config cfg.json emit").code;
  auto diff = RunCli(dir, "--config cfg.json diff --function function-a --policy live.json");
  std::size_t excess = 0;
  bool invoke_excess = false;
  try {
    auto report = Json::parse(diff.out);
    excess = report.at("excess").size();
    invoke_excess = excess == 1 && report["excess"][0]["action"] == "lambda:InvokeFunction" &&
                    report["excess"][0]["resource"] == "*" && report.at("missing").empty();
  } catch (const std::exception&) {
  }
  fs::remove_all(dir);
  std::ostringstream o;
  o << "function-a invoke actions: " << (invokes ? "present" : "none") << "; diff exit " << diff.code
    << ", " << excess << " excess triple(s)";
  return {analyze == 0 && emit == 0 && !invokes && diff.code == 3 && invoke_excess, o.str()};
}

Outcome PolicyRoundTrip(const std::vector<testing::Fixture>& corpus) {
  auto naming = testing::CorpusNaming();
  int sets = 0, drift = 0, inequivalent = 0;
  auto check = [&](const PermissionSet& ps, Vendor source, const EnvValues& env) {
    ++sets;
    auto allow = BuildAllowList(ps, env, AllowlistMode::kSnapshot, false);
    if (!DiffPolicy(EmitPolicy(ps, source, naming, Rules()), allow, Rules(), source, naming, "t").empty()) {
      ++drift;
    }
    auto want = Triples(ps);
    for (Vendor v : {Vendor::kAws, Vendor::kGcp, Vendor::kAzure}) {
      auto doc = PolicyDocument::FromJson(EmitPolicy(ps, v, naming, Rules()).ToJson());
      auto grants = ExpandPolicy(doc, Rules(), source, naming);
      if (grants.triples != want || !grants.foreign.empty()) {
        ++inequivalent;
        break;
      }
    }
  };
  try {
    for (const auto& f : corpus) check(Analyze(f).pset, f.vendor, f.env);
    testing::Rng rng(9);
    for (int i = 0; i < kRoundTripRandomSets; ++i) {
      Vendor v = testing::Pick(rng, std::vector<Vendor>{Vendor::kAws, Vendor::kGcp, Vendor::kAzure});
      check(testing::RandomPermissionSet(rng, Rules(), v), v, {{"BUCKET", "real-bucket"}});
    }
  } catch (const std::exception& e) {
    return {false, std::string("error: ") + e.what()};
  }
  std::ostringstream o;
  o << sets << " permission sets; " << drift << " with drift; " << inequivalent
    << " with unequal tri-vendor authority";
  return {drift == 0 && inequivalent == 0, o.str()};
}

Outcome IntegratorReversibility(const std::vector<testing::Fixture>& corpus) {
  int runs = 0, exact = 0, guarded = 0, rejected = 0, sites = 0;
  for (const auto& f : corpus) {
    for (EmbedMode mode : {EmbedMode::kInline, EmbedMode::kSidecar}) {
      ++runs;
      try {
        auto a = Analyze(f);
        sites += static_cast<int>(a.registry.call_sites.size());
        auto allow = BuildAllowList(a.pset, f.env, AllowlistMode::kSnapshot, false);
        auto inst = InjectHooks(a.unit, allow, mode, Rules());
        if (StripInjected(inst) == a.unit.text) ++exact;
        if (ValidateReconstruction(a.unit, inst, Rules()).ok()) ++guarded;
        try {
          InjectHooks(SourceUnit::FromText(f.source, inst.text), allow, mode, Rules());
        } catch (const Error& e) {
          if (e.code() == ErrorCode::kAlreadyInstrumented) ++rejected;
        }
      } catch (const std::exception&) {
      }
    }
  }
  std::ostringstream o;
  o << runs << " injections over " << corpus.size() << " fixtures (" << sites << " call sites per mode): "
    << exact << " byte-exact strips, " << guarded << " fully guarded, " << rejected
    << " double injections rejected";
  return {exact == runs && guarded == runs && rejected == runs, o.str()};
}

Outcome DeterministicOutput() {
  auto dir = Scratch("determinism");
  auto config = (testing::FixturesDir() / "privscope.json").string();
  bool codes = true;
  for (const char* out : {"run1", "run2"}) {
    for (std::string cmd : {"analyze", "emit", "instrument"}) {
      int code = RunCli(dir, "--config '" + config + "' --output " + out + " " + cmd).code;
      codes &= code == 0 || (code == 2 && cmd == "analyze");  // dynamic fixtures fall back
    }
  }
  auto tree = [](const fs::path& root) {
    std::map<std::string, std::string> files;
    if (!fs::exists(root)) return files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
      if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = ReadFile(e.path());
    }
    return files;
  };
  auto a = tree(dir / "run1");
  auto b = tree(dir / "run2");
  int differing = 0;
  for (const auto& [name, body] : a) differing += !b.count(name) || b.at(name) != body;
  for (const auto& [name, body] : b) differing += !a.count(name);
  fs::remove_all(dir);
  std::ostringstream o;
  o << a.size() << " files per run, " << differing << " differing";
  return {codes && !a.empty() && differing == 0, o.str()};
}

}  // namespace
}  // namespace privscope

int main() {
  using privscope::Outcome;
  auto corpus = privscope::testing::LoadCorpus();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"verifier matches the flat-set oracle", privscope::OracleEquivalence},
      {"deny by default", privscope::DenyByDefault},
      {"extraction coverage", [&] { return privscope::Coverage(corpus); }},
      {"over-permissive invoke drift", privscope::DriftScenario},
      {"policy round trip", [&] { return privscope::PolicyRoundTrip(corpus); }},
      {"integrator reversibility", [&] { return privscope::IntegratorReversibility(corpus); }},
      {"deterministic output", privscope::DeterministicOutput},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << ++n << "] " << name << ": " << o.detail << "\n";
  }
  std::filesystem::remove_all(std::filesystem::temp_directory_path() /
                              ("privscope-acceptance-" + std::to_string(::getpid())));
  return failed == 0 ? 0 : 1;
}

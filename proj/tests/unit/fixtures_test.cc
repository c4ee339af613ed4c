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

#include <map>
#include <set>
#include <string>

#include "doctest.h"
#include "privscope/allow/allowlist.h"
#include "privscope/integrate/integrator.h"
#include "support/corpus.h"

namespace privscope {
namespace {

const RuleSet& Rules() { return RuleSet::Default(); }

const std::vector<testing::Fixture>& Corpus() {
  static const auto corpus = testing::LoadCorpus();
  return corpus;
}

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

TEST_CASE("corpus spans every supported language and vendor") {
  REQUIRE(Corpus().size() >= 60);
  std::map<std::pair<Language, Vendor>, std::pair<int, int>> counts;
  for (const auto& f : Corpus()) {
    auto& c = counts[{f.language, f.vendor}];
    (f.dynamic ? c.second : c.first)++;
  }
  for (Language l : {Language::kJavaScript, Language::kPython, Language::kGo}) {
    for (Vendor v : {Vendor::kAws, Vendor::kGcp, Vendor::kAzure}) {
      if (!Rules().IsSupported(l, v)) continue;
      INFO(LanguageName(l) << "/" << VendorName(v));
      CHECK(counts[{l, v}].first >= 6);
      CHECK(counts[{l, v}].second >= 2);
    }
  }
}

TEST_CASE("analysis matches each manifest") {
  for (const auto& f : Corpus()) {
    INFO(f.id);
    auto a = Analyze(f);
    CHECK(a.registry.language == f.language);
    CHECK(a.registry.vendor == f.vendor);

    std::set<std::pair<std::string, std::string>> calls;
    for (const auto& s : a.registry.call_sites) {
      CHECK(s.known_method);
      calls.insert({s.service, s.method});
    }
    CHECK(calls == f.calls);

    std::set<std::pair<std::string, std::string>> perms;
    for (const auto& r : a.pset.requirements) perms.insert({r.action, r.resource});
    CHECK(perms == f.permissions);

    std::set<std::tuple<std::string, std::string, std::string>> fallbacks;
    for (const auto& fb : a.pset.fallbacks) {
      fallbacks.insert({fb.service, fb.method, fb.reason});
      CHECK_FALSE(fb.detail.empty());
    }
    CHECK(fallbacks == f.fallbacks);
    CHECK(f.dynamic == !fallbacks.empty());
    CHECK(a.pset.findings.empty());
  }
}

TEST_CASE("fallbacks are granted service-wide") {
  for (const auto& f : Corpus()) {
    if (!f.dynamic) continue;
    INFO(f.id);
    auto a = Analyze(f);
    for (const auto& fb : a.pset.fallbacks) {
      bool wide = false;
      for (const auto& r : a.pset.requirements) wide |= r.service() == fb.service && r.resource == "*";
      CHECK(wide);
    }
  }
}

TEST_CASE("emitted policies agree with allowlists") {
  auto naming = testing::CorpusNaming();
  for (const auto& f : Corpus()) {
    INFO(f.id);
    auto a = Analyze(f);
    auto allow = BuildAllowList(a.pset, f.env, AllowlistMode::kSnapshot, true);
    auto own = EmitPolicy(a.pset, f.vendor, naming, Rules());
    CHECK(ValidatePolicy(own, Rules(), a.pset.Digest()).ok());
    CHECK(DiffPolicy(own, allow, Rules(), f.vendor, naming, "t").empty());
    for (Vendor v : {Vendor::kAws, Vendor::kGcp, Vendor::kAzure}) {
      auto doc = PolicyDocument::FromJson(EmitPolicy(a.pset, v, naming, Rules()).ToJson());
      auto grants = ExpandPolicy(doc, Rules(), f.vendor, naming);
      CHECK(grants.foreign.empty());
      CHECK(grants.triples == Triples(a.pset));
    }
  }
}

TEST_CASE("instrumentation strips back to the original") {
  for (const auto& f : Corpus()) {
    INFO(f.id);
    auto a = Analyze(f);
    auto allow = BuildAllowList(a.pset, f.env, AllowlistMode::kSnapshot, false);
    for (EmbedMode mode : {EmbedMode::kInline, EmbedMode::kSidecar}) {
      auto inst = InjectHooks(a.unit, allow, mode, Rules());
      CHECK(IsInstrumented(inst.text));
      CHECK(StripInjected(inst) == a.unit.text);
      auto report = ValidateReconstruction(a.unit, inst, Rules());
      for (const auto& c : report.checks) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.passed);
      }
      auto again = SourceUnit::FromText(f.source, inst.text);
      CHECK_THROWS_WITH_AS(InjectHooks(again, allow, mode, Rules()), doctest::Contains("AlreadyInstrumented"),
                           Error);
    }
  }
}

TEST_CASE("function A never invokes other functions") {
  testing::Fixture fa;
  for (const auto& f : Corpus()) {
    if (f.id == "function-a") fa = f;
  }
  REQUIRE(fa.id == "function-a");
  auto a = Analyze(fa);
  for (const auto& r : a.pset.requirements) CHECK(r.service() != "lambda");

  auto live = PolicyDocument::FromJson(
      ParseJsonFile(testing::FixturesDir() / "policies" / "function-a-overpermissive.json"));
  auto allow = BuildAllowList(a.pset, {}, AllowlistMode::kSnapshot, true);
  auto drift = DiffPolicy(live, allow, Rules(), Vendor::kAws, testing::CorpusNaming(), "t");
  CHECK(drift.excess == std::vector<PolicyTriple>{{"lambda", "*", "lambda:InvokeFunction"}});
  CHECK(drift.missing.empty());
}

}  // namespace
}  // namespace privscope

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

#include "privscope/source/registry.h"

#include <algorithm>
#include <set>

#include "interpreter.h"
#include "privscope/source/ast.h"

namespace privscope {
namespace {

Json ValueSetJson(const ValueSet& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(ValueToJson(*v));
  return out;
}

Json OptionalLocation(const std::optional<SourceLocation>& loc) {
  return loc ? LocationJson(*loc) : Json(nullptr);
}

SemanticRegistry FromResult(detail::InterpreterResult result) {
  SemanticRegistry r;
  r.imports = std::move(result.imports);
  r.constructions = std::move(result.constructions);
  r.call_sites = std::move(result.call_sites);
  r.assignments = std::move(result.assignments);
  r.findings = std::move(result.findings);
  r.import_ends = std::move(result.import_ends);
  for (auto& [name, reads] : result.env_reads) {
    EnvRef ref;
    ref.env_name = name;
    ref.reads = std::move(reads);
    std::sort(ref.reads.begin(), ref.reads.end());
    r.env_refs.push_back(std::move(ref));
  }
  return r;
}

detail::InterpreterResult Interpret(const SourceUnit& unit, const syntax::Module& module,
                                    const RuleSet& rules, Vendor vendor) {
  detail::Interpreter interpreter(unit, module, rules, vendor);
  return interpreter.Run();
}

std::vector<Vendor> Candidates(const syntax::Module& module, Language language,
                               const RuleSet& rules) {
  std::set<Vendor> found;
  for (const auto& [name, offset] : detail::ImportedModules(module)) {
    for (Vendor v : rules.VendorsForImport(language, name)) found.insert(v);
  }
  return {found.begin(), found.end()};
}

VendorDetection Detect(const SourceUnit& unit, const syntax::Module& module, Language language,
                       const RuleSet& rules) {
  VendorDetection d;
  d.candidates = Candidates(module, language, rules);
  if (d.candidates.empty()) return d;
  if (d.candidates.size() == 1) {
    Vendor v = d.candidates.front();
    if (!rules.IsSupported(language, v)) {
      throw Error(ErrorCode::kUnsupportedCombination,
                  unit.path.string() + ": no rules for " + std::string(LanguageName(language)) + " with " +
                      std::string(VendorName(v)));
    }
    d.vendor = v;
    return d;
  }
  std::vector<Vendor> constructing;
  for (Vendor v : d.candidates) {
    if (!rules.IsSupported(language, v)) continue;
    if (!Interpret(unit, module, rules, v).constructions.empty()) constructing.push_back(v);
  }
  if (constructing.size() != 1) {
    std::string names;
    for (Vendor v : d.candidates) names += (names.empty() ? "" : ", ") + std::string(VendorName(v));
    throw Error(ErrorCode::kConflictingVendors,
                unit.path.string() + ": SDK imports from several vendors (" + names + ")");
  }
  d.vendor = constructing.front();
  return d;
}

Language LanguageOf(const SourceUnit& unit) {
  return unit.language ? *unit.language : IdentifyLanguage(unit).language;
}

}  // namespace

Json LocationJson(const SourceLocation& location) {
  return Json{{"line", location.line}, {"column", location.column}};
}

VendorDetection IdentifyVendor(const SourceUnit& unit, Language language, const RuleSet& rules) {
  syntax::Module module = syntax::Parse(unit, language);
  return Detect(unit, module, language, rules);
}

SemanticRegistry BuildSemanticRegistry(const SourceUnit& unit, const RuleSet& rules) {
  Language language = LanguageOf(unit);
  syntax::Module module = syntax::Parse(unit, language);
  Vendor vendor = unit.vendor != Vendor::kUnknown ? unit.vendor
                                                 : Detect(unit, module, language, rules).vendor;
  if (vendor != Vendor::kUnknown && !rules.IsSupported(language, vendor)) {
    throw Error(ErrorCode::kUnsupportedCombination,
                unit.path.string() + ": no rules for " + std::string(LanguageName(language)) + " with " +
                    std::string(VendorName(vendor)));
  }
  SemanticRegistry r = FromResult(Interpret(unit, module, rules, vendor));
  r.path = unit.path.generic_string();
  r.language = language;
  r.vendor = vendor;
  r.source_digest = Sha256Hex(unit.text);

  std::sort(r.call_sites.begin(), r.call_sites.end(), [](const auto& a, const auto& b) {
    auto via = [](const ServiceCallSite& s) {
      return s.via ? *s.via : SourceLocation{0, 0};
    };
    return std::tie(a.location, a.service, a.method) < std::tie(b.location, b.service, b.method) ||
           (std::tie(a.location, a.service, a.method) == std::tie(b.location, b.service, b.method) &&
            via(a) < via(b));
  });
  std::sort(r.constructions.begin(), r.constructions.end(),
            [](const auto& a, const auto& b) { return a.begin < b.begin; });
  std::sort(r.imports.begin(), r.imports.end(), [](const auto& a, const auto& b) {
    return std::tie(a.location, a.module, a.local) < std::tie(b.location, b.module, b.local);
  });
  std::sort(r.findings.begin(), r.findings.end(), [](const auto& a, const auto& b) {
    return std::tie(a.location, a.kind, a.message) < std::tie(b.location, b.kind, b.message);
  });
  std::sort(r.import_ends.begin(), r.import_ends.end());
  r.import_ends.erase(std::unique(r.import_ends.begin(), r.import_ends.end()), r.import_ends.end());

  for (auto& ref : r.env_refs) {
    for (const auto& site : r.call_sites) {
      bool uses = false;
      for (const auto& [param, values] : site.params) {
        for (const auto& v : values) {
          auto names = EnvNames(*v);
          uses = uses || std::find(names.begin(), names.end(), ref.env_name) != names.end();
        }
      }
      if (uses && std::find(ref.use_sites.begin(), ref.use_sites.end(), site.location) ==
                      ref.use_sites.end()) {
        ref.use_sites.push_back(site.location);
      }
    }
  }
  return r;
}

Json SemanticRegistry::ToJson() const {
  Json j;
  j["path"] = path;
  j["language"] = std::string(LanguageName(language));
  j["vendor"] = std::string(VendorName(vendor));
  j["source_digest"] = source_digest;
  Json imps = Json::array();
  for (const auto& i : imports) {
    imps.push_back({{"module", i.module},
                    {"local", i.local},
                    {"vendor", std::string(VendorName(i.vendor))},
                    {"location", LocationJson(i.location)}});
  }
  j["imports"] = std::move(imps);
  Json ctors = Json::array();
  for (const auto& c : constructions) {
    ctors.push_back({{"service", c.service},
                     {"symbol", c.symbol},
                     {"location", LocationJson(c.location)},
                     {"guarded", c.guarded}});
  }
  j["constructions"] = std::move(ctors);
  Json sites = Json::array();
  for (const auto& s : call_sites) {
    Json params = Json::object();
    for (const auto& [k, vs] : s.params) params[k] = ValueSetJson(vs);
    sites.push_back({{"client", s.client},
                     {"service", s.service},
                     {"method", s.method},
                     {"known_method", s.known_method},
                     {"params", std::move(params)},
                     {"location", LocationJson(s.location)},
                     {"via", OptionalLocation(s.via)},
                     {"client_origin", OptionalLocation(s.client_origin)},
                     {"guarded", s.guarded}});
  }
  j["call_sites"] = std::move(sites);
  Json envs = Json::array();
  for (const auto& e : env_refs) {
    Json reads = Json::array(), uses = Json::array();
    for (const auto& l : e.reads) reads.push_back(LocationJson(l));
    for (const auto& l : e.use_sites) uses.push_back(LocationJson(l));
    envs.push_back({{"env_name", e.env_name}, {"reads", reads}, {"use_sites", uses}});
  }
  j["env_refs"] = std::move(envs);
  Json assigns = Json::object();
  for (const auto& [k, vs] : assignments) assigns[k] = ValueSetJson(vs);
  j["assignments"] = std::move(assigns);
  Json finds = Json::array();
  for (const auto& f : findings) {
    finds.push_back({{"kind", f.kind}, {"message", f.message}, {"location", LocationJson(f.location)}});
  }
  j["findings"] = std::move(finds);
  return j;
}

std::string FindingsJsonLines(const SemanticRegistry& registry) {
  std::string out;
  for (const auto& f : registry.findings) {
    Json line{{"file", registry.path},
              {"line", f.location.line},
              {"column", f.location.column},
              {"kind", f.kind},
              {"message", f.message}};
    out += CompactJson(line) + "\n";
  }
  return out;
}

}  // namespace privscope

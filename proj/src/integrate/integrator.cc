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

#include "privscope/integrate/integrator.h"

#include <algorithm>
#include <filesystem>
#include <set>
#include <tuple>

#include "integrate/templates.h"
#include "privscope/source/registry.h"

namespace privscope {
namespace {

enum Rank { kSentinel, kImports, kGuardClose, kGuardOpen, kCheck, kPreamble, kHelpers };

struct Insertion {
  std::uint32_t offset = 0;  // in the original text
  Rank rank = kSentinel;
  std::int64_t tie = 0;      // orders insertions of one rank at one offset
  std::string text;
  std::string role;
};

std::string Quote(const std::string& s) { return Json(s).dump(); }

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::uint32_t LineEnd(const std::string& text, std::uint32_t offset) {
  auto nl = text.find('\n', offset);
  return nl == std::string::npos ? static_cast<std::uint32_t>(text.size())
                                 : static_cast<std::uint32_t>(nl);
}

std::uint32_t NextLine(const std::string& text, std::uint32_t offset) {
  auto end = LineEnd(text, offset);
  return end < text.size() ? end + 1 : end;
}

std::string_view LineAt(const std::string& text, std::uint32_t start) {
  return std::string_view(text).substr(start, LineEnd(text, start) - start);
}

bool IsEncodingCookie(std::string_view line) {
  auto first = line.find_first_not_of(" \t\f");
  if (first == std::string_view::npos || line[first] != '#') return false;
  auto coding = line.find("coding");
  return coding != std::string_view::npos && coding + 6 < line.size() &&
         (line[coding + 6] == ':' || line[coding + 6] == '=');
}

// Offset of the first line the sentinel may occupy.
std::uint32_t SentinelOffset(const std::string& text, Language language) {
  std::uint32_t pos = 0;
  if (text.rfind("#!", 0) == 0) pos = NextLine(text, 0);
  if (language == Language::kPython) {
    for (int line = pos == 0 ? 1 : 2; line <= 2 && pos < text.size(); ++line) {
      if (!IsEncodingCookie(LineAt(text, pos))) break;
      pos = NextLine(text, pos);
    }
  }
  return pos;
}

std::string SentinelText(const std::string& text, std::uint32_t at, Language language,
                         const std::string& digest) {
  std::string comment = language == Language::kPython ? "#" : "//";
  std::string line = comment + " " + kSentinelMarker + " sha256=" + digest;
  // A file whose last line has no newline gets one before the sentinel.
  if (at == text.size() && at > 0 && text.back() != '\n') return "\n" + line;
  return line + "\n";
}

bool IsEsm(const std::string& text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos) {
      line.remove_prefix(first);
      for (std::string_view word : {"import", "export"}) {
        if (line.rfind(word, 0) == 0 && line.size() > word.size()) {
          char next = line[word.size()];
          if (next == ' ' || next == '\t' || next == '{' || next == '*' || next == '"' ||
              next == '\'') {
            return true;
          }
        }
      }
    }
    pos = end + 1;
  }
  return false;
}

// End of the Go package clause, skipping leading comments.
std::uint32_t GoPackageEnd(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    } else if (text.compare(i, 2, "//") == 0) {
      i = text.find('\n', i);
      if (i == std::string::npos) break;
    } else if (text.compare(i, 2, "/*") == 0) {
      i = text.find("*/", i + 2);
      if (i == std::string::npos) break;
      i += 2;
    } else {
      break;
    }
  }
  if (i == std::string::npos || text.compare(i, 7, "package") != 0) {
    throw Error(ErrorCode::kAnchorNotFound, "no package clause");
  }
  i += 7;
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  while (i < text.size() && IsIdentChar(text[i])) ++i;
  return static_cast<std::uint32_t>(i);
}

std::set<std::string> FileServices(const SemanticRegistry& registry) {
  std::set<std::string> out;
  for (const auto& c : registry.constructions) {
    if (!c.service.empty()) out.insert(c.service);
  }
  for (const auto& s : registry.call_sites) out.insert(s.service);
  return out;
}

Json RuleJson(const ActionRule& rule) {
  return Json{{"actions", rule.actions},
              {"params", rule.resource_params},
              {"positional", rule.positional},
              {"wildcard", rule.wildcard_required}};
}

// service -> handle kind -> {calls, derive}
Json HandleSpec(const LanguageVendorRules& pair, const std::set<std::string>& services) {
  Json spec = Json::object();
  auto slot = [&](const std::string& service, const std::string& kind) -> Json& {
    Json& t = spec[service][kind];
    if (!t.contains("calls")) t["calls"] = Json::object();
    if (!t.contains("derive")) t["derive"] = Json::object();
    return t;
  };
  for (const auto& service : services) {
    for (const auto& c : pair.constructors) {
      if (c.service == service || c.service.empty()) slot(service, c.kind);
    }
  }
  for (const auto& rule : pair.actions) {
    if (!services.count(rule.service)) continue;
    slot(rule.service, rule.on)["calls"][rule.method] = RuleJson(rule);
  }
  for (const auto& d : pair.derivations) {
    for (const auto& service : services) {
      if (!d.service.empty() && d.service != service) continue;
      slot(service, d.on)["derive"][d.method] =
          Json{{"kind", d.kind}, {"bind", d.bind}, {"property", d.property}};
      slot(service, d.kind);
    }
  }
  return spec;
}

// "service/qualified method" -> rule
Json FlatSpec(const LanguageVendorRules& pair, const std::set<std::string>& services) {
  Json spec = Json::object();
  for (const auto& rule : pair.actions) {
    if (services.count(rule.service)) spec[rule.service + "/" + rule.QualifiedMethod()] = RuleJson(rule);
  }
  return spec;
}

void AddGuards(const SemanticRegistry& registry, const LanguageVendorRules& pair,
               std::vector<Insertion>& out) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& c : registry.constructions) {
    if (c.service.empty() || !seen.insert({c.begin, c.end}).second) continue;
    const ConstructorRule* rule = pair.FindConstructor(c.symbol);
    std::string kind = rule ? rule->kind : "client";
    std::string close = ", " + Quote(c.service) + ", " + Quote(kind);
    std::string open;
    if (registry.language == Language::kPython) {
      open = "_privscope_guard(";
    } else {
      open = "__privscope_guard(";
      close += (rule && rule->command_style) ? ", true" : ", false";
    }
    close += ")";
    // Outer constructions open first and close last.
    out.push_back({c.begin, kGuardOpen, -static_cast<std::int64_t>(c.end), open, "guard-open"});
    out.push_back({c.end, kGuardClose, -static_cast<std::int64_t>(c.begin), close, "guard-close"});
  }
}

std::string IndentBefore(const std::string& text, std::uint32_t offset) {
  std::uint32_t start = offset;
  while (start > 0 && text[start - 1] != '\n') --start;
  for (std::uint32_t i = start; i < offset; ++i) {
    if (text[i] != ' ' && text[i] != '\t') return {};
  }
  return text.substr(start, offset - start);
}

void AddGoChecks(const SourceUnit& unit, const SemanticRegistry& registry,
                 const LanguageVendorRules& pair, std::vector<Insertion>& out) {
  std::set<std::uint32_t> seen;
  std::int64_t order = 0;
  for (const auto& site : registry.call_sites) {
    if (!seen.insert(site.call_begin).second) continue;
    const ActionRule* rule = pair.FindAction(site.service, site.method);
    std::string receiver =
        unit.text.substr(site.receiver_begin, site.receiver_end - site.receiver_begin);
    std::string input = site.input ? unit.text.substr(site.input->first,
                                                      site.input->second - site.input->first)
                                   : "nil";
    std::string line = "privscopeCheck(" + Quote(site.service) + ", " + Quote(site.method) +
                       ", " + receiver + ", " + input;
    if (rule) {
      for (const auto& p : rule->resource_params) line += ", " + Quote(p);
    }
    line += ")";
    std::string indent = IndentBefore(unit.text, site.anchor);
    bool own_line = site.anchor == 0 || !indent.empty() || unit.text[site.anchor - 1] == '\n';
    line += own_line ? "\n" + indent : "; ";
    out.push_back({site.anchor, kCheck, order++, line, "check"});
  }
}

std::string EndOfFileText(const std::string& text, const std::string& block) {
  bool newline = !text.empty() && text.back() == '\n';
  return (text.empty() || newline ? "" : "\n") + block + (text.empty() || newline ? "\n" : "");
}

// Python needs the hooks defined before the first construction runs.
std::uint32_t PythonPreambleOffset(const SourceUnit& unit, const SemanticRegistry& registry) {
  std::uint32_t first = registry.constructions.front().begin;
  std::optional<std::uint32_t> anchor;
  for (std::uint32_t end : registry.import_ends) {
    if (end <= first) anchor = end;
  }
  if (!anchor) {
    throw Error(ErrorCode::kAnchorNotFound,
                unit.path.generic_string() + ": no top-level import precedes the first client",
                unit.line_index.Locate(first));
  }
  std::uint32_t at = LineEnd(unit.text, *anchor);
  if (at > first) {
    throw Error(ErrorCode::kAnchorNotFound,
                unit.path.generic_string() + ": first client shares a line with the last import",
                unit.line_index.Locate(first));
  }
  return at;
}

InstrumentedSource Apply(const SourceUnit& unit, std::vector<Insertion> inserts) {
  std::stable_sort(inserts.begin(), inserts.end(), [](const Insertion& a, const Insertion& b) {
    return std::tie(a.offset, a.rank, a.tie) < std::tie(b.offset, b.rank, b.tie);
  });
  InstrumentedSource inst;
  std::uint32_t cursor = 0;
  for (const auto& ins : inserts) {
    inst.text.append(unit.text, cursor, ins.offset - cursor);
    cursor = ins.offset;
    auto begin = static_cast<std::uint32_t>(inst.text.size());
    inst.text += ins.text;
    inst.injected_regions.push_back(
        {begin, static_cast<std::uint32_t>(inst.text.size()), ins.role});
  }
  inst.text.append(unit.text, cursor, std::string::npos);
  return inst;
}

// Offset in the instrumented text of an original offset.
std::uint32_t ToInstrumented(const std::vector<InjectedRegion>& regions, std::uint32_t offset) {
  std::uint32_t orig = 0;
  std::uint32_t inst = 0;
  for (const auto& r : regions) {
    std::uint32_t gap = r.begin - inst;
    if (offset < orig + gap) return inst + (offset - orig);
    orig += gap;
    inst = r.end;
  }
  return inst + (offset - orig);
}

std::optional<std::uint32_t> ToOriginal(const std::vector<InjectedRegion>& regions,
                                        std::uint32_t offset) {
  std::uint32_t injected = 0;
  for (const auto& r : regions) {
    if (offset < r.begin) break;
    if (offset < r.end) return std::nullopt;
    injected += r.end - r.begin;
  }
  return offset - injected;
}

std::string Where(const LineIndex& index, std::uint32_t offset) {
  SourceLocation loc = index.Locate(offset);
  return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

}  // namespace

std::string_view HookKindName(HookKind kind) {
  switch (kind) {
    case HookKind::kWrapperClass:
      return "wrapper-class";
    case HookKind::kMethodRedefinition:
      return "method-redefinition";
    case HookKind::kExplicitCall:
      return "explicit-call";
  }
  return "unknown";
}

HookTemplate HookTemplateFor(Language language, Vendor vendor, const RuleSet& rules) {
  if (!rules.IsSupported(language, vendor)) {
    throw Error(ErrorCode::kUnsupportedCombination,
                "no hooks for " + std::string(LanguageName(language)) + " with " +
                    std::string(VendorName(vendor)));
  }
  HookTemplate t;
  t.language = language;
  t.vendor = vendor;
  switch (language) {
    case Language::kJavaScript:
      t.kind = HookKind::kMethodRedefinition;
      t.insertion_points = {"around-construction", "end-of-file"};
      break;
    case Language::kPython:
      t.kind = HookKind::kWrapperClass;
      t.insertion_points = {"after-imports", "around-construction"};
      break;
    case Language::kGo:
      t.kind = HookKind::kExplicitCall;
      t.insertion_points = {"after-imports", "before-call", "end-of-file"};
      break;
  }
  return t;
}

std::string_view EmbedModeName(EmbedMode mode) {
  return mode == EmbedMode::kInline ? "inline" : "sidecar";
}

std::optional<EmbedMode> ParseEmbedMode(std::string_view name) {
  if (name == "inline") return EmbedMode::kInline;
  if (name == "sidecar") return EmbedMode::kSidecar;
  return std::nullopt;
}

bool IsInstrumented(const std::string& text) {
  return text.find(kSentinelMarker) != std::string::npos;
}

Json InstrumentedSource::RegionsJson() const {
  Json out = Json::array();
  for (const auto& r : injected_regions) {
    out.push_back(Json{{"begin", r.begin}, {"end", r.end}, {"role", r.role}});
  }
  return out;
}

std::string SidecarName(const std::string& source_path) {
  return std::filesystem::path(source_path).stem().string() + ".allowlist.json";
}

InstrumentedSource InjectHooks(const SourceUnit& unit, const AllowList& allow, EmbedMode mode,
                               const RuleSet& rules) {
  if (IsInstrumented(unit.text)) {
    auto at = unit.text.find(kSentinelMarker);
    throw Error(ErrorCode::kAlreadyInstrumented,
                unit.path.generic_string() + ": already instrumented",
                unit.line_index.Locate(static_cast<std::uint32_t>(at)));
  }
  SemanticRegistry registry = BuildSemanticRegistry(unit, rules);
  Language language = registry.language;
  bool zero_sdk = registry.constructions.empty() && registry.call_sites.empty();
  const LanguageVendorRules* pair = nullptr;
  if (!zero_sdk) {
    HookTemplateFor(language, registry.vendor, rules);
    pair = rules.Find(language, registry.vendor);
  }

  detail::PreambleInputs in;
  std::string path = unit.path.generic_string();
  if (mode == EmbedMode::kSidecar) in.sidecar_name = SidecarName(path);
  in.allowlist_json = CompactJson(allow.ToJson());
  in.esm = language == Language::kJavaScript && IsEsm(unit.text);

  std::string digest = Sha256Hex(unit.text);
  std::uint32_t sentinel_at = SentinelOffset(unit.text, language);
  std::vector<Insertion> inserts;
  inserts.push_back({sentinel_at, kSentinel, 0, SentinelText(unit.text, sentinel_at, language, digest),
                     "sentinel"});
  const auto size = static_cast<std::uint32_t>(unit.text.size());

  if (zero_sdk) {
    if (language == Language::kGo) {
      inserts.push_back({size, kHelpers, 0, EndOfFileText(unit.text, detail::GoNoopHelpers(in)),
                         "helpers"});
    } else {
      std::string block = language == Language::kPython ? detail::PyNoopPreamble(in)
                                                        : detail::JsNoopPreamble(in);
      inserts.push_back({size, kPreamble, 0, EndOfFileText(unit.text, block), "preamble"});
    }
  } else {
    std::set<std::string> services = FileServices(registry);
    switch (language) {
      case Language::kJavaScript:
        in.spec = HandleSpec(*pair, services);
        AddGuards(registry, *pair, inserts);
        inserts.push_back({size, kPreamble, 0, EndOfFileText(unit.text, detail::JsPreamble(in)),
                           "preamble"});
        break;
      case Language::kPython: {
        in.spec = HandleSpec(*pair, services);
        AddGuards(registry, *pair, inserts);
        if (!registry.constructions.empty()) {
          std::uint32_t at = PythonPreambleOffset(unit, registry);
          inserts.push_back({at, kPreamble, 0, "\n" + detail::PyPreamble(in), "preamble"});
        } else {
          inserts.push_back({size, kPreamble, 0,
                             EndOfFileText(unit.text, detail::PyPreamble(in)), "preamble"});
        }
        break;
      }
      case Language::kGo:
        in.spec = FlatSpec(*pair, services);
        inserts.push_back({GoPackageEnd(unit.text), kImports, 0, "\n\n" + detail::GoImports(in),
                           "imports"});
        AddGoChecks(unit, registry, *pair, inserts);
        inserts.push_back({size, kHelpers, 0, EndOfFileText(unit.text, detail::GoHelpers(in)),
                           "helpers"});
        break;
    }
  }

  InstrumentedSource inst = Apply(unit, std::move(inserts));
  inst.path = path;
  inst.language = language;
  inst.vendor = registry.vendor;
  inst.original_digest = digest;
  if (mode == EmbedMode::kSidecar) {
    inst.embedded_allowlist_ref = in.sidecar_name;
    inst.sidecar = CanonicalJson(allow.ToJson());
  } else {
    inst.embedded_allowlist_ref = "inline";
  }
  return inst;
}

std::string StripInjected(const InstrumentedSource& inst) {
  std::string out;
  std::uint32_t cursor = 0;
  for (const auto& r : inst.injected_regions) {
    out.append(inst.text, cursor, r.begin - cursor);
    cursor = r.end;
  }
  out.append(inst.text, cursor, std::string::npos);
  return out;
}

bool ReconstructionReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

Json ReconstructionReport::ToJson() const {
  Json out = Json::array();
  for (const auto& c : checks) {
    out.push_back(Json{{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return Json{{"ok", ok()}, {"checks", out}};
}

ReconstructionReport ValidateReconstruction(const SourceUnit& original,
                                            const InstrumentedSource& inst, const RuleSet& rules) {
  ReconstructionReport report;

  SourceUnit unit = SourceUnit::FromText(original.path, inst.text);
  unit.language = inst.language;
  unit.vendor = inst.vendor;
  std::optional<SemanticRegistry> after;
  try {
    after = BuildSemanticRegistry(unit, rules);
    report.checks.push_back({"parses", true, ""});
  } catch (const Error& e) {
    report.checks.push_back({"parses", false, e.what()});
  }

  std::string stripped = StripInjected(inst);
  if (stripped == original.text) {
    report.checks.push_back({"strip-equals-original", true, ""});
  } else {
    auto mismatch = std::mismatch(stripped.begin(), stripped.end(), original.text.begin(),
                                  original.text.end());
    auto at = static_cast<std::uint32_t>(mismatch.second - original.text.begin());
    report.checks.push_back(
        {"strip-equals-original", false, "first difference at " + Where(original.line_index, at)});
  }

  if (!after) {
    report.checks.push_back({"same-call-sites", false, "instrumented text does not parse"});
    report.checks.push_back({"sites-guarded", false, "instrumented text does not parse"});
    return report;
  }

  SourceUnit base = original;
  if (!base.language) base.language = inst.language;
  if (base.vendor == Vendor::kUnknown) base.vendor = inst.vendor;
  SemanticRegistry before = BuildSemanticRegistry(base, rules);

  using Key = std::tuple<std::uint32_t, std::string, std::string>;
  std::set<Key> want;
  std::set<Key> got;
  for (const auto& s : before.call_sites) want.insert({s.offset, s.service, s.method});
  std::string extra;
  for (const auto& s : after->call_sites) {
    auto orig = ToOriginal(inst.injected_regions, s.offset);
    if (!orig) {
      extra = s.service + "." + s.method + " inside injected code";
      continue;
    }
    got.insert({*orig, s.service, s.method});
  }
  if (want == got && extra.empty()) {
    report.checks.push_back({"same-call-sites", true, ""});
  } else {
    std::string detail = extra;
    for (const auto& k : want) {
      if (!got.count(k) && detail.empty()) {
        detail = "missing " + std::get<1>(k) + "." + std::get<2>(k) + " at " +
                 Where(original.line_index, std::get<0>(k));
      }
    }
    for (const auto& k : got) {
      if (!want.count(k) && detail.empty()) {
        detail = "unexpected " + std::get<1>(k) + "." + std::get<2>(k) + " at " +
                 Where(original.line_index, std::get<0>(k));
      }
    }
    report.checks.push_back({"same-call-sites", false, detail});
  }

  std::string unguarded;
  for (const auto& s : before.call_sites) {
    std::uint32_t at = ToInstrumented(inst.injected_regions, s.offset);
    bool found = false;
    bool guarded = true;
    for (const auto& t : after->call_sites) {
      if (t.offset != at || t.service != s.service || t.method != s.method) continue;
      found = true;
      guarded = guarded && t.guarded;
    }
    if (!found || !guarded) {
      unguarded = s.service + "." + s.method + " at " + Where(original.line_index, s.offset);
      break;
    }
  }
  report.checks.push_back({"sites-guarded", unguarded.empty(),
                           unguarded.empty() ? "" : "unguarded " + unguarded});
  return report;
}

}  // namespace privscope

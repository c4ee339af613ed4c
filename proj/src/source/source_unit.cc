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

#include "privscope/source/source_unit.h"

#include <algorithm>
#include <array>
#include <regex>

#include "privscope/common/io.h"

namespace privscope {

std::string_view LanguageName(Language language) {
  switch (language) {
    case Language::kJavaScript:
      return "javascript";
    case Language::kPython:
      return "python";
    case Language::kGo:
      return "go";
  }
  return "unknown";
}

std::string_view VendorName(Vendor vendor) {
  switch (vendor) {
    case Vendor::kAws:
      return "aws";
    case Vendor::kGcp:
      return "gcp";
    case Vendor::kAzure:
      return "azure";
    case Vendor::kUnknown:
      return "unknown";
  }
  return "unknown";
}

std::optional<Language> ParseLanguage(std::string_view name) {
  if (name == "javascript" || name == "js") return Language::kJavaScript;
  if (name == "python" || name == "py") return Language::kPython;
  if (name == "go") return Language::kGo;
  return std::nullopt;
}

std::optional<Vendor> ParseVendor(std::string_view name) {
  if (name == "aws") return Vendor::kAws;
  if (name == "gcp") return Vendor::kGcp;
  if (name == "azure") return Vendor::kAzure;
  return std::nullopt;
}

std::string_view LanguageExtension(Language language) {
  switch (language) {
    case Language::kJavaScript:
      return ".js";
    case Language::kPython:
      return ".py";
    case Language::kGo:
      return ".go";
  }
  return "";
}

LineIndex::LineIndex(std::string_view text) {
  for (std::uint32_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') starts_.push_back(i + 1);
  }
}

SourceLocation LineIndex::Locate(std::uint32_t offset) const {
  auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
  auto line = static_cast<std::uint32_t>(it - starts_.begin());
  return {line, offset - starts_[line - 1] + 1};
}

std::uint32_t LineIndex::LineStart(std::uint32_t line) const {
  if (line == 0) return 0;
  if (line > starts_.size()) return starts_.back();
  return starts_[line - 1];
}

SourceUnit SourceUnit::FromText(std::filesystem::path path, std::string text) {
  SourceUnit unit;
  unit.path = std::move(path);
  unit.text = std::move(text);
  unit.line_index = LineIndex(unit.text);
  return unit;
}

SourceUnit SourceUnit::FromFile(const std::filesystem::path& path) {
  return FromText(path, ReadFile(path));
}

namespace {

struct Signal {
  Language language;
  std::regex pattern;
  const char* name;
};

const std::vector<Signal>& ImportSignals() {
  static const std::vector<Signal> signals = [] {
    auto flags = std::regex::ECMAScript | std::regex::multiline;
    std::vector<Signal> v;
    v.push_back({Language::kJavaScript,
                 std::regex(R"(\brequire\s*\(\s*['"][^'"]+['"]\s*\))", flags),
                 "require() call"});
    v.push_back({Language::kJavaScript,
                 std::regex(R"(^\s*import\s+[\w{}*,\s]+\s+from\s+['"])", flags),
                 "ES module import"});
    v.push_back({Language::kPython,
                 std::regex(R"(^\s*import\s+[A-Za-z_][\w.]*(\s+as\s+\w+)?\s*$)",
                            flags),
                 "python import"});
    v.push_back({Language::kPython,
                 std::regex(R"(^\s*from\s+[\w.]+\s+import\s+)", flags),
                 "python from-import"});
    v.push_back({Language::kGo,
                 std::regex(R"(^\s*import\s+(\w+\s+)?"[^"]+")", flags),
                 "go import"});
    v.push_back({Language::kGo, std::regex(R"(^\s*import\s*\(\s*$)", flags),
                 "go import block"});
    return v;
  }();
  return signals;
}

const std::vector<Signal>& SyntaxSignals() {
  static const std::vector<Signal> signals = [] {
    auto flags = std::regex::ECMAScript | std::regex::multiline;
    std::vector<Signal> v;
    v.push_back({Language::kPython,
                 std::regex(R"(^\s*(async\s+)?def\s+\w+\s*\(.*\)\s*(->.*)?:\s*$)",
                            flags),
                 "def statement"});
    v.push_back({Language::kGo, std::regex(R"(^\s*package\s+\w+\s*$)", flags),
                 "package clause"});
    v.push_back({Language::kGo,
                 std::regex(R"(^func\s+(\([^)]*\)\s*)?\w+\s*\()", flags),
                 "func declaration"});
    v.push_back({Language::kJavaScript,
                 std::regex(R"(\bfunction\s*\w*\s*\([^)]*\)\s*\{)", flags),
                 "function expression"});
    v.push_back({Language::kJavaScript,
                 std::regex(R"(\)\s*=>\s*[{(\w])", flags), "arrow function"});
    v.push_back({Language::kJavaScript,
                 std::regex(R"(\b(module\.)?exports\.\w+\s*=)", flags),
                 "exports assignment"});
    return v;
  }();
  return signals;
}

std::optional<LanguageDetection> Vote(const std::vector<Signal>& signals,
                                      const std::string& text,
                                      const char* signal_name) {
  std::array<int, 3> votes{};
  std::array<const char*, 3> first{};
  for (const auto& s : signals) {
    auto begin = std::sregex_iterator(text.begin(), text.end(), s.pattern);
    int n = static_cast<int>(std::distance(begin, std::sregex_iterator()));
    auto idx = static_cast<std::size_t>(s.language);
    votes[idx] += n;
    if (n > 0 && first[idx] == nullptr) first[idx] = s.name;
  }
  auto best = std::max_element(votes.begin(), votes.end());
  if (*best == 0) return std::nullopt;
  if (std::count(votes.begin(), votes.end(), *best) > 1) return std::nullopt;
  auto idx = static_cast<std::size_t>(best - votes.begin());
  return LanguageDetection{static_cast<Language>(idx), signal_name, first[idx]};
}

}  // namespace

LanguageDetection IdentifyLanguage(const SourceUnit& unit) {
  std::string ext = unit.path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".js" || ext == ".mjs" || ext == ".cjs") {
    return {Language::kJavaScript, "extension", ext};
  }
  if (ext == ".py") return {Language::kPython, "extension", ext};
  if (ext == ".go") return {Language::kGo, "extension", ext};

  if (auto d = Vote(ImportSignals(), unit.text, "import")) return *d;
  if (auto d = Vote(SyntaxSignals(), unit.text, "syntax")) return *d;
  throw Error(ErrorCode::kUnrecognizedLanguage,
              "no extension, import or syntax signal in " + unit.path.string());
}

}  // namespace privscope

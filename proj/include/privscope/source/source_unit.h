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

#ifndef PRIVSCOPE_SOURCE_SOURCE_UNIT_H_
#define PRIVSCOPE_SOURCE_SOURCE_UNIT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "privscope/common/error.h"

namespace privscope {

enum class Language { kJavaScript, kPython, kGo };
enum class Vendor { kAws, kGcp, kAzure, kUnknown };

std::string_view LanguageName(Language language);
std::string_view VendorName(Vendor vendor);
std::optional<Language> ParseLanguage(std::string_view name);
std::optional<Vendor> ParseVendor(std::string_view name);
// Conventional file extension including the dot.
std::string_view LanguageExtension(Language language);

class LineIndex {
 public:
  LineIndex() = default;
  explicit LineIndex(std::string_view text);

  SourceLocation Locate(std::uint32_t offset) const;
  // Offset of the first byte of a 1-based line.
  std::uint32_t LineStart(std::uint32_t line) const;
  std::size_t line_count() const { return starts_.size(); }

 private:
  std::vector<std::uint32_t> starts_{0};
};

struct SourceUnit {
  std::filesystem::path path;
  std::optional<Language> language;
  Vendor vendor = Vendor::kUnknown;
  std::string text;
  LineIndex line_index;

  static SourceUnit FromText(std::filesystem::path path, std::string text);
  static SourceUnit FromFile(const std::filesystem::path& path);
};

struct LanguageDetection {
  Language language;
  // "extension", "import" or "syntax".
  std::string signal;
  std::string detail;
};

// Extension first, then import grammar, then syntax heuristics.
// Throws UnrecognizedLanguage when nothing matches.
LanguageDetection IdentifyLanguage(const SourceUnit& unit);

}  // namespace privscope

#endif  // PRIVSCOPE_SOURCE_SOURCE_UNIT_H_

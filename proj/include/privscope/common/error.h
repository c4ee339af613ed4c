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

#ifndef PRIVSCOPE_COMMON_ERROR_H_
#define PRIVSCOPE_COMMON_ERROR_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace privscope {

enum class ErrorCode {
  kUnrecognizedLanguage,
  kConflictingVendors,
  kUnsupportedCombination,
  kParseError,
  kMissingRule,
  kInvalidRules,
  kUnmappableAction,
  kMissingNaming,
  kMissingEnvValue,
  kUnparseablePolicy,
  kAnchorNotFound,
  kAlreadyInstrumented,
  kValidationFailed,
  kIo,
  kUsage,
};

std::string_view ErrorCodeName(ErrorCode code);

// 1-based line and column (columns count bytes).
struct SourceLocation {
  std::uint32_t line = 0;
  std::uint32_t column = 0;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
  friend auto operator<=>(const SourceLocation&, const SourceLocation&) = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<SourceLocation> location = std::nullopt)
      : std::runtime_error(Format(code, message, location)),
        code_(code),
        detail_(message),
        location_(location) {}

  ErrorCode code() const { return code_; }
  // Message without the code prefix.
  const std::string& detail() const { return detail_; }
  const std::optional<SourceLocation>& location() const { return location_; }

 private:
  static std::string Format(ErrorCode code, const std::string& message,
                            const std::optional<SourceLocation>& location);

  ErrorCode code_;
  std::string detail_;
  std::optional<SourceLocation> location_;
};

}  // namespace privscope

#endif  // PRIVSCOPE_COMMON_ERROR_H_

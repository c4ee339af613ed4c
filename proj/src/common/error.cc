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

#include "privscope/common/error.h"

namespace privscope {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnrecognizedLanguage:
      return "UnrecognizedLanguage";
    case ErrorCode::kConflictingVendors:
      return "ConflictingVendors";
    case ErrorCode::kUnsupportedCombination:
      return "UnsupportedCombination";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kMissingRule:
      return "MissingRule";
    case ErrorCode::kInvalidRules:
      return "InvalidRules";
    case ErrorCode::kUnmappableAction:
      return "UnmappableAction";
    case ErrorCode::kMissingNaming:
      return "MissingNaming";
    case ErrorCode::kMissingEnvValue:
      return "MissingEnvValue";
    case ErrorCode::kUnparseablePolicy:
      return "UnparseablePolicy";
    case ErrorCode::kAnchorNotFound:
      return "AnchorNotFound";
    case ErrorCode::kAlreadyInstrumented:
      return "AlreadyInstrumented";
    case ErrorCode::kValidationFailed:
      return "ValidationFailed";
    case ErrorCode::kIo:
      return "IoError";
    case ErrorCode::kUsage:
      return "UsageError";
  }
  return "Unknown";
}

std::string Error::Format(ErrorCode code, const std::string& message,
                          const std::optional<SourceLocation>& location) {
  std::string out(ErrorCodeName(code));
  if (location) {
    out += " at " + std::to_string(location->line) + ":" +
           std::to_string(location->column);
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace privscope

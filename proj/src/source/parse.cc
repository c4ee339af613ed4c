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

#include "privscope/source/ast.h"

namespace privscope::syntax {

Module Parse(const SourceUnit& unit, Language language) {
  switch (language) {
    case Language::kJavaScript:
      return ParseJavaScript(unit);
    case Language::kPython:
      return ParsePython(unit);
    case Language::kGo:
      return ParseGo(unit);
  }
  throw Error(ErrorCode::kUnrecognizedLanguage, "no parser for language");
}

}  // namespace privscope::syntax

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

#ifndef PRIVSCOPE_SOURCE_LEXER_H_
#define PRIVSCOPE_SOURCE_LEXER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "privscope/common/error.h"
#include "privscope/source/source_unit.h"

namespace privscope::syntax {

enum class TokenKind {
  kIdent,
  kNumber,
  kString,
  kTemplate,
  kRegex,
  kPunct,
  kNewline,
  kIndent,
  kDedent,
  kEof,
};

// Literal text or an embedded expression inside a template literal or an
// f-string. For expressions, [begin, end) is the source range to re-lex.
struct TemplatePiece {
  bool is_expr = false;
  std::string text;
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
};

struct Token {
  TokenKind kind = TokenKind::kEof;
  std::string text;  // raw spelling (punctuators, identifiers, numbers)
  std::string value; // decoded string value
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  bool newline_before = false;
  bool synthetic = false;  // inserted semicolon
  std::vector<TemplatePiece> pieces;
};

// Each lexer scans text[begin, end) of the whole unit so that offsets in
// sub-lexed template expressions stay absolute.
std::vector<Token> LexJavaScript(std::string_view text, std::uint32_t begin,
                                 std::uint32_t end, const LineIndex& lines);
std::vector<Token> LexPython(std::string_view text, std::uint32_t begin,
                             std::uint32_t end, const LineIndex& lines,
                             bool expression_only = false);
std::vector<Token> LexGo(std::string_view text, std::uint32_t begin,
                         std::uint32_t end, const LineIndex& lines);

[[noreturn]] void ThrowParseError(const LineIndex& lines, std::uint32_t offset,
                                  const std::string& message);

}  // namespace privscope::syntax

#endif  // PRIVSCOPE_SOURCE_LEXER_H_

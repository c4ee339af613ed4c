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

#ifndef PRIVSCOPE_SOURCE_PARSER_BASE_H_
#define PRIVSCOPE_SOURCE_PARSER_BASE_H_

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexer.h"
#include "privscope/source/ast.h"

namespace privscope::syntax {

class TokenCursor {
 public:
  TokenCursor(std::vector<Token> tokens, const SourceUnit& unit)
      : tokens_(std::move(tokens)), unit_(unit) {}

  const Token& Peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(index_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& Next() {
    const Token& t = tokens_[index_];
    if (index_ + 1 < tokens_.size()) ++index_;
    prev_end_ = t.end;
    return t;
  }
  bool AtEnd() const { return Peek().kind == TokenKind::kEof; }
  bool IsPunct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind == TokenKind::kPunct && t.text == p;
  }
  bool IsWord(std::string_view w, std::size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind == TokenKind::kIdent && t.text == w;
  }
  bool AcceptPunct(std::string_view p) {
    if (!IsPunct(p)) return false;
    Next();
    return true;
  }
  bool AcceptWord(std::string_view w) {
    if (!IsWord(w)) return false;
    Next();
    return true;
  }
  void ExpectPunct(std::string_view p) {
    if (!AcceptPunct(p)) Fail("expected '" + std::string(p) + "'");
  }
  void ExpectWord(std::string_view w) {
    if (!AcceptWord(w)) Fail("expected '" + std::string(w) + "'");
  }
  std::string ExpectIdent() {
    if (Peek().kind != TokenKind::kIdent) Fail("expected identifier");
    return Next().text;
  }
  [[noreturn]] void Fail(const std::string& message) const {
    const Token& t = Peek();
    std::string found = t.kind == TokenKind::kEof ? "end of input"
                        : t.kind == TokenKind::kNewline ? "newline"
                        : t.text.empty() ? "token" : "'" + t.text + "'";
    ThrowParseError(unit_.line_index, t.begin, message + ", found " + found);
  }

  std::size_t index() const { return index_; }
  void Reset(std::size_t index) { index_ = index; }
  std::uint32_t prev_end() const { return prev_end_; }
  const SourceUnit& unit() const { return unit_; }

  // Index of the token closing the bracket opened at `open_index`, or the
  // size of the token stream when unbalanced.
  std::size_t MatchingClose(std::size_t open_index) const {
    int depth = 0;
    for (std::size_t i = open_index; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (t.kind != TokenKind::kPunct) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "]" || t.text == "}") {
        if (--depth == 0) return i;
      }
    }
    return tokens_.size();
  }
  const Token& At(std::size_t i) const {
    return tokens_[std::min(i, tokens_.size() - 1)];
  }

 private:
  std::vector<Token> tokens_;
  const SourceUnit& unit_;
  std::size_t index_ = 0;
  std::uint32_t prev_end_ = 0;
};

inline ExprPtr MakeExpr(ExprKind kind, std::uint32_t begin, std::uint32_t end,
                        std::string text = {}) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->begin = begin;
  e->end = end;
  e->text = std::move(text);
  return e;
}

inline StmtPtr MakeStmt(StmtKind kind, std::uint32_t begin) {
  auto s = std::make_unique<Stmt>();
  s->kind = kind;
  s->begin = begin;
  return s;
}

// Collects identifier names bound by a destructuring pattern.
inline void CollectPatternNames(const Expr& pattern, std::vector<std::string>& out) {
  switch (pattern.kind) {
    case ExprKind::kName:
      out.push_back(pattern.text);
      break;
    case ExprKind::kObject:
    case ExprKind::kArray:
      for (const auto& child : pattern.children) {
        if (child) CollectPatternNames(*child, out);
      }
      break;
    case ExprKind::kBinary:  // default value: name = expr
      if (pattern.text == "=" && !pattern.children.empty()) {
        CollectPatternNames(*pattern.children[0], out);
      }
      break;
    case ExprKind::kSpread:
    case ExprKind::kUnary:
      if (!pattern.children.empty()) CollectPatternNames(*pattern.children[0], out);
      break;
    default:
      break;
  }
}

}  // namespace privscope::syntax

#endif  // PRIVSCOPE_SOURCE_PARSER_BASE_H_

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

#include <algorithm>
#include <unordered_map>

#include "parser_base.h"

namespace privscope::syntax {
namespace {

int GoPrecedence(const Token& t) {
  static const std::unordered_map<std::string_view, int> table = {
      {"||", 1}, {"&&", 2}, {"==", 3}, {"!=", 3}, {"<", 3},  {"<=", 3},
      {">", 3},  {">=", 3}, {"+", 4},  {"-", 4},  {"|", 4},  {"^", 4},
      {"*", 5},  {"/", 5},  {"%", 5},  {"<<", 5}, {">>", 5}, {"&", 5},
      {"&^", 5}};
  if (t.kind != TokenKind::kPunct) return -1;
  auto it = table.find(t.text);
  return it == table.end() ? -1 : it->second;
}

// Package name bound by an unaliased import path.
std::string DefaultImportName(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto slash = path.find('/', start);
    parts.push_back(path.substr(start, slash - start));
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  std::string last = parts.back();
  bool version = last.size() >= 2 && last[0] == 'v' &&
                 std::all_of(last.begin() + 1, last.end(),
                             [](char c) { return c >= '0' && c <= '9'; });
  if (version && parts.size() > 1) last = parts[parts.size() - 2];
  std::replace(last.begin(), last.end(), '-', '_');
  return last;
}

class GoParser {
 public:
  GoParser(std::vector<Token> tokens, const SourceUnit& unit)
      : cur_(std::move(tokens), unit) {}

  Block ParseFile() {
    Block body;
    SkipSemicolons();
    cur_.ExpectWord("package");
    cur_.ExpectIdent();
    ExpectTerminator();
    while (!cur_.AtEnd()) {
      if (cur_.AcceptPunct(";")) continue;
      if (cur_.IsWord("import")) {
        ParseImportDecl(body);
      } else if (cur_.IsWord("func")) {
        body.push_back(ParseFuncDecl());
      } else if (cur_.IsWord("var") || cur_.IsWord("const")) {
        ParseVarDecl(body);
      } else if (cur_.IsWord("type")) {
        ParseTypeDecl();
      } else {
        cur_.Fail("expected declaration");
      }
      ExpectTerminator();
    }
    return body;
  }

 private:
  void SkipSemicolons() {
    while (cur_.AcceptPunct(";")) {
    }
  }

  void ExpectTerminator() {
    if (cur_.AcceptPunct(";")) return;
    if (cur_.AtEnd() || cur_.IsPunct(")") || cur_.IsPunct("}")) return;
    cur_.Fail("expected ';' or newline");
  }

  // ---- declarations ------------------------------------------------------

  void ParseImportSpec(Block& out) {
    std::uint32_t begin = cur_.Peek().begin;
    std::string alias;
    if (cur_.AcceptPunct(".")) {
      alias = ".";
    } else if (cur_.Peek().kind == TokenKind::kIdent) {
      alias = cur_.Next().text;
    }
    if (cur_.Peek().kind != TokenKind::kString) cur_.Fail("expected import path");
    std::string path = cur_.Next().value;
    auto s = MakeStmt(StmtKind::kImport, begin);
    s->import.module = path;
    if (alias != "_" && alias != ".") {
      s->import.bindings.push_back({alias.empty() ? DefaultImportName(path) : alias, ""});
    }
    s->end = cur_.prev_end();
    out.push_back(std::move(s));
  }

  void ParseImportDecl(Block& out) {
    cur_.ExpectWord("import");
    if (cur_.AcceptPunct("(")) {
      while (!cur_.AcceptPunct(")")) {
        if (cur_.AcceptPunct(";")) continue;
        ParseImportSpec(out);
        ExpectTerminator();
      }
    } else {
      ParseImportSpec(out);
    }
  }

  void ParseVarSpec(Block& out, bool is_const) {
    std::uint32_t begin = cur_.Peek().begin;
    std::vector<ExprPtr> names;
    do {
      const Token& n = cur_.Next();
      if (n.kind != TokenKind::kIdent) cur_.Fail("expected identifier");
      names.push_back(MakeExpr(ExprKind::kName, n.begin, n.end, n.text));
    } while (cur_.AcceptPunct(","));
    if (!cur_.IsPunct("=") && !cur_.IsPunct(";") && !cur_.IsPunct(")")) ParseType();
    auto s = MakeStmt(StmtKind::kAssign, begin);
    s->op = "decl";
    if (cur_.AcceptPunct("=")) {
      auto values = ParseExpressionList(true);
      if (values.size() == names.size()) {
        s->values = std::move(values);
      } else if (values.size() == 1) {
        // Multi-value call: every name takes the call result.
        auto tuple = std::move(values[0]);
        for (std::size_t i = 0; i < names.size(); ++i) {
          s->values.push_back(i == 0 ? std::move(tuple)
                                     : MakeExpr(ExprKind::kOther, begin, begin));
        }
      } else {
        cur_.Fail("assignment count mismatch");
      }
    } else {
      if (is_const) {
        // Implicit repetition of the previous const expression.
        s->kind = StmtKind::kOther;
      }
      for (const auto& n : names) {
        s->values.push_back(MakeExpr(ExprKind::kKeyword, n->end, n->end, "nil"));
      }
    }
    s->targets = std::move(names);
    s->end = cur_.prev_end();
    out.push_back(std::move(s));
  }

  void ParseVarDecl(Block& out) {
    bool is_const = cur_.Next().text == "const";
    if (cur_.AcceptPunct("(")) {
      while (!cur_.AcceptPunct(")")) {
        if (cur_.AcceptPunct(";")) continue;
        ParseVarSpec(out, is_const);
        ExpectTerminator();
      }
    } else {
      ParseVarSpec(out, is_const);
    }
  }

  void ParseTypeSpec() {
    cur_.ExpectIdent();
    if (cur_.IsPunct("[") && cur_.Peek(1).kind == TokenKind::kIdent &&
        !cur_.IsPunct("]", 2)) {
      SkipBalanced();  // type parameters
    }
    cur_.AcceptPunct("=");
    ParseType();
  }

  void ParseTypeDecl() {
    cur_.ExpectWord("type");
    if (cur_.AcceptPunct("(")) {
      while (!cur_.AcceptPunct(")")) {
        if (cur_.AcceptPunct(";")) continue;
        ParseTypeSpec();
        ExpectTerminator();
      }
    } else {
      ParseTypeSpec();
    }
  }

  void SkipBalanced() {
    std::size_t close = cur_.MatchingClose(cur_.index());
    while (cur_.index() <= close && !cur_.AtEnd()) cur_.Next();
  }

  // Returns a textual rendering of the type; enough to name composite
  // literal types.
  std::string ParseType() {
    const Token& t = cur_.Peek();
    if (t.kind == TokenKind::kIdent) {
      if (t.text == "map") {
        cur_.Next();
        cur_.ExpectPunct("[");
        std::string k = ParseType();
        cur_.ExpectPunct("]");
        return "map[" + k + "]" + ParseType();
      }
      if (t.text == "chan") {
        cur_.Next();
        cur_.AcceptPunct("<-");
        return "chan " + ParseType();
      }
      if (t.text == "func") {
        cur_.Next();
        ParseSignature();
        return "func";
      }
      if (t.text == "struct" || t.text == "interface") {
        cur_.Next();
        if (!cur_.IsPunct("{")) cur_.Fail("expected '{'");
        SkipBalanced();
        return t.text + "{}";
      }
      std::string name = cur_.Next().text;
      if (cur_.IsPunct(".") && cur_.Peek(1).kind == TokenKind::kIdent) {
        cur_.Next();
        name += "." + cur_.Next().text;
      }
      if (cur_.IsPunct("[") && !cur_.IsPunct("]", 1)) {
        SkipBalanced();  // type arguments
      }
      return name;
    }
    if (cur_.AcceptPunct("*")) return "*" + ParseType();
    if (cur_.AcceptPunct("<-")) {
      cur_.ExpectWord("chan");
      return "<-chan " + ParseType();
    }
    if (cur_.AcceptPunct("[")) {
      std::string len;
      if (!cur_.IsPunct("]")) {
        if (cur_.AcceptPunct("...")) {
          len = "...";
        } else {
          ParseExpression(false);
          len = "N";
        }
      }
      cur_.ExpectPunct("]");
      return "[" + len + "]" + ParseType();
    }
    if (cur_.AcceptPunct("(")) {
      std::string inner = ParseType();
      cur_.ExpectPunct(")");
      return inner;
    }
    cur_.Fail("expected type");
  }

  // Parses "(params) results" and returns parameter names.
  std::vector<std::string> ParseSignature() {
    auto params = ParseParameterList();
    if (cur_.IsPunct("(")) {
      ParseParameterList();
    } else if (StartsType()) {
      ParseType();
    }
    return params;
  }

  bool StartsType() const {
    const Token& t = cur_.Peek();
    if (t.kind == TokenKind::kIdent) return true;
    return t.kind == TokenKind::kPunct &&
           (t.text == "*" || t.text == "[" || t.text == "(" || t.text == "<-");
  }

  std::vector<std::string> ParseParameterList() {
    cur_.ExpectPunct("(");
    // Each entry is either "Type" or "name Type"; with any named entry,
    // bare identifiers are names sharing the next type.
    struct Entry {
      std::string first_ident;
      bool has_type_after = false;
    };
    std::vector<Entry> entries;
    while (!cur_.IsPunct(")")) {
      Entry e;
      if (cur_.Peek().kind == TokenKind::kIdent && !cur_.IsPunct(".", 1) &&
          !cur_.IsWord("func") && !cur_.IsWord("map") && !cur_.IsWord("chan") &&
          !cur_.IsWord("struct") && !cur_.IsWord("interface")) {
        e.first_ident = cur_.Next().text;
        if (!cur_.IsPunct(",") && !cur_.IsPunct(")")) {
          cur_.AcceptPunct("...");
          ParseType();
          e.has_type_after = true;
        }
      } else {
        cur_.AcceptPunct("...");
        ParseType();
      }
      entries.push_back(e);
      if (!cur_.AcceptPunct(",")) break;
    }
    cur_.ExpectPunct(")");
    bool named = std::any_of(entries.begin(), entries.end(),
                             [](const Entry& e) { return e.has_type_after; });
    std::vector<std::string> names;
    if (named) {
      for (const auto& e : entries) {
        if (!e.first_ident.empty()) names.push_back(e.first_ident);
      }
    }
    return names;
  }

  StmtPtr ParseFuncDecl() {
    std::uint32_t begin = cur_.Next().begin;  // func
    auto fn = std::make_shared<Function>();
    fn->begin = begin;
    std::vector<std::string> receiver;
    if (cur_.IsPunct("(")) receiver = ParseParameterList();
    fn->name = cur_.ExpectIdent();
    if (cur_.IsPunct("[")) SkipBalanced();  // type parameters
    fn->params = ParseSignature();
    fn->params.insert(fn->params.begin(), receiver.begin(), receiver.end());
    if (cur_.IsPunct("{")) fn->body = ParseBlock();
    fn->end = cur_.prev_end();
    auto s = MakeStmt(StmtKind::kFunction, begin);
    s->function = std::move(fn);
    s->end = cur_.prev_end();
    return s;
  }

  // ---- statements --------------------------------------------------------

  Block ParseBlock() {
    cur_.ExpectPunct("{");
    Block body;
    while (!cur_.IsPunct("}")) {
      if (cur_.AtEnd()) cur_.Fail("expected '}'");
      if (cur_.AcceptPunct(";")) continue;
      if (auto s = ParseStatement()) body.push_back(std::move(s));
      if (!cur_.IsPunct("}")) ExpectTerminator();
    }
    cur_.ExpectPunct("}");
    return body;
  }

  StmtPtr ParseStatement() {
    const Token& t = cur_.Peek();
    std::uint32_t begin = t.begin;
    if (t.kind == TokenKind::kIdent) {
      const std::string& w = t.text;
      if (w == "var" || w == "const") {
        Block decls;
        ParseVarDecl(decls);
        return Wrap(std::move(decls), begin);
      }
      if (w == "type") {
        ParseTypeDecl();
        return nullptr;
      }
      if (w == "if") return ParseIf();
      if (w == "for") return ParseFor();
      if (w == "switch") return ParseSwitch();
      if (w == "select") return ParseSelect();
      if (w == "return") {
        cur_.Next();
        auto s = MakeStmt(StmtKind::kReturn, begin);
        if (!cur_.IsPunct(";") && !cur_.IsPunct("}")) s->values = ParseExpressionList(true);
        s->end = cur_.prev_end();
        return s;
      }
      if (w == "go" || w == "defer") {
        cur_.Next();
        auto s = MakeStmt(StmtKind::kExpr, begin);
        s->values.push_back(ParseExpression(true));
        s->end = cur_.prev_end();
        return s;
      }
      if (w == "break" || w == "continue" || w == "goto" || w == "fallthrough") {
        cur_.Next();
        if (cur_.Peek().kind == TokenKind::kIdent) cur_.Next();
        auto s = MakeStmt(StmtKind::kOther, begin);
        s->end = cur_.prev_end();
        return s;
      }
      if (cur_.IsPunct(":", 1)) {
        cur_.Next();
        cur_.Next();
        if (cur_.IsPunct("}")) return nullptr;
        SkipSemicolons();
        return ParseStatement();
      }
    }
    if (cur_.IsPunct("{")) {
      auto s = MakeStmt(StmtKind::kBlock, begin);
      s->blocks.push_back(ParseBlock());
      s->end = cur_.prev_end();
      return s;
    }
    return ParseSimpleStatement(true);
  }

  StmtPtr Wrap(Block stmts, std::uint32_t begin) {
    if (stmts.size() == 1) return std::move(stmts.front());
    // Statements in a header block share one line of source with their
    // owner, so nothing can be inserted between them.
    auto s = MakeStmt(StmtKind::kBlock, begin);
    s->op = "header";
    s->blocks.push_back(std::move(stmts));
    s->end = cur_.prev_end();
    return s;
  }

  StmtPtr ParseSimpleStatement(bool composite_ok) {
    std::uint32_t begin = cur_.Peek().begin;
    auto lhs = ParseExpressionList(composite_ok);
    const Token& op = cur_.Peek();
    if (op.kind == TokenKind::kPunct && (op.text == ":=" || op.text == "=")) {
      std::string text = cur_.Next().text;
      auto s = MakeStmt(StmtKind::kAssign, begin);
      s->op = text;
      if (cur_.IsWord("range")) {
        // Handled by the for parser; keep shape for it to inspect.
        cur_.Next();
        auto value = ParseExpression(composite_ok);
        auto r = MakeExpr(ExprKind::kUnary, value->begin, value->end, "range");
        r->children.push_back(std::move(value));
        s->values.push_back(std::move(r));
        s->targets = std::move(lhs);
        s->end = cur_.prev_end();
        return s;
      }
      auto rhs = ParseExpressionList(composite_ok);
      if (rhs.size() == lhs.size()) {
        s->values = std::move(rhs);
      } else if (rhs.size() == 1) {
        auto value = std::move(rhs[0]);
        for (std::size_t i = 0; i < lhs.size(); ++i) {
          s->values.push_back(i == 0 ? std::move(value)
                                     : MakeExpr(ExprKind::kOther, begin, begin));
        }
      } else {
        cur_.Fail("assignment count mismatch");
      }
      s->targets = std::move(lhs);
      s->end = cur_.prev_end();
      return s;
    }
    if (op.kind == TokenKind::kPunct && op.text.size() >= 2 && op.text.back() == '=' &&
        op.text != "==" && op.text != "!=" && op.text != "<=" && op.text != ">=") {
      std::string text = cur_.Next().text;
      auto s = MakeStmt(StmtKind::kAssign, begin);
      s->op = text;
      s->targets = std::move(lhs);
      s->values = ParseExpressionList(composite_ok);
      s->end = cur_.prev_end();
      return s;
    }
    if (cur_.IsPunct("++") || cur_.IsPunct("--") || cur_.IsPunct("<-")) {
      bool send = cur_.Next().text == "<-";
      if (send) ParseExpression(composite_ok);
      auto s = MakeStmt(StmtKind::kOther, begin);
      s->values = std::move(lhs);
      s->end = cur_.prev_end();
      return s;
    }
    auto s = MakeStmt(StmtKind::kExpr, begin);
    s->values = std::move(lhs);
    s->end = cur_.prev_end();
    return s;
  }

  StmtPtr ParseIf() {
    std::uint32_t begin = cur_.Next().begin;
    StmtPtr init;
    auto first = ParseSimpleStatement(false);
    ExprPtr cond;
    if (cur_.AcceptPunct(";")) {
      init = std::move(first);
      auto c = ParseSimpleStatement(false);
      if (c->kind != StmtKind::kExpr || c->values.size() != 1) cur_.Fail("expected condition");
      cond = std::move(c->values[0]);
    } else {
      if (first->kind != StmtKind::kExpr || first->values.size() != 1) {
        cur_.Fail("expected condition");
      }
      cond = std::move(first->values[0]);
    }
    auto s = MakeStmt(StmtKind::kIf, begin);
    s->values.push_back(std::move(cond));
    s->blocks.push_back(ParseBlock());
    if (cur_.AcceptWord("else")) {
      if (cur_.IsWord("if")) {
        Block nested;
        nested.push_back(ParseIf());
        nested.back()->op = "header";
        s->blocks.push_back(std::move(nested));
      } else {
        s->blocks.push_back(ParseBlock());
      }
      s->exhaustive = true;
    }
    s->end = cur_.prev_end();
    if (!init) return s;
    Block seq;
    seq.push_back(std::move(init));
    seq.push_back(std::move(s));
    return Wrap(std::move(seq), begin);
  }

  StmtPtr ParseFor() {
    std::uint32_t begin = cur_.Next().begin;
    auto loop = MakeStmt(StmtKind::kLoop, begin);
    StmtPtr init;
    if (cur_.IsPunct("{")) {
      // infinite loop
    } else if (cur_.IsWord("range")) {
      cur_.Next();
      loop->values.push_back(ParseExpression(false));
    } else {
      StmtPtr first;
      if (!cur_.IsPunct(";")) first = ParseSimpleStatement(false);
      if (cur_.AcceptPunct(";")) {
        init = std::move(first);
        if (!cur_.IsPunct(";")) {
          auto c = ParseSimpleStatement(false);
          for (auto& v : c->values) loop->values.push_back(std::move(v));
        }
        cur_.ExpectPunct(";");
        if (!cur_.IsPunct("{")) {
          auto post = ParseSimpleStatement(false);
          for (auto& v : post->values) loop->values.push_back(std::move(v));
        }
      } else if (first && first->kind == StmtKind::kAssign && first->values.size() == 1 &&
                 first->values[0]->kind == ExprKind::kUnary &&
                 first->values[0]->text == "range") {
        loop->targets = std::move(first->targets);
        loop->values.push_back(std::move(first->values[0]->children[0]));
      } else if (first) {
        for (auto& v : first->values) loop->values.push_back(std::move(v));
      }
    }
    loop->blocks.push_back(ParseBlock());
    loop->end = cur_.prev_end();
    if (!init) return loop;
    Block seq;
    seq.push_back(std::move(init));
    seq.push_back(std::move(loop));
    return Wrap(std::move(seq), begin);
  }

  void ParseCaseBody(Block& body) {
    while (!cur_.IsWord("case") && !cur_.IsWord("default") && !cur_.IsPunct("}")) {
      if (cur_.AtEnd()) cur_.Fail("expected '}'");
      if (cur_.AcceptPunct(";")) continue;
      if (auto st = ParseStatement()) body.push_back(std::move(st));
      if (!cur_.IsPunct("}")) ExpectTerminator();
    }
  }

  StmtPtr ParseSwitch() {
    std::uint32_t begin = cur_.Next().begin;
    StmtPtr init;
    auto s = MakeStmt(StmtKind::kIf, begin);
    if (!cur_.IsPunct("{")) {
      StmtPtr first;
      if (!cur_.IsPunct(";")) first = ParseSimpleStatement(false);
      if (cur_.AcceptPunct(";")) {
        init = std::move(first);
        if (!cur_.IsPunct("{")) {
          auto tag = ParseSimpleStatement(false);
          for (auto& v : tag->values) s->values.push_back(std::move(v));
        }
      } else if (first) {
        for (auto& v : first->values) s->values.push_back(std::move(v));
      }
    }
    cur_.ExpectPunct("{");
    while (!cur_.AcceptPunct("}")) {
      if (cur_.AcceptPunct(";")) continue;
      if (cur_.AcceptWord("case")) {
        // Expression or type lists.
        do {
          if (StartsTypeOnly()) {
            ParseType();
          } else {
            s->values.push_back(ParseExpression(true));
          }
        } while (cur_.AcceptPunct(","));
      } else if (cur_.AcceptWord("default")) {
        s->exhaustive = true;
      } else {
        cur_.Fail("expected 'case' or 'default'");
      }
      cur_.ExpectPunct(":");
      Block body;
      ParseCaseBody(body);
      s->blocks.push_back(std::move(body));
    }
    s->end = cur_.prev_end();
    if (!init) return s;
    Block seq;
    seq.push_back(std::move(init));
    seq.push_back(std::move(s));
    return Wrap(std::move(seq), begin);
  }

  bool StartsTypeOnly() const {
    const Token& t = cur_.Peek();
    if (t.kind == TokenKind::kIdent) {
      return t.text == "map" || t.text == "chan" || t.text == "struct" ||
             t.text == "interface";
    }
    return t.kind == TokenKind::kPunct && t.text == "[" && cur_.IsPunct("]", 1);
  }

  StmtPtr ParseSelect() {
    std::uint32_t begin = cur_.Next().begin;
    auto s = MakeStmt(StmtKind::kIf, begin);
    cur_.ExpectPunct("{");
    while (!cur_.AcceptPunct("}")) {
      if (cur_.AcceptPunct(";")) continue;
      Block body;
      if (cur_.AcceptWord("case")) {
        body.push_back(ParseSimpleStatement(true));
      } else if (cur_.AcceptWord("default")) {
        s->exhaustive = true;
      } else {
        cur_.Fail("expected 'case' or 'default'");
      }
      cur_.ExpectPunct(":");
      ParseCaseBody(body);
      s->blocks.push_back(std::move(body));
    }
    s->end = cur_.prev_end();
    return s;
  }

  // ---- expressions -------------------------------------------------------

  std::vector<ExprPtr> ParseExpressionList(bool composite_ok) {
    std::vector<ExprPtr> out;
    out.push_back(ParseExpression(composite_ok));
    while (cur_.AcceptPunct(",")) out.push_back(ParseExpression(composite_ok));
    return out;
  }

  ExprPtr ParseExpression(bool composite_ok, int min_prec = 1) {
    auto lhs = ParseUnary(composite_ok);
    while (true) {
      int prec = GoPrecedence(cur_.Peek());
      if (prec < min_prec) return lhs;
      std::string op = cur_.Next().text;
      auto rhs = ParseExpression(composite_ok, prec + 1);
      auto e = MakeExpr(ExprKind::kBinary, lhs->begin, rhs->end, op);
      e->children.push_back(std::move(lhs));
      e->children.push_back(std::move(rhs));
      lhs = std::move(e);
    }
  }

  ExprPtr ParseUnary(bool composite_ok) {
    const Token& t = cur_.Peek();
    if (t.kind == TokenKind::kPunct &&
        (t.text == "-" || t.text == "+" || t.text == "!" || t.text == "^" ||
         t.text == "&" || t.text == "*" || t.text == "<-")) {
      std::uint32_t begin = t.begin;
      std::string op = cur_.Next().text;
      auto operand = ParseUnary(composite_ok);
      auto e = MakeExpr(ExprKind::kUnary, begin, operand->end, op);
      e->children.push_back(std::move(operand));
      return e;
    }
    return ParsePrimary(composite_ok);
  }

  static bool IsTypeName(const Expr& e) {
    if (e.kind == ExprKind::kName) return true;
    return e.kind == ExprKind::kMember && e.children.size() == 1 &&
           e.children[0]->kind == ExprKind::kName;
  }

  static std::string TypeNameText(const Expr& e) {
    if (e.kind == ExprKind::kName) return e.text;
    return e.children[0]->text + "." + e.text;
  }

  ExprPtr ParseCompositeBody(std::string type, std::uint32_t begin) {
    cur_.ExpectPunct("{");
    auto obj = MakeExpr(ExprKind::kObject, begin, begin, std::move(type));
    while (!cur_.IsPunct("}")) {
      SkipSemicolons();
      if (cur_.IsPunct("}")) break;
      ExprPtr first = cur_.IsPunct("{") ? ParseCompositeBody("", cur_.Peek().begin)
                                        : ParseExpression(true);
      if (cur_.AcceptPunct(":")) {
        std::string key;
        if (first->kind == ExprKind::kName || first->kind == ExprKind::kString) {
          key = first->text;
        }
        ExprPtr value = cur_.IsPunct("{") ? ParseCompositeBody("", cur_.Peek().begin)
                                          : ParseExpression(true);
        obj->keys.push_back(key);
        obj->children.push_back(std::move(value));
      } else {
        obj->keys.emplace_back();
        obj->children.push_back(std::move(first));
      }
      if (!cur_.AcceptPunct(",")) break;
      SkipSemicolons();
    }
    SkipSemicolons();
    cur_.ExpectPunct("}");
    obj->end = cur_.prev_end();
    return obj;
  }

  ExprPtr ParseOperand() {
    const Token& t = cur_.Peek();
    std::uint32_t begin = t.begin;
    switch (t.kind) {
      case TokenKind::kNumber:
        cur_.Next();
        return MakeExpr(ExprKind::kNumber, t.begin, t.end, t.text);
      case TokenKind::kString:
        cur_.Next();
        return MakeExpr(ExprKind::kString, t.begin, t.end, t.value);
      case TokenKind::kIdent: {
        if (t.text == "func") {
          cur_.Next();
          auto fn = std::make_shared<Function>();
          fn->begin = begin;
          fn->params = ParseSignature();
          if (!cur_.IsPunct("{")) {
            return MakeExpr(ExprKind::kOther, begin, cur_.prev_end(), "func");
          }
          fn->body = ParseBlock();
          fn->end = cur_.prev_end();
          auto e = MakeExpr(ExprKind::kFunction, begin, fn->end);
          e->function = std::move(fn);
          return e;
        }
        if (t.text == "map" || t.text == "chan" || t.text == "struct" ||
            t.text == "interface") {
          std::string type = ParseType();
          if (cur_.IsPunct("{")) return ParseCompositeBody(type, begin);
          return MakeExpr(ExprKind::kOther, begin, cur_.prev_end(), type);
        }
        cur_.Next();
        if (t.text == "true" || t.text == "false" || t.text == "nil" || t.text == "iota") {
          return MakeExpr(ExprKind::kKeyword, t.begin, t.end, t.text);
        }
        return MakeExpr(ExprKind::kName, t.begin, t.end, t.text);
      }
      case TokenKind::kPunct:
        if (t.text == "(") {
          cur_.Next();
          auto inner = ParseExpression(true);
          cur_.ExpectPunct(")");
          return inner;
        }
        if (t.text == "[") {
          std::string type = ParseType();
          if (cur_.IsPunct("{")) return ParseCompositeBody(type, begin);
          return MakeExpr(ExprKind::kOther, begin, cur_.prev_end(), type);
        }
        break;
      default:
        break;
    }
    cur_.Fail("expected expression");
  }

  ExprPtr ParsePrimary(bool composite_ok) {
    auto e = ParseOperand();
    while (true) {
      if (cur_.IsPunct(".")) {
        cur_.Next();
        if (cur_.AcceptPunct("(")) {
          // Type assertion or type switch guard.
          if (!cur_.AcceptWord("type")) ParseType();
          cur_.ExpectPunct(")");
          auto a = MakeExpr(ExprKind::kOther, e->begin, cur_.prev_end(), "assert");
          a->children.push_back(std::move(e));
          e = std::move(a);
          continue;
        }
        const Token& name = cur_.Next();
        if (name.kind != TokenKind::kIdent) cur_.Fail("expected selector");
        auto m = MakeExpr(ExprKind::kMember, e->begin, name.end, name.text);
        m->name_offset = name.begin;
        m->children.push_back(std::move(e));
        e = std::move(m);
      } else if (cur_.IsPunct("(")) {
        cur_.Next();
        auto call = MakeExpr(ExprKind::kCall, e->begin, e->end);
        call->children.push_back(std::move(e));
        while (!cur_.IsPunct(")")) {
          call->children.push_back(ParseExpression(true));
          call->keys.emplace_back();
          cur_.AcceptPunct("...");
          if (!cur_.AcceptPunct(",")) break;
        }
        cur_.ExpectPunct(")");
        call->end = cur_.prev_end();
        e = std::move(call);
      } else if (cur_.IsPunct("[")) {
        cur_.Next();
        ExprPtr idx;
        bool slice = false;
        if (!cur_.IsPunct(":")) idx = ParseExpression(true);
        while (cur_.AcceptPunct(":")) {
          slice = true;
          if (!cur_.IsPunct("]") && !cur_.IsPunct(":")) ParseExpression(true);
        }
        while (cur_.AcceptPunct(",")) ParseType();  // generic instantiation
        cur_.ExpectPunct("]");
        if (slice) {
          auto s = MakeExpr(ExprKind::kOther, e->begin, cur_.prev_end(), "slice");
          s->children.push_back(std::move(e));
          e = std::move(s);
        } else {
          auto m = MakeExpr(ExprKind::kIndex, e->begin, cur_.prev_end());
          m->children.push_back(std::move(e));
          m->children.push_back(std::move(idx));
          e = std::move(m);
        }
      } else if (cur_.IsPunct("{") && composite_ok && IsTypeName(*e)) {
        e = ParseCompositeBody(TypeNameText(*e), e->begin);
      } else {
        return e;
      }
    }
  }

  TokenCursor cur_;
};

}  // namespace

Module ParseGo(const SourceUnit& unit) {
  auto tokens = LexGo(unit.text, 0, static_cast<std::uint32_t>(unit.text.size()),
                      unit.line_index);
  GoParser parser(std::move(tokens), unit);
  Module m;
  m.language = Language::kGo;
  m.body = parser.ParseFile();
  return m;
}

}  // namespace privscope::syntax

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
#include <array>

#include "parser_base.h"

namespace privscope::syntax {
namespace {

class PyParser {
 public:
  PyParser(std::vector<Token> tokens, const SourceUnit& unit)
      : cur_(std::move(tokens), unit) {}

  Block ParseFile() {
    Block body;
    while (!cur_.AtEnd()) {
      if (cur_.Peek().kind == TokenKind::kNewline) {
        cur_.Next();
        continue;
      }
      if (cur_.Peek().kind == TokenKind::kIndent) cur_.Fail("unexpected indent");
      ParseStatementInto(body);
    }
    return body;
  }

  ExprPtr ParseStandaloneExpression() {
    auto e = ParseTestList();
    if (!cur_.AtEnd()) cur_.Fail("unexpected token in f-string expression");
    return e;
  }

 private:
  bool AtLineEnd() const {
    TokenKind k = cur_.Peek().kind;
    return k == TokenKind::kNewline || k == TokenKind::kEof || cur_.IsPunct(";");
  }

  void EndSimple() {
    if (cur_.Peek().kind == TokenKind::kNewline) {
      cur_.Next();
      return;
    }
    if (cur_.AtEnd() || cur_.Peek().kind == TokenKind::kDedent) return;
    cur_.Fail("expected end of statement");
  }

  // block := NEWLINE INDENT stmt+ DEDENT | simple_stmts
  Block ParseSuite() {
    cur_.ExpectPunct(":");
    Block body;
    if (cur_.Peek().kind != TokenKind::kNewline) {
      ParseSimpleStatements(body);
      return body;
    }
    cur_.Next();
    if (cur_.Peek().kind != TokenKind::kIndent) cur_.Fail("expected an indented block");
    cur_.Next();
    while (cur_.Peek().kind != TokenKind::kDedent && !cur_.AtEnd()) {
      if (cur_.Peek().kind == TokenKind::kNewline) {
        cur_.Next();
        continue;
      }
      ParseStatementInto(body);
    }
    if (cur_.Peek().kind == TokenKind::kDedent) cur_.Next();
    return body;
  }

  void ParseStatementInto(Block& out) {
    const Token& t = cur_.Peek();
    if (t.kind == TokenKind::kIdent) {
      const std::string& w = t.text;
      if (w == "def" || (w == "async" && cur_.IsWord("def", 1))) {
        out.push_back(ParseDef());
        return;
      }
      if (w == "async" && (cur_.IsWord("for", 1) || cur_.IsWord("with", 1))) {
        cur_.Next();
        ParseStatementInto(out);
        return;
      }
      if (w == "class") {
        out.push_back(ParseClass());
        return;
      }
      if (w == "if") {
        out.push_back(ParseIf());
        return;
      }
      if (w == "for" || w == "while") {
        out.push_back(ParseLoop());
        return;
      }
      if (w == "try") {
        out.push_back(ParseTry());
        return;
      }
      if (w == "with") {
        out.push_back(ParseWith());
        return;
      }
      if (w == "match" && LooksLikeMatch()) {
        out.push_back(ParseMatch());
        return;
      }
    }
    if (cur_.IsPunct("@")) {
      // Decorators are evaluated for validity and otherwise ignored.
      while (cur_.AcceptPunct("@")) {
        ParseTest();
        if (cur_.Peek().kind != TokenKind::kNewline) cur_.Fail("expected newline");
        cur_.Next();
      }
      ParseStatementInto(out);
      return;
    }
    ParseSimpleStatements(out);
  }

  void ParseSimpleStatements(Block& out) {
    while (true) {
      if (auto s = ParseSimpleStatement()) out.push_back(std::move(s));
      if (!cur_.AcceptPunct(";")) break;
      if (AtLineEnd()) break;
    }
    EndSimple();
  }

  StmtPtr ParseSimpleStatement() {
    const Token& t = cur_.Peek();
    std::uint32_t begin = t.begin;
    if (t.kind == TokenKind::kIdent) {
      const std::string& w = t.text;
      if (w == "pass" || w == "break" || w == "continue") {
        cur_.Next();
        auto s = MakeStmt(StmtKind::kOther, begin);
        s->end = cur_.prev_end();
        return s;
      }
      if (w == "return") {
        cur_.Next();
        auto s = MakeStmt(StmtKind::kReturn, begin);
        if (!AtLineEnd()) s->values.push_back(ParseTestList());
        s->end = cur_.prev_end();
        return s;
      }
      if (w == "raise" || w == "del" || w == "assert") {
        cur_.Next();
        auto s = MakeStmt(StmtKind::kExpr, begin);
        if (!AtLineEnd()) {
          s->values.push_back(ParseTestList());
          if (cur_.AcceptWord("from")) s->values.push_back(ParseTest());
        }
        s->end = cur_.prev_end();
        return s;
      }
      if (w == "global" || w == "nonlocal") {
        cur_.Next();
        do {
          cur_.ExpectIdent();
        } while (cur_.AcceptPunct(","));
        auto s = MakeStmt(StmtKind::kOther, begin);
        s->end = cur_.prev_end();
        return s;
      }
      if (w == "import") return ParseImport();
      if (w == "from") return ParseFromImport();
    }
    auto first = ParseTestListStar();
    if (cur_.IsPunct(":")) {
      // Annotated assignment.
      cur_.Next();
      ParseTest();
      auto s = MakeStmt(StmtKind::kAssign, begin);
      s->op = "=";
      if (cur_.AcceptPunct("=")) {
        s->targets.push_back(std::move(first));
        s->values.push_back(ParseTestListStar());
      } else {
        s->kind = StmtKind::kOther;
      }
      s->end = cur_.prev_end();
      return s;
    }
    if (cur_.IsPunct("=")) {
      std::vector<ExprPtr> chain;
      chain.push_back(std::move(first));
      while (cur_.AcceptPunct("=")) chain.push_back(ParseTestListStar());
      auto s = MakeStmt(StmtKind::kAssign, begin);
      s->op = chain.size() > 2 ? "chain" : "=";
      auto value = std::move(chain.back());
      chain.pop_back();
      for (auto& target : chain) s->targets.push_back(std::move(target));
      s->values.push_back(std::move(value));
      s->end = cur_.prev_end();
      return s;
    }
    const Token& op = cur_.Peek();
    if (op.kind == TokenKind::kPunct && op.text.size() >= 2 && op.text.back() == '=' &&
        op.text != "==" && op.text != "!=" && op.text != "<=" && op.text != ">=") {
      std::string text = cur_.Next().text;
      auto s = MakeStmt(StmtKind::kAssign, begin);
      s->op = text;
      s->targets.push_back(std::move(first));
      s->values.push_back(ParseTestList());
      s->end = cur_.prev_end();
      return s;
    }
    auto s = MakeStmt(StmtKind::kExpr, begin);
    s->values.push_back(std::move(first));
    s->end = cur_.prev_end();
    return s;
  }

  std::string ParseDottedName() {
    std::string name = cur_.ExpectIdent();
    while (cur_.AcceptPunct(".")) name += "." + cur_.ExpectIdent();
    return name;
  }

  StmtPtr ParseImport() {
    std::uint32_t begin = cur_.Next().begin;
    auto block = MakeStmt(StmtKind::kBlock, begin);
    Block imports;
    do {
      std::uint32_t b = cur_.Peek().begin;
      std::string module = ParseDottedName();
      auto s = MakeStmt(StmtKind::kImport, b);
      s->import.module = module;
      if (cur_.AcceptWord("as")) {
        s->import.bindings.push_back({cur_.ExpectIdent(), ""});
      } else {
        // `import a.b` binds `a`; the member path reaches the submodule.
        auto dot = module.find('.');
        std::string head = module.substr(0, dot);
        s->import.module = head;
        s->import.bindings.push_back({head, ""});
        if (dot != std::string::npos) {
          auto sub = MakeStmt(StmtKind::kImport, b);
          sub->import.module = module;
          sub->end = cur_.prev_end();
          imports.push_back(std::move(sub));
        }
      }
      s->end = cur_.prev_end();
      imports.push_back(std::move(s));
    } while (cur_.AcceptPunct(","));
    if (imports.size() == 1) return std::move(imports.front());
    block->blocks.push_back(std::move(imports));
    block->end = cur_.prev_end();
    return block;
  }

  StmtPtr ParseFromImport() {
    std::uint32_t begin = cur_.Next().begin;
    std::string module;
    while (cur_.IsPunct(".") || cur_.IsPunct("...")) module += cur_.Next().text;
    if (cur_.Peek().kind == TokenKind::kIdent && !cur_.IsWord("import")) {
      module += ParseDottedName();
    }
    cur_.ExpectWord("import");
    auto s = MakeStmt(StmtKind::kImport, begin);
    s->import.module = module;
    if (cur_.AcceptPunct("*")) {
      s->end = cur_.prev_end();
      return s;
    }
    bool paren = cur_.AcceptPunct("(");
    while (true) {
      std::string member = cur_.ExpectIdent();
      std::string local = member;
      if (cur_.AcceptWord("as")) local = cur_.ExpectIdent();
      s->import.bindings.push_back({local, member});
      if (!cur_.AcceptPunct(",")) break;
      if (paren && cur_.IsPunct(")")) break;
    }
    if (paren) cur_.ExpectPunct(")");
    s->end = cur_.prev_end();
    return s;
  }

  std::vector<std::string> ParseParams(std::string_view close) {
    std::vector<std::string> names;
    while (!cur_.IsPunct(close)) {
      if (cur_.AcceptPunct("/")) {
      } else if (cur_.AcceptPunct("*") || cur_.AcceptPunct("**")) {
        if (cur_.Peek().kind == TokenKind::kIdent) names.push_back(cur_.Next().text);
      } else {
        names.push_back(cur_.ExpectIdent());
      }
      if (close == ")" && cur_.AcceptPunct(":")) ParseTest();
      if (cur_.AcceptPunct("=")) ParseTest();
      if (!cur_.AcceptPunct(",")) break;
    }
    return names;
  }

  StmtPtr ParseDef() {
    std::uint32_t begin = cur_.Peek().begin;
    cur_.AcceptWord("async");
    cur_.ExpectWord("def");
    auto fn = std::make_shared<Function>();
    fn->begin = begin;
    fn->name = cur_.ExpectIdent();
    cur_.ExpectPunct("(");
    fn->params = ParseParams(")");
    cur_.ExpectPunct(")");
    if (cur_.AcceptPunct("->")) ParseTest();
    fn->body = ParseSuite();
    fn->end = cur_.prev_end();
    auto s = MakeStmt(StmtKind::kFunction, begin);
    s->function = std::move(fn);
    s->end = cur_.prev_end();
    return s;
  }

  StmtPtr ParseClass() {
    std::uint32_t begin = cur_.Next().begin;
    auto s = MakeStmt(StmtKind::kClass, begin);
    s->name = cur_.ExpectIdent();
    if (cur_.AcceptPunct("(")) {
      auto holder = MakeExpr(ExprKind::kCall, begin, begin);
      ParseCallArgs(*holder);
    }
    s->blocks.push_back(ParseSuite());
    s->end = cur_.prev_end();
    return s;
  }

  StmtPtr ParseIf() {
    std::uint32_t begin = cur_.Next().begin;  // if / elif
    auto s = MakeStmt(StmtKind::kIf, begin);
    s->values.push_back(ParseNamedExpr());
    s->blocks.push_back(ParseSuite());
    if (cur_.IsWord("elif")) {
      Block nested;
      nested.push_back(ParseIf());
      s->exhaustive = true;
      s->blocks.push_back(std::move(nested));
    } else if (cur_.AcceptWord("else")) {
      s->blocks.push_back(ParseSuite());
      s->exhaustive = true;
    }
    s->end = cur_.prev_end();
    return s;
  }

  StmtPtr ParseLoop() {
    std::uint32_t begin = cur_.Peek().begin;
    auto s = MakeStmt(StmtKind::kLoop, begin);
    if (cur_.AcceptWord("for")) {
      s->targets.push_back(ParseTargetList());
      cur_.ExpectWord("in");
      s->values.push_back(ParseTestList());
    } else {
      cur_.ExpectWord("while");
      s->values.push_back(ParseNamedExpr());
    }
    s->blocks.push_back(ParseSuite());
    if (cur_.AcceptWord("else")) {
      // The else clause runs after the loop; model it as a following block.
      Block tail = ParseSuite();
      s->end = cur_.prev_end();
      auto block = MakeStmt(StmtKind::kBlock, begin);
      Block inner;
      inner.push_back(std::move(s));
      for (auto& st : tail) inner.push_back(std::move(st));
      block->blocks.push_back(std::move(inner));
      block->end = cur_.prev_end();
      return block;
    }
    s->end = cur_.prev_end();
    return s;
  }

  ExprPtr ParseTargetList() {
    std::uint32_t begin = cur_.Peek().begin;
    auto first = ParseStarOr([this] { return ParseBitOr(); });
    if (!cur_.IsPunct(",")) return first;
    auto tuple = MakeExpr(ExprKind::kArray, begin, begin);
    tuple->children.push_back(std::move(first));
    while (cur_.AcceptPunct(",")) {
      if (cur_.IsWord("in")) break;
      tuple->children.push_back(ParseStarOr([this] { return ParseBitOr(); }));
    }
    tuple->end = cur_.prev_end();
    return tuple;
  }

  StmtPtr ParseTry() {
    std::uint32_t begin = cur_.Next().begin;
    auto s = MakeStmt(StmtKind::kTry, begin);
    s->blocks.push_back(ParseSuite());
    Block else_block;
    while (cur_.AcceptWord("except")) {
      cur_.AcceptPunct("*");
      if (!cur_.IsPunct(":")) {
        ParseTest();
        if (cur_.AcceptWord("as")) cur_.ExpectIdent();
        else if (cur_.AcceptPunct(",")) ParseTest();
      }
      s->blocks.push_back(ParseSuite());
    }
    if (cur_.AcceptWord("else")) else_block = ParseSuite();
    if (cur_.AcceptWord("finally")) {
      s->blocks.push_back(ParseSuite());
      s->has_finally = true;
    }
    if (s->blocks.size() == 1) cur_.Fail("expected 'except' or 'finally'");
    // The else clause continues the success path of the body.
    for (auto& st : else_block) s->blocks[0].push_back(std::move(st));
    s->end = cur_.prev_end();
    return s;
  }

  StmtPtr ParseWith() {
    std::uint32_t begin = cur_.Next().begin;
    auto block = MakeStmt(StmtKind::kBlock, begin);
    Block inner;
    bool paren = cur_.IsPunct("(") && WithItemsParenthesized();
    if (paren) cur_.Next();
    do {
      if (paren && cur_.IsPunct(")")) break;
      std::uint32_t b = cur_.Peek().begin;
      auto ctx = ParseTest();
      if (cur_.AcceptWord("as")) {
        auto s = MakeStmt(StmtKind::kAssign, b);
        s->op = "=";
        s->targets.push_back(ParseBitOr());
        s->values.push_back(std::move(ctx));
        s->end = cur_.prev_end();
        inner.push_back(std::move(s));
      } else {
        auto s = MakeStmt(StmtKind::kExpr, b);
        s->values.push_back(std::move(ctx));
        s->end = cur_.prev_end();
        inner.push_back(std::move(s));
      }
    } while (cur_.AcceptPunct(","));
    if (paren) cur_.ExpectPunct(")");
    for (auto& st : ParseSuite()) inner.push_back(std::move(st));
    block->blocks.push_back(std::move(inner));
    block->end = cur_.prev_end();
    return block;
  }

  bool WithItemsParenthesized() const {
    std::size_t close = cur_.MatchingClose(cur_.index());
    const Token& after = cur_.At(close + 1);
    return after.kind == TokenKind::kPunct && after.text == ":";
  }

  bool LooksLikeMatch() const {
    // `match` is a soft keyword: a statement iff the logical line ends in ':'
    // followed by a newline.
    const Token& next = cur_.Peek(1);
    if (next.kind == TokenKind::kNewline || next.kind == TokenKind::kEof) return false;
    if (next.kind == TokenKind::kPunct &&
        (next.text == "=" || next.text == "." || next.text == ")" || next.text == ",")) {
      return false;
    }
    for (std::size_t i = cur_.index() + 1;; ++i) {
      const Token& t = cur_.At(i);
      if (t.kind == TokenKind::kEof) return false;
      if (t.kind == TokenKind::kNewline) {
        const Token& prev = cur_.At(i - 1);
        return prev.kind == TokenKind::kPunct && prev.text == ":";
      }
    }
  }

  StmtPtr ParseMatch() {
    std::uint32_t begin = cur_.Next().begin;
    auto s = MakeStmt(StmtKind::kIf, begin);
    s->values.push_back(ParseTestList());
    cur_.ExpectPunct(":");
    if (cur_.Peek().kind != TokenKind::kNewline) cur_.Fail("expected newline");
    cur_.Next();
    if (cur_.Peek().kind != TokenKind::kIndent) cur_.Fail("expected an indented block");
    cur_.Next();
    while (cur_.AcceptWord("case")) {
      // Patterns are skipped token-wise up to the suite colon.
      int depth = 0;
      bool wildcard = cur_.IsWord("_") && cur_.IsPunct(":", 1);
      while (!(depth == 0 && cur_.IsPunct(":"))) {
        if (cur_.AtEnd()) cur_.Fail("unterminated case pattern");
        const Token& t = cur_.Next();
        if (t.kind == TokenKind::kPunct) {
          if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
          if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
        }
      }
      s->exhaustive = s->exhaustive || wildcard;
      s->blocks.push_back(ParseSuite());
    }
    if (cur_.Peek().kind != TokenKind::kDedent) cur_.Fail("expected 'case'");
    cur_.Next();
    s->end = cur_.prev_end();
    return s;
  }

  // ---- expressions -------------------------------------------------------

  template <typename F>
  ExprPtr ParseStarOr(F inner) {
    if (cur_.IsPunct("*")) {
      std::uint32_t b = cur_.Next().begin;
      auto e = ParseBitOr();
      auto spread = MakeExpr(ExprKind::kSpread, b, e->end);
      spread->children.push_back(std::move(e));
      return spread;
    }
    return inner();
  }

  bool StartsExpression() const {
    const Token& t = cur_.Peek();
    switch (t.kind) {
      case TokenKind::kIdent:
        return t.text != "in" && t.text != "if" && t.text != "else" &&
               t.text != "for" && t.text != "as" && t.text != "from";
      case TokenKind::kNumber:
      case TokenKind::kString:
      case TokenKind::kTemplate:
        return true;
      case TokenKind::kPunct:
        return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" ||
               t.text == "+" || t.text == "~" || t.text == "*" || t.text == "...";
      default:
        return false;
    }
  }

  // Comma-separated expressions; more than one makes a tuple.
  ExprPtr ParseTestListStar() {
    std::uint32_t begin = cur_.Peek().begin;
    auto first = ParseStarOr([this] { return ParseNamedExpr(); });
    if (!cur_.IsPunct(",")) return first;
    auto tuple = MakeExpr(ExprKind::kArray, begin, begin);
    tuple->children.push_back(std::move(first));
    while (cur_.AcceptPunct(",")) {
      if (!StartsExpression()) break;
      tuple->children.push_back(ParseStarOr([this] { return ParseNamedExpr(); }));
    }
    tuple->end = cur_.prev_end();
    return tuple;
  }

  ExprPtr ParseTestList() { return ParseTestListStar(); }

  ExprPtr ParseNamedExpr() {
    if (cur_.Peek().kind == TokenKind::kIdent && cur_.IsPunct(":=", 1)) {
      const Token& name = cur_.Next();
      cur_.Next();
      auto value = ParseTest();
      auto e = MakeExpr(ExprKind::kBinary, name.begin, value->end, ":=");
      e->children.push_back(MakeExpr(ExprKind::kName, name.begin, name.end, name.text));
      e->children.push_back(std::move(value));
      return e;
    }
    return ParseTest();
  }

  ExprPtr ParseTest() {
    if (cur_.IsWord("lambda")) return ParseLambda();
    auto body = ParseOr();
    if (cur_.IsWord("if") ) {
      cur_.Next();
      auto cond = ParseOr();
      cur_.ExpectWord("else");
      auto otherwise = ParseTest();
      auto e = MakeExpr(ExprKind::kConditional, body->begin, otherwise->end);
      e->children.push_back(std::move(cond));
      e->children.push_back(std::move(body));
      e->children.push_back(std::move(otherwise));
      return e;
    }
    return body;
  }

  ExprPtr ParseTestNoCond() {
    if (cur_.IsWord("lambda")) return ParseLambda();
    return ParseOr();
  }

  ExprPtr ParseLambda() {
    std::uint32_t begin = cur_.Next().begin;
    auto fn = std::make_shared<Function>();
    fn->begin = begin;
    fn->params = ParseParams(":");
    cur_.ExpectPunct(":");
    auto value = ParseTest();
    auto ret = MakeStmt(StmtKind::kReturn, value->begin);
    ret->end = value->end;
    ret->values.push_back(std::move(value));
    fn->body.push_back(std::move(ret));
    fn->end = cur_.prev_end();
    auto e = MakeExpr(ExprKind::kFunction, begin, fn->end);
    e->function = std::move(fn);
    return e;
  }

  ExprPtr Binary(std::string op, ExprPtr lhs, ExprPtr rhs) {
    auto e = MakeExpr(ExprKind::kBinary, lhs->begin, rhs->end, std::move(op));
    e->children.push_back(std::move(lhs));
    e->children.push_back(std::move(rhs));
    return e;
  }

  ExprPtr ParseOr() {
    auto lhs = ParseAnd();
    while (cur_.AcceptWord("or")) lhs = Binary("or", std::move(lhs), ParseAnd());
    return lhs;
  }

  ExprPtr ParseAnd() {
    auto lhs = ParseNot();
    while (cur_.AcceptWord("and")) lhs = Binary("and", std::move(lhs), ParseNot());
    return lhs;
  }

  ExprPtr ParseNot() {
    if (cur_.IsWord("not")) {
      std::uint32_t b = cur_.Next().begin;
      auto operand = ParseNot();
      auto e = MakeExpr(ExprKind::kUnary, b, operand->end, "not");
      e->children.push_back(std::move(operand));
      return e;
    }
    return ParseComparison();
  }

  ExprPtr ParseComparison() {
    auto lhs = ParseBitOr();
    while (true) {
      std::string op;
      const Token& t = cur_.Peek();
      if (t.kind == TokenKind::kPunct &&
          (t.text == "<" || t.text == ">" || t.text == "==" || t.text == "!=" ||
           t.text == "<=" || t.text == ">=")) {
        op = cur_.Next().text;
      } else if (cur_.IsWord("in")) {
        op = cur_.Next().text;
      } else if (cur_.IsWord("not") && cur_.IsWord("in", 1)) {
        cur_.Next();
        cur_.Next();
        op = "not in";
      } else if (cur_.IsWord("is")) {
        cur_.Next();
        op = cur_.AcceptWord("not") ? "is not" : "is";
      } else {
        return lhs;
      }
      lhs = Binary(op, std::move(lhs), ParseBitOr());
    }
  }

  ExprPtr ParseBitOr() { return ParseLevel(0); }

  ExprPtr ParseLevel(int level) {
    static const std::array<std::vector<std::string_view>, 6> levels = {{
        {"|"}, {"^"}, {"&"}, {"<<", ">>"}, {"+", "-"}, {"*", "/", "//", "%", "@"}}};
    if (level == static_cast<int>(levels.size())) return ParseFactor();
    auto lhs = ParseLevel(level + 1);
    while (true) {
      const Token& t = cur_.Peek();
      const auto& ops = levels[level];
      if (t.kind != TokenKind::kPunct ||
          std::find(ops.begin(), ops.end(), t.text) == ops.end()) {
        return lhs;
      }
      std::string op = cur_.Next().text;
      lhs = Binary(op, std::move(lhs), ParseLevel(level + 1));
    }
  }

  ExprPtr ParseFactor() {
    if (cur_.IsPunct("-") || cur_.IsPunct("+") || cur_.IsPunct("~")) {
      const Token& t = cur_.Next();
      auto operand = ParseFactor();
      auto e = MakeExpr(ExprKind::kUnary, t.begin, operand->end, t.text);
      e->children.push_back(std::move(operand));
      return e;
    }
    return ParsePower();
  }

  ExprPtr ParsePower() {
    if (cur_.AcceptWord("await")) return ParsePower();
    auto base = ParseTrailers(ParseAtom());
    if (cur_.AcceptPunct("**")) return Binary("**", std::move(base), ParseFactor());
    return base;
  }

  void ParseCallArgs(Expr& call) {
    // Called after '('.
    while (!cur_.IsPunct(")")) {
      if (cur_.IsPunct("*") || cur_.IsPunct("**")) {
        const Token& star = cur_.Next();
        auto inner = ParseTest();
        auto spread = MakeExpr(ExprKind::kSpread, star.begin, inner->end, star.text);
        spread->children.push_back(std::move(inner));
        call.children.push_back(std::move(spread));
        call.keys.push_back(star.text);
      } else if (cur_.Peek().kind == TokenKind::kIdent && cur_.IsPunct("=", 1)) {
        std::string key = cur_.Next().text;
        cur_.Next();
        call.children.push_back(ParseTest());
        call.keys.push_back(key);
      } else {
        auto arg = ParseNamedExpr();
        if (cur_.IsWord("for") || cur_.IsWord("async")) {
          arg = ParseComprehensionTail(std::move(arg));
        }
        call.children.push_back(std::move(arg));
        call.keys.emplace_back();
      }
      if (!cur_.AcceptPunct(",")) break;
    }
    cur_.ExpectPunct(")");
    call.end = cur_.prev_end();
  }

  ExprPtr ParseTrailers(ExprPtr e) {
    while (true) {
      if (cur_.IsPunct(".")) {
        cur_.Next();
        const Token& name = cur_.Next();
        if (name.kind != TokenKind::kIdent) cur_.Fail("expected attribute name");
        auto m = MakeExpr(ExprKind::kMember, e->begin, name.end, name.text);
        m->name_offset = name.begin;
        m->children.push_back(std::move(e));
        e = std::move(m);
      } else if (cur_.IsPunct("(")) {
        cur_.Next();
        auto call = MakeExpr(ExprKind::kCall, e->begin, e->end);
        call->children.push_back(std::move(e));
        call->keys.emplace_back();
        ParseCallArgs(*call);
        // keys[0] belongs to the callee; drop it to keep keys aligned with
        // argument positions (children[1..]).
        call->keys.erase(call->keys.begin());
        e = std::move(call);
      } else if (cur_.IsPunct("[")) {
        cur_.Next();
        auto idx = ParseSubscript();
        cur_.ExpectPunct("]");
        auto m = MakeExpr(ExprKind::kIndex, e->begin, cur_.prev_end());
        m->children.push_back(std::move(e));
        m->children.push_back(std::move(idx));
        e = std::move(m);
      } else {
        return e;
      }
    }
  }

  ExprPtr ParseSliceItem() {
    std::uint32_t begin = cur_.Peek().begin;
    bool slice = false;
    ExprPtr first;
    if (!cur_.IsPunct(":")) first = ParseNamedExpr();
    while (cur_.AcceptPunct(":")) {
      slice = true;
      if (!cur_.IsPunct(":") && !cur_.IsPunct("]") && !cur_.IsPunct(",")) ParseTest();
    }
    if (slice) return MakeExpr(ExprKind::kOther, begin, cur_.prev_end(), "slice");
    return first;
  }

  ExprPtr ParseSubscript() {
    std::uint32_t begin = cur_.Peek().begin;
    auto first = ParseSliceItem();
    if (!cur_.IsPunct(",")) return first;
    auto tuple = MakeExpr(ExprKind::kArray, begin, begin);
    tuple->children.push_back(std::move(first));
    while (cur_.AcceptPunct(",")) {
      if (cur_.IsPunct("]")) break;
      tuple->children.push_back(ParseSliceItem());
    }
    tuple->end = cur_.prev_end();
    return tuple;
  }

  ExprPtr ParseComprehensionTail(ExprPtr element) {
    std::uint32_t begin = element->begin;
    std::vector<ExprPtr> clauses;
    while (cur_.IsWord("for") || cur_.IsWord("async")) {
      cur_.AcceptWord("async");
      cur_.ExpectWord("for");
      ParseTargetList();
      cur_.ExpectWord("in");
      clauses.push_back(ParseOr());
      while (cur_.AcceptWord("if")) clauses.push_back(ParseTestNoCond());
    }
    auto e = MakeExpr(ExprKind::kOther, begin, cur_.prev_end(), "comprehension");
    e->children.push_back(std::move(element));
    for (auto& c : clauses) e->children.push_back(std::move(c));
    return e;
  }

  ExprPtr ParseStringRun() {
    // Adjacent literals concatenate; any f-string makes the run a template.
    const Token& first = cur_.Peek();
    std::uint32_t begin = first.begin;
    std::vector<const Token*> parts;
    while (cur_.Peek().kind == TokenKind::kString ||
           cur_.Peek().kind == TokenKind::kTemplate) {
      parts.push_back(&cur_.Next());
    }
    bool any_template = std::any_of(parts.begin(), parts.end(), [](const Token* t) {
      return t->kind == TokenKind::kTemplate;
    });
    if (!any_template) {
      std::string value;
      for (const Token* t : parts) value += t->value;
      return MakeExpr(ExprKind::kString, begin, cur_.prev_end(), value);
    }
    auto e = MakeExpr(ExprKind::kTemplate, begin, cur_.prev_end());
    for (const Token* t : parts) {
      if (t->kind == TokenKind::kString) {
        e->children.push_back(MakeExpr(ExprKind::kString, t->begin, t->end, t->value));
        continue;
      }
      for (const auto& piece : t->pieces) {
        if (piece.is_expr) {
          PyParser sub(LexPython(cur_.unit().text, piece.begin, piece.end,
                                 cur_.unit().line_index, true),
                       cur_.unit());
          e->children.push_back(sub.ParseStandaloneExpression());
        } else if (!piece.text.empty()) {
          e->children.push_back(
              MakeExpr(ExprKind::kString, piece.begin, piece.end, piece.text));
        }
      }
    }
    return e;
  }

  ExprPtr ParseAtom() {
    const Token& t = cur_.Peek();
    switch (t.kind) {
      case TokenKind::kString:
      case TokenKind::kTemplate:
        return ParseStringRun();
      case TokenKind::kNumber:
        cur_.Next();
        return MakeExpr(ExprKind::kNumber, t.begin, t.end, t.text);
      case TokenKind::kIdent: {
        static const std::array<std::string_view, 14> reserved = {
            "def", "class", "if", "elif", "else", "for", "while", "return",
            "import", "from", "try", "except", "pass", "in"};
        if (std::find(reserved.begin(), reserved.end(), t.text) != reserved.end()) {
          cur_.Fail("unexpected keyword");
        }
        cur_.Next();
        if (t.text == "True" || t.text == "False" || t.text == "None") {
          return MakeExpr(ExprKind::kKeyword, t.begin, t.end, t.text);
        }
        return MakeExpr(ExprKind::kName, t.begin, t.end, t.text);
      }
      case TokenKind::kPunct:
        if (t.text == "...") {
          cur_.Next();
          return MakeExpr(ExprKind::kKeyword, t.begin, t.end, "...");
        }
        if (t.text == "(") return ParseParenthesized();
        if (t.text == "[") return ParseList();
        if (t.text == "{") return ParseDictOrSet();
        break;
      default:
        break;
    }
    cur_.Fail("expected expression");
  }

  ExprPtr ParseParenthesized() {
    std::uint32_t begin = cur_.Next().begin;
    if (cur_.AcceptPunct(")")) {
      return MakeExpr(ExprKind::kArray, begin, cur_.prev_end());
    }
    if (cur_.IsWord("yield")) {
      cur_.Next();
      if (!cur_.IsPunct(")")) {
        cur_.AcceptWord("from");
        ParseTestList();
      }
      cur_.ExpectPunct(")");
      return MakeExpr(ExprKind::kOther, begin, cur_.prev_end(), "yield");
    }
    auto first = ParseStarOr([this] { return ParseNamedExpr(); });
    if (cur_.IsWord("for") || cur_.IsWord("async")) {
      auto e = ParseComprehensionTail(std::move(first));
      cur_.ExpectPunct(")");
      e->begin = begin;
      e->end = cur_.prev_end();
      return e;
    }
    if (cur_.AcceptPunct(")")) return first;
    auto tuple = MakeExpr(ExprKind::kArray, begin, begin);
    tuple->children.push_back(std::move(first));
    while (cur_.AcceptPunct(",")) {
      if (cur_.IsPunct(")")) break;
      tuple->children.push_back(ParseStarOr([this] { return ParseNamedExpr(); }));
    }
    cur_.ExpectPunct(")");
    tuple->end = cur_.prev_end();
    return tuple;
  }

  ExprPtr ParseList() {
    std::uint32_t begin = cur_.Next().begin;
    auto list = MakeExpr(ExprKind::kArray, begin, begin);
    if (!cur_.IsPunct("]")) {
      auto first = ParseStarOr([this] { return ParseNamedExpr(); });
      if (cur_.IsWord("for") || cur_.IsWord("async")) {
        auto e = ParseComprehensionTail(std::move(first));
        cur_.ExpectPunct("]");
        e->begin = begin;
        e->end = cur_.prev_end();
        return e;
      }
      list->children.push_back(std::move(first));
      while (cur_.AcceptPunct(",")) {
        if (cur_.IsPunct("]")) break;
        list->children.push_back(ParseStarOr([this] { return ParseNamedExpr(); }));
      }
    }
    cur_.ExpectPunct("]");
    list->end = cur_.prev_end();
    return list;
  }

  static std::string KeyText(const Expr& key) {
    if (key.kind == ExprKind::kString || key.kind == ExprKind::kNumber) return key.text;
    return "";
  }

  ExprPtr ParseDictOrSet() {
    std::uint32_t begin = cur_.Next().begin;
    auto obj = MakeExpr(ExprKind::kObject, begin, begin);
    if (cur_.AcceptPunct("}")) {
      obj->end = cur_.prev_end();
      return obj;
    }
    bool is_set = false;
    bool first = true;
    while (!cur_.IsPunct("}")) {
      if (cur_.IsPunct("**")) {
        std::uint32_t b = cur_.Next().begin;
        auto inner = ParseBitOr();
        auto spread = MakeExpr(ExprKind::kSpread, b, inner->end);
        spread->children.push_back(std::move(inner));
        obj->keys.emplace_back("...");
        obj->children.push_back(std::move(spread));
      } else {
        auto key = ParseStarOr([this] { return ParseTest(); });
        if (cur_.AcceptPunct(":")) {
          auto value = ParseTest();
          if (first && (cur_.IsWord("for") || cur_.IsWord("async"))) {
            auto e = ParseComprehensionTail(std::move(value));
            cur_.ExpectPunct("}");
            e->begin = begin;
            e->end = cur_.prev_end();
            return e;
          }
          obj->keys.push_back(KeyText(*key));
          obj->children.push_back(std::move(value));
        } else {
          is_set = true;
          if (first && (cur_.IsWord("for") || cur_.IsWord("async"))) {
            auto e = ParseComprehensionTail(std::move(key));
            cur_.ExpectPunct("}");
            e->begin = begin;
            e->end = cur_.prev_end();
            return e;
          }
          obj->children.push_back(std::move(key));
        }
      }
      first = false;
      if (!cur_.AcceptPunct(",")) break;
    }
    cur_.ExpectPunct("}");
    obj->end = cur_.prev_end();
    if (is_set) {
      obj->kind = ExprKind::kArray;
      obj->keys.clear();
    }
    return obj;
  }

  TokenCursor cur_;
};

}  // namespace

Module ParsePython(const SourceUnit& unit) {
  auto tokens = LexPython(unit.text, 0, static_cast<std::uint32_t>(unit.text.size()),
                          unit.line_index);
  PyParser parser(std::move(tokens), unit);
  Module m;
  m.language = Language::kPython;
  m.body = parser.ParseFile();
  return m;
}

}  // namespace privscope::syntax

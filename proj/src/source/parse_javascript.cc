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
#include <unordered_map>

#include "parser_base.h"

namespace privscope::syntax {
namespace {

const std::unordered_map<std::string_view, int>& BinaryPrecedence() {
  static const std::unordered_map<std::string_view, int> table = {
      {"??", 1},  {"||", 2},  {"&&", 3},         {"|", 4},   {"^", 5},
      {"&", 6},   {"==", 7},  {"!=", 7},         {"===", 7}, {"!==", 7},
      {"<", 8},   {">", 8},   {"<=", 8},         {">=", 8},  {"instanceof", 8},
      {"in", 8},  {"<<", 9},  {">>", 9},         {">>>", 9}, {"+", 10},
      {"-", 10},  {"*", 11},  {"/", 11},         {"%", 11},  {"**", 12}};
  return table;
}

bool IsAssignOp(const Token& t) {
  static const std::array<std::string_view, 16> ops = {
      "=",   "+=",  "-=",   "*=",  "/=",  "%=",  "**=", "<<=",
      ">>=", ">>>=", "&=", "|=",   "^=",  "&&=", "||=", "?\?="};
  return t.kind == TokenKind::kPunct &&
         std::find(ops.begin(), ops.end(), t.text) != ops.end();
}

class JsParser {
 public:
  JsParser(std::vector<Token> tokens, const SourceUnit& unit)
      : cur_(std::move(tokens), unit) {}

  Block ParseProgram() {
    Block body;
    while (!cur_.AtEnd()) {
      if (auto s = ParseStatement()) body.push_back(std::move(s));
    }
    return body;
  }

  ExprPtr ParseStandaloneExpression() {
    auto e = ParseExpression();
    if (!cur_.AtEnd()) cur_.Fail("unexpected token in template expression");
    return e;
  }

 private:
  // ---- statements --------------------------------------------------------

  void ConsumeSemicolon() {
    if (cur_.AcceptPunct(";")) return;
    if (cur_.IsPunct("}") || cur_.AtEnd() || cur_.Peek().newline_before) return;
    cur_.Fail("expected ';'");
  }

  Block ParseBlockBody() {
    cur_.ExpectPunct("{");
    Block body;
    while (!cur_.IsPunct("}")) {
      if (cur_.AtEnd()) cur_.Fail("expected '}'");
      if (auto s = ParseStatement()) body.push_back(std::move(s));
    }
    cur_.ExpectPunct("}");
    return body;
  }

  Block ParseBranch() {
    Block b;
    if (cur_.IsPunct("{")) return ParseBlockBody();
    if (auto s = ParseStatement()) b.push_back(std::move(s));
    return b;
  }

  StmtPtr ParseStatement() {
    const Token& t = cur_.Peek();
    std::uint32_t begin = t.begin;
    if (t.kind == TokenKind::kPunct) {
      if (t.text == ";") {
        cur_.Next();
        return nullptr;
      }
      if (t.text == "{") {
        auto s = MakeStmt(StmtKind::kBlock, begin);
        s->blocks.push_back(ParseBlockBody());
        s->end = cur_.prev_end();
        return s;
      }
    }
    if (t.kind == TokenKind::kIdent) {
      const std::string& w = t.text;
      if (w == "var" || w == "let" || w == "const") {
        if (w != "let" || cur_.Peek(1).kind == TokenKind::kIdent ||
            cur_.IsPunct("{", 1) || cur_.IsPunct("[", 1)) {
          auto s = ParseDeclaration(false);
          ConsumeSemicolon();
          s->end = cur_.prev_end();
          return s;
        }
      }
      if (w == "function" || (w == "async" && cur_.IsWord("function", 1) &&
                              !cur_.Peek(1).newline_before)) {
        return ParseFunctionDeclaration();
      }
      if (w == "class") return ParseClass();
      if (w == "if") return ParseIf();
      if (w == "for") return ParseFor();
      if (w == "while") {
        cur_.Next();
        auto s = MakeStmt(StmtKind::kLoop, begin);
        cur_.ExpectPunct("(");
        s->values.push_back(ParseExpression());
        cur_.ExpectPunct(")");
        s->blocks.push_back(ParseBranch());
        s->end = cur_.prev_end();
        return s;
      }
      if (w == "do") {
        cur_.Next();
        auto s = MakeStmt(StmtKind::kLoop, begin);
        s->blocks.push_back(ParseBranch());
        cur_.ExpectWord("while");
        cur_.ExpectPunct("(");
        s->values.push_back(ParseExpression());
        cur_.ExpectPunct(")");
        cur_.AcceptPunct(";");
        s->end = cur_.prev_end();
        return s;
      }
      if (w == "switch") return ParseSwitch();
      if (w == "try") return ParseTry();
      if (w == "return") {
        cur_.Next();
        auto s = MakeStmt(StmtKind::kReturn, begin);
        if (!cur_.IsPunct(";") && !cur_.IsPunct("}") && !cur_.AtEnd() &&
            !cur_.Peek().newline_before) {
          s->values.push_back(ParseExpression());
        }
        ConsumeSemicolon();
        s->end = cur_.prev_end();
        return s;
      }
      if (w == "throw") {
        cur_.Next();
        auto s = MakeStmt(StmtKind::kExpr, begin);
        s->values.push_back(ParseExpression());
        ConsumeSemicolon();
        s->end = cur_.prev_end();
        return s;
      }
      if (w == "break" || w == "continue" || w == "debugger") {
        cur_.Next();
        if (cur_.Peek().kind == TokenKind::kIdent && !cur_.Peek().newline_before) {
          cur_.Next();
        }
        ConsumeSemicolon();
        auto s = MakeStmt(StmtKind::kOther, begin);
        s->end = cur_.prev_end();
        return s;
      }
      if (w == "import" && !cur_.IsPunct("(", 1) && !cur_.IsPunct(".", 1)) {
        return ParseImport();
      }
      if (w == "export") return ParseExport();
      if (cur_.IsPunct(":", 1) && w != "default") {
        cur_.Next();
        cur_.Next();
        return ParseStatement();
      }
    }
    return ParseExpressionStatement();
  }

  StmtPtr ParseExpressionStatement() {
    std::uint32_t begin = cur_.Peek().begin;
    auto e = ParseExpression();
    ConsumeSemicolon();
    return ExpressionToStatement(std::move(e), begin, cur_.prev_end());
  }

  static StmtPtr ExpressionToStatement(ExprPtr e, std::uint32_t begin,
                                       std::uint32_t end) {
    if (e->kind == ExprKind::kBinary && e->children.size() == 2 &&
        (e->text == "=" || (e->text.size() >= 2 && e->text.back() == '=' &&
                            e->text != "==" && e->text != "===" &&
                            e->text != "!=" && e->text != "!==" &&
                            e->text != "<=" && e->text != ">="))) {
      auto s = MakeStmt(StmtKind::kAssign, begin);
      s->op = e->text;
      s->targets.push_back(std::move(e->children[0]));
      s->values.push_back(std::move(e->children[1]));
      s->end = end;
      return s;
    }
    auto s = MakeStmt(StmtKind::kExpr, begin);
    s->values.push_back(std::move(e));
    s->end = end;
    return s;
  }

  StmtPtr ParseDeclaration(bool no_in) {
    std::uint32_t begin = cur_.Peek().begin;
    cur_.Next();  // var/let/const
    auto s = MakeStmt(StmtKind::kAssign, begin);
    s->op = "decl";
    do {
      auto target = ParseBindingTarget();
      ExprPtr value;
      if (cur_.AcceptPunct("=")) {
        value = ParseAssignment(no_in);
      } else {
        value = MakeExpr(ExprKind::kKeyword, target->end, target->end, "undefined");
      }
      s->targets.push_back(std::move(target));
      s->values.push_back(std::move(value));
    } while (cur_.AcceptPunct(","));
    s->end = cur_.prev_end();
    return s;
  }

  ExprPtr ParseBindingTarget() {
    if (cur_.IsPunct("{")) return ParseObjectLiteral();
    if (cur_.IsPunct("[")) return ParseArrayLiteral();
    const Token& t = cur_.Next();
    if (t.kind != TokenKind::kIdent) cur_.Fail("expected binding name");
    return MakeExpr(ExprKind::kName, t.begin, t.end, t.text);
  }

  std::shared_ptr<Function> ParseFunctionRest(std::string name, std::uint32_t begin) {
    auto fn = std::make_shared<Function>();
    fn->name = std::move(name);
    fn->begin = begin;
    fn->params = ParseParams();
    fn->body = ParseBlockBody();
    fn->end = cur_.prev_end();
    return fn;
  }

  std::vector<std::string> ParseParams() {
    std::vector<std::string> names;
    cur_.ExpectPunct("(");
    while (!cur_.IsPunct(")")) {
      if (cur_.AcceptPunct("...")) {
        auto p = ParseBindingTarget();
        CollectPatternNames(*p, names);
      } else {
        auto p = ParseBindingTarget();
        if (cur_.AcceptPunct("=")) ParseAssignment(false);
        CollectPatternNames(*p, names);
      }
      if (!cur_.AcceptPunct(",")) break;
    }
    cur_.ExpectPunct(")");
    return names;
  }

  StmtPtr ParseFunctionDeclaration() {
    std::uint32_t begin = cur_.Peek().begin;
    cur_.AcceptWord("async");
    cur_.ExpectWord("function");
    cur_.AcceptPunct("*");
    std::string name = cur_.ExpectIdent();
    auto s = MakeStmt(StmtKind::kFunction, begin);
    s->function = ParseFunctionRest(name, begin);
    s->end = cur_.prev_end();
    return s;
  }

  StmtPtr ParseClass() {
    std::uint32_t begin = cur_.Peek().begin;
    cur_.ExpectWord("class");
    auto s = MakeStmt(StmtKind::kClass, begin);
    if (cur_.Peek().kind == TokenKind::kIdent && !cur_.IsWord("extends")) {
      s->name = cur_.Next().text;
    }
    s->blocks.push_back(ParseClassBody());
    s->end = cur_.prev_end();
    return s;
  }

  Block ParseClassBody() {
    if (cur_.AcceptWord("extends")) ParseUnaryOrHigher();
    cur_.ExpectPunct("{");
    Block members;
    while (!cur_.AcceptPunct("}")) {
      if (cur_.AtEnd()) cur_.Fail("expected '}'");
      if (cur_.AcceptPunct(";")) continue;
      std::uint32_t begin = cur_.Peek().begin;
      // Modifiers.
      while ((cur_.IsWord("static") || cur_.IsWord("async") || cur_.IsWord("get") ||
              cur_.IsWord("set")) &&
             !cur_.IsPunct("(", 1) && !cur_.IsPunct("=", 1) && !cur_.IsPunct(";", 1)) {
        cur_.Next();
      }
      cur_.AcceptPunct("*");
      std::string name = ParsePropertyName();
      if (cur_.IsPunct("(")) {
        auto s = MakeStmt(StmtKind::kFunction, begin);
        s->function = ParseFunctionRest(name, begin);
        s->end = cur_.prev_end();
        members.push_back(std::move(s));
      } else {
        if (cur_.AcceptPunct("=")) ParseAssignment(false);
        ConsumeSemicolon();
      }
    }
    return members;
  }

  std::string ParsePropertyName() {
    const Token& t = cur_.Peek();
    if (t.kind == TokenKind::kIdent || t.kind == TokenKind::kNumber) {
      cur_.Next();
      return t.text;
    }
    if (t.kind == TokenKind::kString) {
      cur_.Next();
      return t.value;
    }
    if (cur_.AcceptPunct("#")) return "#" + cur_.ExpectIdent();
    if (cur_.AcceptPunct("[")) {
      ParseAssignment(false);
      cur_.ExpectPunct("]");
      return "";
    }
    cur_.Fail("expected property name");
  }

  StmtPtr ParseIf() {
    std::uint32_t begin = cur_.Peek().begin;
    cur_.ExpectWord("if");
    auto s = MakeStmt(StmtKind::kIf, begin);
    cur_.ExpectPunct("(");
    s->values.push_back(ParseExpression());
    cur_.ExpectPunct(")");
    s->blocks.push_back(ParseBranch());
    if (cur_.AcceptWord("else")) {
      s->blocks.push_back(ParseBranch());
      s->exhaustive = true;
    }
    s->end = cur_.prev_end();
    return s;
  }

  StmtPtr ParseFor() {
    std::uint32_t begin = cur_.Peek().begin;
    cur_.ExpectWord("for");
    cur_.AcceptWord("await");
    cur_.ExpectPunct("(");
    auto s = MakeStmt(StmtKind::kLoop, begin);
    StmtPtr init;
    if (cur_.IsPunct(";")) {
      // empty init
    } else if (cur_.IsWord("var") || cur_.IsWord("let") || cur_.IsWord("const")) {
      init = ParseDeclaration(true);
    } else {
      std::uint32_t b = cur_.Peek().begin;
      init = ExpressionToStatement(ParseExpression(true), b, cur_.prev_end());
    }
    if (cur_.AcceptWord("of") || cur_.AcceptWord("in")) {
      auto iterable = ParseAssignment(false);
      if (init) {
        if (init->kind == StmtKind::kAssign) {
          for (auto& t : init->targets) s->targets.push_back(std::move(t));
        } else {
          for (auto& v : init->values) s->targets.push_back(std::move(v));
        }
      }
      s->values.push_back(std::move(iterable));
    } else {
      cur_.ExpectPunct(";");
      if (!cur_.IsPunct(";")) s->values.push_back(ParseExpression());
      cur_.ExpectPunct(";");
      if (!cur_.IsPunct(")")) s->values.push_back(ParseExpression());
    }
    cur_.ExpectPunct(")");
    s->blocks.push_back(ParseBranch());
    s->end = cur_.prev_end();
    if (init && init->kind == StmtKind::kAssign && s->targets.empty()) {
      // Classic for loop: the initializer runs before the loop.
      auto block = MakeStmt(StmtKind::kBlock, begin);
      block->end = s->end;
      Block inner;
      inner.push_back(std::move(init));
      inner.push_back(std::move(s));
      block->blocks.push_back(std::move(inner));
      return block;
    }
    return s;
  }

  StmtPtr ParseSwitch() {
    std::uint32_t begin = cur_.Peek().begin;
    cur_.ExpectWord("switch");
    auto s = MakeStmt(StmtKind::kIf, begin);
    cur_.ExpectPunct("(");
    s->values.push_back(ParseExpression());
    cur_.ExpectPunct(")");
    cur_.ExpectPunct("{");
    while (!cur_.AcceptPunct("}")) {
      if (cur_.AcceptWord("case")) {
        s->values.push_back(ParseExpression());
      } else if (cur_.AcceptWord("default")) {
        s->exhaustive = true;
      } else {
        cur_.Fail("expected 'case' or 'default'");
      }
      cur_.ExpectPunct(":");
      Block body;
      while (!cur_.IsWord("case") && !cur_.IsWord("default") && !cur_.IsPunct("}")) {
        if (cur_.AtEnd()) cur_.Fail("expected '}'");
        if (auto st = ParseStatement()) body.push_back(std::move(st));
      }
      s->blocks.push_back(std::move(body));
    }
    s->end = cur_.prev_end();
    return s;
  }

  StmtPtr ParseTry() {
    std::uint32_t begin = cur_.Peek().begin;
    cur_.ExpectWord("try");
    auto s = MakeStmt(StmtKind::kTry, begin);
    s->blocks.push_back(ParseBlockBody());
    if (cur_.AcceptWord("catch")) {
      if (cur_.AcceptPunct("(")) {
        ParseBindingTarget();
        cur_.ExpectPunct(")");
      }
      s->blocks.push_back(ParseBlockBody());
    }
    if (cur_.AcceptWord("finally")) {
      s->blocks.push_back(ParseBlockBody());
      s->has_finally = true;
    }
    if (s->blocks.size() == 1) cur_.Fail("expected 'catch' or 'finally'");
    s->end = cur_.prev_end();
    return s;
  }

  StmtPtr ParseImport() {
    std::uint32_t begin = cur_.Peek().begin;
    cur_.ExpectWord("import");
    auto s = MakeStmt(StmtKind::kImport, begin);
    if (cur_.Peek().kind == TokenKind::kString) {
      s->import.module = cur_.Next().value;
      ConsumeSemicolon();
      s->end = cur_.prev_end();
      return s;
    }
    std::vector<ImportBinding> bindings;
    if (cur_.Peek().kind == TokenKind::kIdent && !cur_.IsWord("from")) {
      bindings.push_back({cur_.Next().text, ""});
      cur_.AcceptPunct(",");
    }
    if (cur_.AcceptPunct("*")) {
      cur_.ExpectWord("as");
      bindings.push_back({cur_.ExpectIdent(), ""});
    } else if (cur_.AcceptPunct("{")) {
      while (!cur_.AcceptPunct("}")) {
        const Token& name = cur_.Next();
        std::string imported = name.kind == TokenKind::kString ? name.value : name.text;
        std::string local = imported;
        if (cur_.AcceptWord("as")) local = cur_.ExpectIdent();
        bindings.push_back({local, imported == "default" ? "" : imported});
        if (!cur_.AcceptPunct(",")) {
          cur_.ExpectPunct("}");
          break;
        }
      }
    }
    cur_.ExpectWord("from");
    if (cur_.Peek().kind != TokenKind::kString) cur_.Fail("expected module string");
    s->import.module = cur_.Next().value;
    s->import.bindings = std::move(bindings);
    ConsumeSemicolon();
    s->end = cur_.prev_end();
    return s;
  }

  StmtPtr ParseExport() {
    std::uint32_t begin = cur_.Peek().begin;
    cur_.ExpectWord("export");
    if (cur_.AcceptWord("default")) {
      if (cur_.IsWord("function") || cur_.IsWord("async") || cur_.IsWord("class")) {
        if (cur_.IsWord("class")) return ParseClass();
        // Anonymous default functions are expressions.
        if (cur_.Peek(cur_.IsWord("async") ? 2 : 1).kind == TokenKind::kIdent ||
            cur_.IsPunct("*", 1)) {
          return ParseFunctionDeclaration();
        }
      }
      auto s = MakeStmt(StmtKind::kExpr, begin);
      s->values.push_back(ParseAssignment(false));
      ConsumeSemicolon();
      s->end = cur_.prev_end();
      return s;
    }
    if (cur_.AcceptPunct("*") || cur_.IsPunct("{")) {
      if (cur_.AcceptPunct("{")) {
        while (!cur_.AcceptPunct("}")) cur_.Next();
      } else if (cur_.AcceptWord("as")) {
        cur_.ExpectIdent();
      }
      if (cur_.AcceptWord("from")) cur_.Next();
      ConsumeSemicolon();
      auto s = MakeStmt(StmtKind::kOther, begin);
      s->end = cur_.prev_end();
      return s;
    }
    return ParseStatement();
  }

  // ---- expressions -------------------------------------------------------

  ExprPtr ParseExpression(bool no_in = false) {
    // A comma sequence evaluates to its last element.
    auto e = ParseAssignment(no_in);
    while (cur_.AcceptPunct(",")) e = ParseAssignment(no_in);
    return e;
  }

  bool ArrowAhead() const {
    std::size_t i = cur_.index();
    if (cur_.IsWord("async") && !cur_.At(i + 1).newline_before) {
      if (cur_.At(i + 1).kind == TokenKind::kIdent && cur_.IsPunct("=>", 2)) return true;
      if (cur_.IsPunct("(", 1)) {
        std::size_t close = cur_.MatchingClose(i + 1);
        const Token& after = cur_.At(close + 1);
        return after.kind == TokenKind::kPunct && after.text == "=>";
      }
      return false;
    }
    if (cur_.Peek().kind == TokenKind::kIdent && cur_.IsPunct("=>", 1)) return true;
    if (cur_.IsPunct("(")) {
      std::size_t close = cur_.MatchingClose(i);
      const Token& after = cur_.At(close + 1);
      return after.kind == TokenKind::kPunct && after.text == "=>";
    }
    return false;
  }

  ExprPtr ParseArrow() {
    std::uint32_t begin = cur_.Peek().begin;
    cur_.AcceptWord("async");
    auto fn = std::make_shared<Function>();
    fn->begin = begin;
    if (cur_.IsPunct("(")) {
      fn->params = ParseParams();
    } else {
      fn->params.push_back(cur_.ExpectIdent());
    }
    cur_.ExpectPunct("=>");
    if (cur_.IsPunct("{")) {
      fn->body = ParseBlockBody();
    } else {
      std::uint32_t b = cur_.Peek().begin;
      auto value = ParseAssignment(false);
      auto ret = MakeStmt(StmtKind::kReturn, b);
      ret->end = value->end;
      ret->values.push_back(std::move(value));
      fn->body.push_back(std::move(ret));
    }
    fn->end = cur_.prev_end();
    auto e = MakeExpr(ExprKind::kFunction, begin, fn->end);
    e->function = std::move(fn);
    return e;
  }

  ExprPtr ParseAssignment(bool no_in) {
    if (ArrowAhead()) return ParseArrow();
    if (cur_.IsWord("yield")) {
      std::uint32_t begin = cur_.Next().begin;
      auto e = MakeExpr(ExprKind::kUnary, begin, begin, "yield");
      if (!cur_.IsPunct(")") && !cur_.IsPunct("]") && !cur_.IsPunct("}") &&
          !cur_.IsPunct(",") && !cur_.IsPunct(";") && !cur_.Peek().newline_before) {
        cur_.AcceptPunct("*");
        e->children.push_back(ParseAssignment(no_in));
      }
      e->end = cur_.prev_end();
      return e;
    }
    auto lhs = ParseConditional(no_in);
    if (IsAssignOp(cur_.Peek())) {
      std::string op = cur_.Next().text;
      auto rhs = ParseAssignment(no_in);
      auto e = MakeExpr(ExprKind::kBinary, lhs->begin, rhs->end, op);
      e->children.push_back(std::move(lhs));
      e->children.push_back(std::move(rhs));
      return e;
    }
    return lhs;
  }

  ExprPtr ParseConditional(bool no_in) {
    auto cond = ParseBinary(0, no_in);
    if (!cur_.AcceptPunct("?")) return cond;
    auto then = ParseAssignment(false);
    cur_.ExpectPunct(":");
    auto otherwise = ParseAssignment(no_in);
    auto e = MakeExpr(ExprKind::kConditional, cond->begin, otherwise->end);
    e->children.push_back(std::move(cond));
    e->children.push_back(std::move(then));
    e->children.push_back(std::move(otherwise));
    return e;
  }

  int PeekBinaryPrecedence(bool no_in) const {
    const Token& t = cur_.Peek();
    if (t.kind != TokenKind::kPunct && t.kind != TokenKind::kIdent) return -1;
    if (t.kind == TokenKind::kIdent && t.text != "instanceof" && t.text != "in") return -1;
    if (no_in && t.text == "in") return -1;
    auto it = BinaryPrecedence().find(t.text);
    return it == BinaryPrecedence().end() ? -1 : it->second;
  }

  ExprPtr ParseBinary(int min_prec, bool no_in) {
    auto lhs = ParseUnaryOrHigher();
    while (true) {
      int prec = PeekBinaryPrecedence(no_in);
      if (prec < 0 || prec < min_prec) return lhs;
      std::string op = cur_.Next().text;
      int next_min = op == "**" ? prec : prec + 1;
      auto rhs = ParseBinary(next_min, no_in);
      auto e = MakeExpr(ExprKind::kBinary, lhs->begin, rhs->end, op);
      e->children.push_back(std::move(lhs));
      e->children.push_back(std::move(rhs));
      lhs = std::move(e);
    }
  }

  ExprPtr ParseUnaryOrHigher() {
    const Token& t = cur_.Peek();
    bool unary_punct = t.kind == TokenKind::kPunct &&
                       (t.text == "!" || t.text == "~" || t.text == "+" ||
                        t.text == "-" || t.text == "++" || t.text == "--");
    bool unary_word = t.kind == TokenKind::kIdent &&
                      (t.text == "typeof" || t.text == "void" || t.text == "delete" ||
                       t.text == "await");
    if (unary_punct || unary_word) {
      std::uint32_t begin = t.begin;
      std::string op = cur_.Next().text;
      auto operand = ParseUnaryOrHigher();
      if (op == "await") return operand;
      auto e = MakeExpr(ExprKind::kUnary, begin, operand->end, op);
      e->children.push_back(std::move(operand));
      return e;
    }
    auto e = ParsePostfix();
    if ((cur_.IsPunct("++") || cur_.IsPunct("--")) && !cur_.Peek().newline_before) {
      std::string op = cur_.Next().text;
      auto u = MakeExpr(ExprKind::kUnary, e->begin, cur_.prev_end(), op);
      u->children.push_back(std::move(e));
      return u;
    }
    return e;
  }

  void ParseArguments(Expr& call) {
    cur_.ExpectPunct("(");
    while (!cur_.IsPunct(")")) {
      if (cur_.IsPunct("...")) {
        std::uint32_t b = cur_.Next().begin;
        auto inner = ParseAssignment(false);
        auto spread = MakeExpr(ExprKind::kSpread, b, inner->end);
        spread->children.push_back(std::move(inner));
        call.children.push_back(std::move(spread));
      } else {
        call.children.push_back(ParseAssignment(false));
      }
      call.keys.emplace_back();
      if (!cur_.AcceptPunct(",")) break;
    }
    cur_.ExpectPunct(")");
    call.end = cur_.prev_end();
  }

  ExprPtr ParseNew() {
    std::uint32_t begin = cur_.Next().begin;  // new
    if (cur_.AcceptPunct(".")) {
      cur_.ExpectIdent();
      return MakeExpr(ExprKind::kOther, begin, cur_.prev_end());
    }
    ExprPtr callee = cur_.IsWord("new") ? ParseNew() : ParsePrimary();
    while (true) {
      if (cur_.AcceptPunct(".")) {
        const Token& name = cur_.Next();
        auto m = MakeExpr(ExprKind::kMember, callee->begin, name.end, name.text);
        m->name_offset = name.begin;
        m->children.push_back(std::move(callee));
        callee = std::move(m);
      } else if (cur_.IsPunct("[")) {
        cur_.Next();
        auto idx = ParseExpression();
        cur_.ExpectPunct("]");
        auto m = MakeExpr(ExprKind::kIndex, callee->begin, cur_.prev_end());
        m->children.push_back(std::move(callee));
        m->children.push_back(std::move(idx));
        callee = std::move(m);
      } else {
        break;
      }
    }
    auto e = MakeExpr(ExprKind::kNew, begin, callee->end);
    e->children.push_back(std::move(callee));
    if (cur_.IsPunct("(")) ParseArguments(*e);
    return e;
  }

  ExprPtr ParsePostfix() {
    ExprPtr e = cur_.IsWord("new") ? ParseNew() : ParsePrimary();
    while (true) {
      if (cur_.IsPunct(".") || cur_.IsPunct("?.")) {
        bool optional = cur_.Next().text == "?.";
        if (optional && cur_.IsPunct("(")) {
          auto call = MakeExpr(ExprKind::kCall, e->begin, e->end);
          call->children.push_back(std::move(e));
          ParseArguments(*call);
          e = std::move(call);
          continue;
        }
        if (optional && cur_.IsPunct("[")) continue;
        bool priv = cur_.AcceptPunct("#");
        const Token& name = cur_.Next();
        if (name.kind != TokenKind::kIdent) cur_.Fail("expected property name");
        auto m = MakeExpr(ExprKind::kMember, e->begin, name.end,
                          priv ? "#" + name.text : name.text);
        m->name_offset = name.begin;
        m->children.push_back(std::move(e));
        e = std::move(m);
      } else if (cur_.IsPunct("[")) {
        cur_.Next();
        auto idx = ParseExpression();
        cur_.ExpectPunct("]");
        auto m = MakeExpr(ExprKind::kIndex, e->begin, cur_.prev_end());
        m->children.push_back(std::move(e));
        m->children.push_back(std::move(idx));
        e = std::move(m);
      } else if (cur_.IsPunct("(")) {
        auto call = MakeExpr(ExprKind::kCall, e->begin, e->end);
        call->children.push_back(std::move(e));
        ParseArguments(*call);
        e = std::move(call);
      } else if (cur_.Peek().kind == TokenKind::kTemplate) {
        // Tagged template.
        ParsePrimary();
        e = MakeExpr(ExprKind::kOther, e->begin, cur_.prev_end());
      } else {
        return e;
      }
    }
  }

  ExprPtr ParseTemplate(const Token& t) {
    auto e = MakeExpr(ExprKind::kTemplate, t.begin, t.end);
    for (const auto& piece : t.pieces) {
      if (piece.is_expr) {
        JsParser sub(LexJavaScript(cur_.unit().text, piece.begin, piece.end,
                                   cur_.unit().line_index),
                     cur_.unit());
        e->children.push_back(sub.ParseStandaloneExpression());
      } else {
        e->children.push_back(
            MakeExpr(ExprKind::kString, piece.begin, piece.end, piece.text));
      }
    }
    return e;
  }

  ExprPtr ParsePrimary() {
    const Token& t = cur_.Peek();
    switch (t.kind) {
      case TokenKind::kNumber: {
        cur_.Next();
        return MakeExpr(ExprKind::kNumber, t.begin, t.end, t.text);
      }
      case TokenKind::kString: {
        cur_.Next();
        return MakeExpr(ExprKind::kString, t.begin, t.end, t.value);
      }
      case TokenKind::kTemplate: {
        const Token& tok = cur_.Next();
        return ParseTemplate(tok);
      }
      case TokenKind::kRegex: {
        cur_.Next();
        return MakeExpr(ExprKind::kOther, t.begin, t.end, t.text);
      }
      case TokenKind::kIdent: {
        const std::string& w = t.text;
        if (w == "function" || (w == "async" && cur_.IsWord("function", 1))) {
          std::uint32_t begin = t.begin;
          cur_.AcceptWord("async");
          cur_.Next();
          cur_.AcceptPunct("*");
          std::string name;
          if (cur_.Peek().kind == TokenKind::kIdent) name = cur_.Next().text;
          auto fn = ParseFunctionRest(name, begin);
          auto e = MakeExpr(ExprKind::kFunction, begin, fn->end);
          e->function = std::move(fn);
          return e;
        }
        if (w == "class") {
          std::uint32_t begin = cur_.Next().begin;
          if (cur_.Peek().kind == TokenKind::kIdent && !cur_.IsWord("extends")) cur_.Next();
          ParseClassBody();
          return MakeExpr(ExprKind::kOther, begin, cur_.prev_end());
        }
        if (w == "true" || w == "false" || w == "null" || w == "undefined" ||
            w == "this" || w == "super") {
          cur_.Next();
          return MakeExpr(ExprKind::kKeyword, t.begin, t.end, w);
        }
        static const std::array<std::string_view, 12> reserved = {
            "if", "else", "for", "while", "return", "var", "let", "const",
            "switch", "case", "try", "catch"};
        if (std::find(reserved.begin(), reserved.end(), w) != reserved.end()) {
          cur_.Fail("unexpected keyword");
        }
        if (w == "import" && cur_.IsPunct("(", 1)) {
          // Dynamic import stays opaque.
          cur_.Next();
          auto call = MakeExpr(ExprKind::kOther, t.begin, t.end, "import");
          auto holder = MakeExpr(ExprKind::kCall, t.begin, t.end);
          holder->children.push_back(std::move(call));
          ParseArguments(*holder);
          return MakeExpr(ExprKind::kOther, t.begin, holder->end);
        }
        cur_.Next();
        return MakeExpr(ExprKind::kName, t.begin, t.end, w);
      }
      case TokenKind::kPunct: {
        if (t.text == "(") {
          cur_.Next();
          auto inner = ParseExpression();
          cur_.ExpectPunct(")");
          return inner;
        }
        if (t.text == "[") return ParseArrayLiteral();
        if (t.text == "{") return ParseObjectLiteral();
        break;
      }
      default:
        break;
    }
    cur_.Fail("expected expression");
  }

  ExprPtr ParseArrayLiteral() {
    std::uint32_t begin = cur_.Peek().begin;
    cur_.ExpectPunct("[");
    auto e = MakeExpr(ExprKind::kArray, begin, begin);
    while (!cur_.IsPunct("]")) {
      if (cur_.IsPunct(",")) {
        cur_.Next();
        e->children.push_back(MakeExpr(ExprKind::kKeyword, cur_.prev_end(),
                                       cur_.prev_end(), "undefined"));
        continue;
      }
      if (cur_.IsPunct("...")) {
        std::uint32_t b = cur_.Next().begin;
        auto inner = ParseAssignment(false);
        auto spread = MakeExpr(ExprKind::kSpread, b, inner->end);
        spread->children.push_back(std::move(inner));
        e->children.push_back(std::move(spread));
      } else {
        e->children.push_back(ParseAssignment(false));
      }
      if (!cur_.AcceptPunct(",")) break;
    }
    cur_.ExpectPunct("]");
    e->end = cur_.prev_end();
    return e;
  }

  ExprPtr ParseObjectLiteral() {
    std::uint32_t begin = cur_.Peek().begin;
    cur_.ExpectPunct("{");
    auto e = MakeExpr(ExprKind::kObject, begin, begin);
    while (!cur_.IsPunct("}")) {
      if (cur_.IsPunct("...")) {
        std::uint32_t b = cur_.Next().begin;
        auto inner = ParseAssignment(false);
        auto spread = MakeExpr(ExprKind::kSpread, b, inner->end);
        spread->children.push_back(std::move(inner));
        e->keys.emplace_back("...");
        e->children.push_back(std::move(spread));
      } else {
        std::uint32_t entry_begin = cur_.Peek().begin;
        bool accessor = (cur_.IsWord("get") || cur_.IsWord("set") || cur_.IsWord("async")) &&
                        !cur_.IsPunct(",", 1) && !cur_.IsPunct(":", 1) &&
                        !cur_.IsPunct("(", 1) && !cur_.IsPunct("}", 1) &&
                        !cur_.IsPunct("=", 1);
        if (accessor) cur_.Next();
        bool generator = cur_.AcceptPunct("*");
        const Token& key_tok = cur_.Peek();
        bool shorthand_ok = key_tok.kind == TokenKind::kIdent;
        std::string key = ParsePropertyName();
        if (cur_.IsPunct("(")) {
          auto fn = ParseFunctionRest(key, entry_begin);
          auto f = MakeExpr(ExprKind::kFunction, entry_begin, fn->end);
          f->function = std::move(fn);
          e->keys.push_back(key);
          e->children.push_back(std::move(f));
        } else if (!accessor && !generator && cur_.AcceptPunct(":")) {
          e->keys.push_back(key);
          e->children.push_back(ParseAssignment(false));
        } else if (shorthand_ok && !accessor && !generator) {
          auto name = MakeExpr(ExprKind::kName, key_tok.begin, key_tok.end, key);
          if (cur_.AcceptPunct("=")) {
            auto def = ParseAssignment(false);
            auto b = MakeExpr(ExprKind::kBinary, name->begin, def->end, "=");
            b->children.push_back(std::move(name));
            b->children.push_back(std::move(def));
            name = std::move(b);
          }
          e->keys.push_back(key);
          e->children.push_back(std::move(name));
        } else {
          cur_.Fail("malformed object literal entry");
        }
      }
      if (!cur_.AcceptPunct(",")) break;
    }
    cur_.ExpectPunct("}");
    e->end = cur_.prev_end();
    return e;
  }

  TokenCursor cur_;
};

}  // namespace

Module ParseJavaScript(const SourceUnit& unit) {
  auto tokens = LexJavaScript(unit.text, 0, static_cast<std::uint32_t>(unit.text.size()),
                              unit.line_index);
  JsParser parser(std::move(tokens), unit);
  Module m;
  m.language = Language::kJavaScript;
  m.body = parser.ParseProgram();
  return m;
}

}  // namespace privscope::syntax

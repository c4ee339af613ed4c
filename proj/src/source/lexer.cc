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

#include "lexer.h"

#include <algorithm>
#include <array>
#include <cctype>

namespace privscope::syntax {

void ThrowParseError(const LineIndex& lines, std::uint32_t offset,
                     const std::string& message) {
  throw Error(ErrorCode::kParseError, message, lines.Locate(offset));
}

namespace {

bool IsIdentStart(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || c == '$' || u >= 0x80;
}

bool IsIdentChar(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '$' || u >= 0x80;
}

// Base scanner with helpers shared by the three languages.
class Scanner {
 public:
  Scanner(std::string_view text, std::uint32_t begin, std::uint32_t end,
          const LineIndex& lines)
      : text_(text), pos_(begin), end_(end), lines_(lines) {}

 protected:
  char Peek(std::uint32_t ahead = 0) const {
    return pos_ + ahead < end_ ? text_[pos_ + ahead] : '\0';
  }
  bool AtEnd() const { return pos_ >= end_; }
  bool StartsWith(std::string_view s) const {
    return pos_ + s.size() <= end_ && text_.substr(pos_, s.size()) == s;
  }
  [[noreturn]] void Fail(const std::string& message) const {
    ThrowParseError(lines_, std::min(pos_, end_), message);
  }

  std::string LexNumber() {
    std::uint32_t start = pos_;
    if (Peek() == '0' && (Peek(1) == 'x' || Peek(1) == 'X' || Peek(1) == 'o' ||
                          Peek(1) == 'O' || Peek(1) == 'b' || Peek(1) == 'B')) {
      pos_ += 2;
      while (std::isxdigit(static_cast<unsigned char>(Peek())) || Peek() == '_') {
        ++pos_;
      }
    } else {
      while (std::isdigit(static_cast<unsigned char>(Peek())) || Peek() == '_') ++pos_;
      if (Peek() == '.' && std::isdigit(static_cast<unsigned char>(Peek(1)))) {
        ++pos_;
        while (std::isdigit(static_cast<unsigned char>(Peek())) || Peek() == '_') ++pos_;
      } else if (Peek() == '.' && !IsIdentStart(Peek(1)) && Peek(1) != '.') {
        ++pos_;
      }
      if (Peek() == 'e' || Peek() == 'E') {
        std::uint32_t save = pos_;
        ++pos_;
        if (Peek() == '+' || Peek() == '-') ++pos_;
        if (!std::isdigit(static_cast<unsigned char>(Peek()))) {
          pos_ = save;
        } else {
          while (std::isdigit(static_cast<unsigned char>(Peek()))) ++pos_;
        }
      }
    }
    while (Peek() == 'n' || Peek() == 'j' || Peek() == 'J' || Peek() == 'i' ||
           Peek() == 'l' || Peek() == 'L') {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  // Consumes an escape sequence after the backslash and appends its value.
  void Escape(std::string& out) {
    char c = Peek();
    ++pos_;
    switch (c) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case '0': out += '\0'; break;
      case 'b': out += '\b'; break;
      case 'f': out += '\f'; break;
      case 'v': out += '\v'; break;
      case '\n': break;
      case 'x': {
        std::string hex(text_.substr(pos_, 2));
        pos_ += 2;
        out += static_cast<char>(std::stoi(hex, nullptr, 16));
        break;
      }
      case 'u': {
        // Non-ASCII code points are kept escaped; resource names are ASCII.
        std::uint32_t start = pos_ - 2;
        if (Peek() == '{') {
          while (!AtEnd() && Peek() != '}') ++pos_;
          ++pos_;
        } else {
          pos_ += 4;
        }
        std::string_view raw = text_.substr(start, pos_ - start);
        if (raw.size() == 6 && raw.substr(2, 2) == "00") {
          out += static_cast<char>(std::stoi(std::string(raw.substr(4)), nullptr, 16));
        } else {
          out += raw;
        }
        break;
      }
      default:
        out += c;
    }
  }

  std::string_view text_;
  std::uint32_t pos_;
  std::uint32_t end_;
  const LineIndex& lines_;
};

std::string_view MatchPunct(std::string_view rest,
                            const std::vector<std::string_view>& table) {
  for (auto p : table) {
    if (rest.substr(0, p.size()) == p) return p;
  }
  return {};
}

// ---------------------------------------------------------------------------
// JavaScript

const std::vector<std::string_view>& JsPuncts() {
  static const std::vector<std::string_view> table = [] {
    std::vector<std::string_view> v = {
        ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=",
        "?\?=",  "=>",  "==",  "!=",  "<=",  ">=",  "&&",  "||",  "??",  "?.",
        "++",   "--",  "+=",  "-=",  "*=",  "/=",  "%=",  "&=",  "|=",  "^=",
        "**",   "<<",  ">>",  "{",   "}",   "(",   ")",   "[",   "]",   ";",
        ",",    "<",   ">",   "+",   "-",   "*",   "/",   "%",   "&",   "|",
        "^",    "!",   "~",   "?",   ":",   "=",   ".",   "@",   "#"};
    return v;
  }();
  return table;
}

class JsLexer : public Scanner {
 public:
  using Scanner::Scanner;

  std::vector<Token> Run() {
    std::vector<Token> out;
    bool newline = false;
    while (true) {
      newline = SkipTrivia() || newline;
      Token tok;
      tok.begin = pos_;
      tok.newline_before = newline;
      newline = false;
      if (AtEnd()) {
        tok.kind = TokenKind::kEof;
        tok.end = pos_;
        out.push_back(std::move(tok));
        return out;
      }
      char c = Peek();
      if (IsIdentStart(c) || c == '\\') {
        while (IsIdentChar(Peek())) ++pos_;
        tok.kind = TokenKind::kIdent;
        tok.text = std::string(text_.substr(tok.begin, pos_ - tok.begin));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(Peek(1))))) {
        tok.kind = TokenKind::kNumber;
        tok.text = LexNumber();
      } else if (c == '"' || c == '\'') {
        tok.kind = TokenKind::kString;
        tok.value = LexQuoted(c);
      } else if (c == '`') {
        tok.kind = TokenKind::kTemplate;
        tok.pieces = LexTemplate();
      } else if (c == '/' && RegexAllowed(out)) {
        tok.kind = TokenKind::kRegex;
        LexRegex();
      } else {
        auto p = MatchPunct(text_.substr(pos_, end_ - pos_), JsPuncts());
        if (p.empty()) Fail(std::string("unexpected character '") + c + "'");
        pos_ += static_cast<std::uint32_t>(p.size());
        tok.kind = TokenKind::kPunct;
        tok.text = std::string(p);
      }
      tok.end = pos_;
      if (tok.text.empty() && tok.kind != TokenKind::kPunct) {
        tok.text = std::string(text_.substr(tok.begin, tok.end - tok.begin));
      }
      out.push_back(std::move(tok));
    }
  }

 private:
  // Returns true when a newline was crossed.
  bool SkipTrivia() {
    bool newline = false;
    while (!AtEnd()) {
      char c = Peek();
      if (c == '\n') {
        newline = true;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (StartsWith("//") || (pos_ == 0 && StartsWith("#!"))) {
        while (!AtEnd() && Peek() != '\n') ++pos_;
      } else if (StartsWith("/*")) {
        std::uint32_t close = static_cast<std::uint32_t>(text_.find("*/", pos_ + 2));
        if (close == std::string_view::npos || close >= end_) Fail("unterminated comment");
        for (std::uint32_t i = pos_; i < close; ++i) newline = newline || text_[i] == '\n';
        pos_ = close + 2;
      } else {
        break;
      }
    }
    return newline;
  }

  static bool RegexAllowed(const std::vector<Token>& out) {
    if (out.empty()) return true;
    const Token& prev = out.back();
    switch (prev.kind) {
      case TokenKind::kNumber:
      case TokenKind::kString:
      case TokenKind::kTemplate:
      case TokenKind::kRegex:
        return false;
      case TokenKind::kIdent: {
        static const std::array<std::string_view, 9> kw = {
            "return", "typeof", "instanceof", "in", "of", "new", "delete", "void", "throw"};
        return std::find(kw.begin(), kw.end(), prev.text) != kw.end();
      }
      case TokenKind::kPunct:
        return prev.text != ")" && prev.text != "]" && prev.text != "}" &&
               prev.text != "++" && prev.text != "--";
      default:
        return true;
    }
  }

  std::string LexQuoted(char quote) {
    ++pos_;
    std::string out;
    while (true) {
      if (AtEnd() || Peek() == '\n') Fail("unterminated string literal");
      char c = Peek();
      if (c == quote) {
        ++pos_;
        return out;
      }
      if (c == '\\') {
        ++pos_;
        Escape(out);
      } else {
        out += c;
        ++pos_;
      }
    }
  }

  // Skips a balanced ${ ... } body; pos_ is just after "${".
  void SkipInterpolation() {
    int depth = 1;
    while (true) {
      if (AtEnd()) Fail("unterminated template expression");
      char c = Peek();
      if (c == '{') {
        ++depth;
        ++pos_;
      } else if (c == '}') {
        if (--depth == 0) return;
        ++pos_;
      } else if (c == '"' || c == '\'') {
        LexQuoted(c);
      } else if (c == '`') {
        LexTemplate();
      } else if (StartsWith("//")) {
        while (!AtEnd() && Peek() != '\n') ++pos_;
      } else if (StartsWith("/*")) {
        auto close = text_.find("*/", pos_ + 2);
        if (close == std::string_view::npos) Fail("unterminated comment");
        pos_ = static_cast<std::uint32_t>(close + 2);
      } else {
        ++pos_;
      }
    }
  }

  std::vector<TemplatePiece> LexTemplate() {
    ++pos_;
    std::vector<TemplatePiece> pieces;
    TemplatePiece lit;
    lit.begin = pos_;
    while (true) {
      if (AtEnd()) Fail("unterminated template literal");
      char c = Peek();
      if (c == '`') {
        lit.end = pos_;
        pieces.push_back(std::move(lit));
        ++pos_;
        return pieces;
      }
      if (c == '\\') {
        ++pos_;
        Escape(lit.text);
      } else if (StartsWith("${")) {
        lit.end = pos_;
        pieces.push_back(std::move(lit));
        pos_ += 2;
        TemplatePiece expr;
        expr.is_expr = true;
        expr.begin = pos_;
        SkipInterpolation();
        expr.end = pos_;
        pieces.push_back(std::move(expr));
        ++pos_;
        lit = TemplatePiece{};
        lit.begin = pos_;
      } else {
        lit.text += c;
        ++pos_;
      }
    }
  }

  void LexRegex() {
    ++pos_;
    bool in_class = false;
    while (true) {
      if (AtEnd() || Peek() == '\n') Fail("unterminated regular expression");
      char c = Peek();
      ++pos_;
      if (c == '\\') {
        ++pos_;
      } else if (c == '[') {
        in_class = true;
      } else if (c == ']') {
        in_class = false;
      } else if (c == '/' && !in_class) {
        break;
      }
    }
    while (IsIdentChar(Peek())) ++pos_;
  }
};

// ---------------------------------------------------------------------------
// Python

const std::vector<std::string_view>& PyPuncts() {
  static const std::vector<std::string_view> table = {
      "**=", "//=", ">>=", "<<=", "...", "->", ":=", "==", "!=", "<=",
      ">=",  "**",  "//",  "<<",  ">>",  "+=", "-=", "*=", "/=", "%=",
      "&=",  "|=",  "^=",  "@=",  "(",   ")",  "[",  "]",  "{",  "}",
      ",",   ":",   ".",   ";",   "@",   "=",  "+",  "-",  "*",  "/",
      "%",   "&",   "|",   "^",   "~",   "<",  ">"};
  return table;
}

class PyLexer : public Scanner {
 public:
  PyLexer(std::string_view text, std::uint32_t begin, std::uint32_t end,
          const LineIndex& lines, bool expression_only)
      : Scanner(text, begin, end, lines), expression_only_(expression_only) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    std::vector<std::uint32_t> indents{0};
    int depth = expression_only_ ? 1 : 0;
    bool at_line_start = !expression_only_;
    while (true) {
      if (at_line_start) {
        // Measure indentation of the next logical line; skip blank lines.
        std::uint32_t col = 0;
        std::uint32_t line_begin = pos_;
        while (Peek() == ' ' || Peek() == '\t' || Peek() == '\f') {
          col = Peek() == '\t' ? (col / 8 + 1) * 8 : col + 1;
          ++pos_;
        }
        if (Peek() == '#') {
          while (!AtEnd() && Peek() != '\n') ++pos_;
        }
        if (Peek() == '\r') ++pos_;
        if (Peek() == '\n') {
          ++pos_;
          continue;
        }
        if (AtEnd()) break;
        (void)line_begin;
        at_line_start = false;
        if (col > indents.back()) {
          indents.push_back(col);
          out.push_back(Synthetic(TokenKind::kIndent, pos_));
        } else {
          while (col < indents.back()) {
            indents.pop_back();
            out.push_back(Synthetic(TokenKind::kDedent, pos_));
          }
          if (col != indents.back()) Fail("inconsistent dedent");
        }
      }
      // Inline whitespace, comments, continuations.
      while (true) {
        char c = Peek();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
          ++pos_;
        } else if (c == '#') {
          while (!AtEnd() && Peek() != '\n') ++pos_;
        } else if (c == '\\' && Peek(1) == '\n') {
          pos_ += 2;
        } else if (c == '\\' && Peek(1) == '\r' && Peek(2) == '\n') {
          pos_ += 3;
        } else if (c == '\n' && depth > 0) {
          ++pos_;
        } else {
          break;
        }
      }
      if (AtEnd()) break;
      char c = Peek();
      Token tok;
      tok.begin = pos_;
      if (c == '\n') {
        ++pos_;
        tok.kind = TokenKind::kNewline;
        tok.end = pos_;
        out.push_back(std::move(tok));
        at_line_start = true;
        continue;
      }
      if (IsStringStart()) {
        LexString(tok);
      } else if (IsIdentStart(c) && c != '$') {
        while (IsIdentChar(Peek()) && Peek() != '$') ++pos_;
        tok.kind = TokenKind::kIdent;
        tok.text = std::string(text_.substr(tok.begin, pos_ - tok.begin));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(Peek(1))))) {
        tok.kind = TokenKind::kNumber;
        tok.text = LexNumber();
      } else {
        auto p = MatchPunct(text_.substr(pos_, end_ - pos_), PyPuncts());
        if (p.empty()) Fail(std::string("unexpected character '") + c + "'");
        pos_ += static_cast<std::uint32_t>(p.size());
        tok.kind = TokenKind::kPunct;
        tok.text = std::string(p);
        if (p == "(" || p == "[" || p == "{") ++depth;
        if (p == ")" || p == "]" || p == "}") {
          if (depth == 0) Fail("unbalanced '" + tok.text + "'");
          --depth;
        }
      }
      tok.end = pos_;
      out.push_back(std::move(tok));
    }
    if (depth > (expression_only_ ? 1 : 0)) Fail("unclosed bracket at end of input");
    if (!expression_only_) {
      if (!out.empty() && out.back().kind != TokenKind::kNewline &&
          out.back().kind != TokenKind::kDedent) {
        out.push_back(Synthetic(TokenKind::kNewline, pos_));
      }
      while (indents.size() > 1) {
        indents.pop_back();
        out.push_back(Synthetic(TokenKind::kDedent, pos_));
      }
    }
    out.push_back(Synthetic(TokenKind::kEof, pos_));
    return out;
  }

 private:
  Token Synthetic(TokenKind kind, std::uint32_t at) const {
    Token t;
    t.kind = kind;
    t.begin = at;
    t.end = at;
    t.synthetic = true;
    return t;
  }

  bool IsStringStart() const {
    std::uint32_t i = 0;
    while (i < 2) {
      char c = static_cast<char>(std::tolower(static_cast<unsigned char>(Peek(i))));
      if (c == 'r' || c == 'b' || c == 'f' || c == 'u') {
        ++i;
      } else {
        break;
      }
    }
    char q = Peek(i);
    if (q != '"' && q != '\'') return false;
    // An identifier like "bar" followed by a quote is not a prefix.
    return i == 0 || !IsIdentChar(Peek(i)) || q == '"' || q == '\'';
  }

  void LexString(Token& tok) {
    bool raw = false;
    bool fstring = false;
    while (Peek() != '"' && Peek() != '\'') {
      char c = static_cast<char>(std::tolower(static_cast<unsigned char>(Peek())));
      raw = raw || c == 'r';
      fstring = fstring || c == 'f';
      ++pos_;
    }
    char quote = Peek();
    bool triple = Peek(1) == quote && Peek(2) == quote;
    pos_ += triple ? 3 : 1;
    tok.kind = TokenKind::kString;
    TemplatePiece lit;
    lit.begin = pos_;
    while (true) {
      if (AtEnd()) Fail("unterminated string literal");
      char c = Peek();
      if (!triple && c == '\n') Fail("unterminated string literal");
      if (c == quote && (!triple || (Peek(1) == quote && Peek(2) == quote))) {
        lit.end = pos_;
        pos_ += triple ? 3 : 1;
        break;
      }
      if (c == '\\' && !raw) {
        ++pos_;
        Escape(lit.text);
      } else if (c == '\\' && raw) {
        lit.text += c;
        lit.text += Peek(1);
        pos_ += 2;
      } else if (fstring && c == '{' && Peek(1) == '{') {
        lit.text += '{';
        pos_ += 2;
      } else if (fstring && c == '}' && Peek(1) == '}') {
        lit.text += '}';
        pos_ += 2;
      } else if (fstring && c == '{') {
        lit.end = pos_;
        tok.pieces.push_back(std::move(lit));
        ++pos_;
        TemplatePiece expr;
        expr.is_expr = true;
        expr.begin = pos_;
        expr.end = SkipReplacementField(quote, triple);
        tok.pieces.push_back(std::move(expr));
        lit = TemplatePiece{};
        lit.begin = pos_;
      } else {
        lit.text += c;
        ++pos_;
      }
    }
    if (fstring) {
      tok.pieces.push_back(lit);
      tok.kind = TokenKind::kTemplate;
    }
    tok.value = std::move(lit.text);
    tok.text = std::string(text_.substr(tok.begin, pos_ - tok.begin));
  }

  // pos_ is just after '{'. Leaves pos_ after the closing '}' and returns the
  // end of the expression part (before any !conversion or :format spec).
  std::uint32_t SkipReplacementField(char outer_quote, bool outer_triple) {
    int depth = 0;
    std::uint32_t expr_end = 0;
    while (true) {
      if (AtEnd()) Fail("unterminated f-string field");
      char c = Peek();
      if (c == outer_quote && !outer_triple) Fail("unterminated f-string field");
      if (c == '(' || c == '[' || c == '{') {
        ++depth;
      } else if ((c == ')' || c == ']') && depth > 0) {
        --depth;
      } else if (c == '}') {
        if (depth == 0) {
          if (expr_end == 0) expr_end = pos_;
          ++pos_;
          return expr_end;
        }
        --depth;
      } else if (depth == 0 && expr_end == 0 &&
                 ((c == '!' && Peek(1) != '=') || c == ':')) {
        expr_end = pos_;
      } else if ((c == '\'' || c == '"') && c != outer_quote) {
        char q = c;
        ++pos_;
        while (!AtEnd() && Peek() != q) ++pos_;
      }
      ++pos_;
    }
  }

  bool expression_only_;
};

// ---------------------------------------------------------------------------
// Go

const std::vector<std::string_view>& GoPuncts() {
  static const std::vector<std::string_view> table = {
      "<<=", ">>=", "&^=", "...", "&&", "||", "<-", "++", "--", "==", "!=",
      "<=",  ">=",  ":=",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=", "^=",
      "<<",  ">>",  "&^",  "(",   ")",  "[",  "]",  "{",  "}",  ",",  ";",
      ":",   ".",   "=",   "+",   "-",  "*",  "/",  "%",  "&",  "|",  "^",
      "<",   ">",   "!",   "~"};
  return table;
}

class GoLexer : public Scanner {
 public:
  using Scanner::Scanner;

  std::vector<Token> Run() {
    std::vector<Token> out;
    while (true) {
      bool newline = SkipTrivia();
      if ((newline || AtEnd()) && NeedsSemicolon(out)) {
        Token semi;
        semi.kind = TokenKind::kPunct;
        semi.text = ";";
        semi.begin = semi.end = out.back().end;
        semi.synthetic = true;
        out.push_back(std::move(semi));
      }
      Token tok;
      tok.begin = pos_;
      tok.newline_before = newline;
      if (AtEnd()) {
        tok.kind = TokenKind::kEof;
        tok.end = pos_;
        out.push_back(std::move(tok));
        return out;
      }
      char c = Peek();
      if (IsIdentStart(c) && c != '$') {
        while (IsIdentChar(Peek()) && Peek() != '$') ++pos_;
        tok.kind = TokenKind::kIdent;
        tok.text = std::string(text_.substr(tok.begin, pos_ - tok.begin));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(Peek(1))))) {
        tok.kind = TokenKind::kNumber;
        tok.text = LexNumber();
      } else if (c == '"') {
        tok.kind = TokenKind::kString;
        ++pos_;
        while (true) {
          if (AtEnd() || Peek() == '\n') Fail("unterminated string literal");
          if (Peek() == '"') {
            ++pos_;
            break;
          }
          if (Peek() == '\\') {
            ++pos_;
            Escape(tok.value);
          } else {
            tok.value += Peek();
            ++pos_;
          }
        }
      } else if (c == '`') {
        tok.kind = TokenKind::kString;
        ++pos_;
        while (Peek() != '`') {
          if (AtEnd()) Fail("unterminated raw string");
          tok.value += Peek();
          ++pos_;
        }
        ++pos_;
      } else if (c == '\'') {
        tok.kind = TokenKind::kNumber;  // runes behave like numbers here
        ++pos_;
        while (Peek() != '\'') {
          if (AtEnd() || Peek() == '\n') Fail("unterminated rune literal");
          if (Peek() == '\\') ++pos_;
          ++pos_;
        }
        ++pos_;
      } else {
        auto p = MatchPunct(text_.substr(pos_, end_ - pos_), GoPuncts());
        if (p.empty()) Fail(std::string("unexpected character '") + c + "'");
        pos_ += static_cast<std::uint32_t>(p.size());
        tok.kind = TokenKind::kPunct;
        tok.text = std::string(p);
      }
      tok.end = pos_;
      if (tok.text.empty()) {
        tok.text = std::string(text_.substr(tok.begin, tok.end - tok.begin));
      }
      out.push_back(std::move(tok));
    }
  }

 private:
  bool SkipTrivia() {
    bool newline = false;
    while (!AtEnd()) {
      char c = Peek();
      if (c == '\n') {
        newline = true;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (StartsWith("//")) {
        while (!AtEnd() && Peek() != '\n') ++pos_;
      } else if (StartsWith("/*")) {
        auto close = text_.find("*/", pos_ + 2);
        if (close == std::string_view::npos) Fail("unterminated comment");
        for (auto i = pos_; i < close; ++i) newline = newline || text_[i] == '\n';
        pos_ = static_cast<std::uint32_t>(close + 2);
      } else {
        break;
      }
    }
    return newline;
  }

  static bool NeedsSemicolon(const std::vector<Token>& out) {
    if (out.empty()) return false;
    const Token& t = out.back();
    switch (t.kind) {
      case TokenKind::kIdent:
        return t.text != "func" && t.text != "if" && t.text != "for" &&
               t.text != "switch" && t.text != "else" && t.text != "import" &&
               t.text != "package" && t.text != "var" && t.text != "const" &&
               t.text != "type" && t.text != "go" && t.text != "defer" &&
               t.text != "select" && t.text != "case" && t.text != "default" &&
               t.text != "struct" && t.text != "interface" && t.text != "map" &&
               t.text != "chan" && t.text != "range";
      case TokenKind::kNumber:
      case TokenKind::kString:
        return true;
      case TokenKind::kPunct:
        return t.text == ")" || t.text == "]" || t.text == "}" ||
               t.text == "++" || t.text == "--";
      default:
        return false;
    }
  }
};

}  // namespace

std::vector<Token> LexJavaScript(std::string_view text, std::uint32_t begin,
                                 std::uint32_t end, const LineIndex& lines) {
  return JsLexer(text, begin, end, lines).Run();
}

std::vector<Token> LexPython(std::string_view text, std::uint32_t begin,
                             std::uint32_t end, const LineIndex& lines,
                             bool expression_only) {
  return PyLexer(text, begin, end, lines, expression_only).Run();
}

std::vector<Token> LexGo(std::string_view text, std::uint32_t begin,
                         std::uint32_t end, const LineIndex& lines) {
  return GoLexer(text, begin, end, lines).Run();
}

}  // namespace privscope::syntax

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

#ifndef PRIVSCOPE_SOURCE_AST_H_
#define PRIVSCOPE_SOURCE_AST_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "privscope/common/error.h"
#include "privscope/source/source_unit.h"

// A small syntax tree shared by the JavaScript, Python and Go front ends.
// It keeps only the shapes the registry builder needs; anything else is
// parsed for validity and then flattened into kOther.
namespace privscope::syntax {

struct Function;
struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

enum class ExprKind {
  kName,
  kString,    // text holds the decoded value
  kTemplate,  // children alternate kString pieces and embedded expressions
  kNumber,
  kKeyword,   // true/false/null/None/nil/this/self-like literals
  kMember,    // children[0].text
  kIndex,     // children[0][children[1]]
  kCall,      // children[0](children[1..]); keys hold keyword names
  kNew,       // new children[0](children[1..])
  kBinary,    // text is the operator
  kUnary,     // text is the operator
  kObject,    // keys[i]: children[i]; "..." marks a spread
  kArray,     // also tuples and destructuring lists
  kFunction,  // lambda / arrow / func literal
  kConditional,
  kSpread,
  kOther,
};

struct Expr {
  ExprKind kind = ExprKind::kOther;
  std::uint32_t begin = 0;  // byte offsets, end exclusive
  std::uint32_t end = 0;
  std::string text;
  std::uint32_t name_offset = 0;  // kMember: offset of the member name token
  std::vector<ExprPtr> children;
  std::vector<std::string> keys;
  std::shared_ptr<Function> function;
};

enum class StmtKind {
  kExpr,
  kAssign,    // targets/values, op in {"=", ":=", "decl", "chain", "+=", ...}
  kImport,
  kIf,        // blocks are alternative paths; exhaustive when an else exists
  kLoop,      // blocks[0] runs zero or more times
  kReturn,
  kFunction,  // function declaration
  kClass,     // blocks[0] holds member functions
  kTry,       // blocks[0] body, blocks[1..n-1] handlers, finally when marked
  kBlock,     // op "header": statements that cannot be split onto lines
  kOther,
};

struct ImportBinding {
  std::string local;   // name bound in this file; empty for side-effect imports
  std::string member;  // dotted member path inside the module; empty = module
};

struct ImportDecl {
  std::string module;
  std::vector<ImportBinding> bindings;
};

struct Stmt {
  StmtKind kind = StmtKind::kOther;
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  std::string op;
  std::vector<ExprPtr> targets;
  std::vector<ExprPtr> values;
  std::vector<Block> blocks;
  bool exhaustive = false;
  bool has_finally = false;
  std::shared_ptr<Function> function;
  std::string name;  // class name
  ImportDecl import;
};

struct Function {
  std::string name;
  std::vector<std::string> params;
  Block body;
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
};

struct Module {
  Language language = Language::kJavaScript;
  Block body;
};

// Parses a whole unit. Throws Error(kParseError) with a location on invalid
// input.
Module Parse(const SourceUnit& unit, Language language);

Module ParseJavaScript(const SourceUnit& unit);
Module ParsePython(const SourceUnit& unit);
Module ParseGo(const SourceUnit& unit);

}  // namespace privscope::syntax

#endif  // PRIVSCOPE_SOURCE_AST_H_

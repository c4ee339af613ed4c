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

#ifndef PRIVSCOPE_SOURCE_INTERPRETER_H_
#define PRIVSCOPE_SOURCE_INTERPRETER_H_

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "privscope/source/ast.h"
#include "privscope/source/registry.h"

namespace privscope::detail {

struct AbsValue;
struct ClassInfo;

struct HandleInfo {
  std::string service;
  std::string kind = "client";
  std::map<std::string, ValueSet> binds;
  bool guarded = false;
  bool command_style = false;
  std::optional<SourceLocation> origin;
};

// One alternative of an abstract value.
struct Alt {
  enum class Kind { kScalar, kNull, kObject, kArray, kHandle, kSymbol, kFunction, kClass, kCommand };
  Kind kind = Kind::kScalar;
  ValuePtr scalar;
  std::shared_ptr<const std::map<std::string, AbsValue>> fields;  // kObject, kCommand input
  std::shared_ptr<const std::vector<AbsValue>> elements;           // kArray
  std::shared_ptr<const HandleInfo> handle;
  std::string name;  // kSymbol path, kCommand method
  const syntax::Function* function = nullptr;
  bool nested = false;  // function defined inside another function
  const ClassInfo* cls = nullptr;
  std::string key;      // structural identity for dedup
};

struct AbsValue {
  std::vector<Alt> alts;

  bool empty() const { return alts.empty(); }
};

using Env = std::map<std::string, AbsValue>;

struct ClassInfo {
  std::string name;
  std::map<std::string, const syntax::Function*> methods;
  AbsValue self;
};

struct InterpreterResult {
  std::vector<SdkImport> imports;
  std::vector<ClientConstruction> constructions;
  std::vector<ServiceCallSite> call_sites;
  std::map<std::string, std::vector<SourceLocation>> env_reads;
  std::map<std::string, ValueSet> assignments;
  std::vector<Finding> findings;
  std::vector<std::uint32_t> import_ends;
};

// Abstract interpreter over the shared syntax tree. Values are sets of
// alternatives; branches and loops merge by union.
class Interpreter {
 public:
  Interpreter(const SourceUnit& unit, const syntax::Module& module, const RuleSet& rules,
              Vendor vendor);

  InterpreterResult Run();

 private:
  struct CallArgs {
    std::vector<AbsValue> positional;
    std::vector<const syntax::Expr*> positional_exprs;
    std::vector<std::pair<std::string, AbsValue>> keywords;
    std::vector<AbsValue> spreads;  // **kwargs objects
  };

  // Statements.
  void WalkBlock(const syntax::Block& block, Env& env, bool header = false);
  void WalkStmt(const syntax::Stmt& stmt, Env& env);
  void WalkAssign(const syntax::Stmt& stmt, Env& env);
  void WalkImport(const syntax::Stmt& stmt, Env& env);
  void WalkClass(const syntax::Stmt& stmt, Env& env);
  void Assign(const syntax::Expr& target, const AbsValue& value, Env& env);
  void SetPath(const syntax::Expr& target, const AbsValue& value, Env& env);

  // Functions.
  void AnalyzeFunction(const syntax::Function& fn, const Env& base, const ClassInfo* cls,
                       std::string scope);
  AbsValue Expand(const syntax::Function& fn, const CallArgs& args, const Env& base,
                  const ClassInfo* cls, const AbsValue* self, const SourceLocation& call_site);
  void BindParams(const syntax::Function& fn, const CallArgs* args, const ClassInfo* cls,
                  const AbsValue* self, Env& env);
  bool IsHelper(const syntax::Function& fn) const;
  void NoteFunction(const syntax::Function& fn);

  // Expressions.
  AbsValue Eval(const syntax::Expr& e, Env& env);
  AbsValue EvalCall(const syntax::Expr& e, Env& env, bool is_new);
  AbsValue EvalMember(const AbsValue& object, const std::string& name,
                      const syntax::Expr& where);
  AbsValue EvalIndex(const AbsValue& object, const AbsValue& index, const syntax::Expr& where);
  CallArgs EvalArgs(const syntax::Expr& call, std::size_t first, Env& env);
  AbsValue CallSymbol(const std::string& symbol, const CallArgs& args, const syntax::Expr& call,
                      bool is_new);
  AbsValue CallMethod(const AbsValue& receiver, const std::string& method, const CallArgs& args,
                      const syntax::Expr& call, const syntax::Expr& member, Env& env);
  AbsValue CallHandleMethod(const Alt& handle, const std::string& method, const CallArgs& args,
                            const syntax::Expr& call, const syntax::Expr& member);
  AbsValue Construct(const ConstructorRule& rule, const std::string& symbol,
                     const CallArgs& args, const syntax::Expr& call);
  void RecordSite(const HandleInfo& h, const std::string& method,
                  const std::map<std::string, ValueSet>& params, const CallArgs& args,
                  const syntax::Expr& call, const syntax::Expr& member);
  std::map<std::string, ValueSet> SiteParams(const HandleInfo& h, const ActionRule* rule,
                                             const CallArgs& args) const;
  AbsValue Format(const AbsValue& format, const std::vector<AbsValue>& args, bool percent);
  AbsValue EnvRead(const CallArgs& args, const syntax::Expr& where);
  AbsValue ReadEnvName(const std::string& name, const syntax::Expr& where);

  // Helpers.
  std::string Text(const syntax::Expr& e) const;
  SourceLocation Locate(std::uint32_t offset) const;
  ValueSet Scalars(const AbsValue& v) const;
  std::optional<std::string> LiteralOf(const AbsValue& v) const;
  AbsValue Lookup(const std::string& name, const Env& env) const;
  void Finding(const std::string& kind, const std::string& message, std::uint32_t offset);

  const SourceUnit& unit_;
  const syntax::Module& module_;
  const RuleSet& rules_;
  Vendor vendor_;
  Language language_;
  const LanguageVendorRules* pair_ = nullptr;

  Env globals_;
  bool at_module_ = true;
  int helper_depth_ = 0;
  std::optional<SourceLocation> via_;
  std::string scope_ = "<module>";
  std::vector<AbsValue>* returns_ = nullptr;
  const ClassInfo* class_ = nullptr;
  std::uint32_t anchor_ = 0;
  std::uint32_t module_stmt_end_ = 0;
  bool module_stmt_is_import_ = false;

  std::set<std::string> called_names_;
  std::map<const syntax::Function*, std::set<std::string>> aliases_;
  std::vector<const syntax::Function*> functions_;  // discovery order
  std::set<const syntax::Function*> seen_functions_;
  std::map<const syntax::Function*, const ClassInfo*> method_class_;
  std::set<const syntax::Function*> analyzed_;
  std::set<const syntax::Function*> expanded_;
  std::set<const syntax::Function*> active_;
  std::set<const syntax::Function*> depth_limited_;
  std::vector<const syntax::Function*> inline_queue_;
  std::vector<std::unique_ptr<ClassInfo>> classes_;
  std::map<std::uint32_t, std::vector<std::pair<std::string, std::string>>> go_checks_;

  InterpreterResult out_;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::string, std::string>, std::size_t>
      site_index_;
  std::set<std::uint32_t> construction_offsets_;
  std::set<std::pair<std::string, std::uint32_t>> env_read_offsets_;
};

// Module names imported or required anywhere in the tree.
std::vector<std::pair<std::string, std::uint32_t>> ImportedModules(const syntax::Module& module);

}  // namespace privscope::detail

#endif  // PRIVSCOPE_SOURCE_INTERPRETER_H_

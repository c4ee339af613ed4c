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

#include "interpreter.h"

#include <algorithm>
#include <functional>

namespace privscope::detail {
namespace {

using syntax::Block;
using syntax::Expr;
using syntax::ExprKind;
using syntax::Function;
using syntax::Stmt;
using syntax::StmtKind;

constexpr std::size_t kMaxAlts = 16;
// Python spells the guard with one underscore to escape name mangling.
constexpr char kGuardName[] = "__privscope_guard";
constexpr char kPyGuardName[] = "_privscope_guard";
constexpr char kGoCheckName[] = "privscopeCheck";

std::string AbsKey(const AbsValue& v);

Alt ScalarAlt(ValuePtr value) {
  Alt a;
  a.kind = Alt::Kind::kScalar;
  a.key = "s:" + ValueKey(*value);
  a.scalar = std::move(value);
  return a;
}

Alt NullAlt() {
  Alt a;
  a.kind = Alt::Kind::kNull;
  a.key = "null";
  return a;
}

std::string FieldsKey(const std::map<std::string, AbsValue>& fields) {
  std::string key = "{";
  for (const auto& [k, v] : fields) key += k + "=" + AbsKey(v) + ";";
  return key + "}";
}

Alt ObjectAlt(std::map<std::string, AbsValue> fields) {
  Alt a;
  a.kind = Alt::Kind::kObject;
  a.key = "o" + FieldsKey(fields);
  a.fields = std::make_shared<const std::map<std::string, AbsValue>>(std::move(fields));
  return a;
}

Alt ArrayAlt(std::vector<AbsValue> elements) {
  Alt a;
  a.kind = Alt::Kind::kArray;
  a.key = "a[";
  for (const auto& e : elements) a.key += AbsKey(e) + ";";
  a.key += "]";
  a.elements = std::make_shared<const std::vector<AbsValue>>(std::move(elements));
  return a;
}

Alt HandleAlt(HandleInfo h) {
  Alt a;
  a.kind = Alt::Kind::kHandle;
  a.key = "h:" + h.service + "/" + h.kind + (h.guarded ? "/g" : "");
  if (h.origin) a.key += "@" + std::to_string(h.origin->line) + ":" + std::to_string(h.origin->column);
  for (const auto& [k, vs] : h.binds) {
    a.key += "|" + k + "=";
    for (const auto& v : vs) a.key += ValueKey(*v) + ",";
  }
  a.handle = std::make_shared<const HandleInfo>(std::move(h));
  return a;
}

Alt SymbolAlt(std::string path) {
  Alt a;
  a.kind = Alt::Kind::kSymbol;
  a.key = "y:" + path;
  a.name = std::move(path);
  return a;
}

Alt FunctionAlt(const Function* fn, bool nested) {
  Alt a;
  a.kind = Alt::Kind::kFunction;
  a.key = "f:" + std::to_string(fn->begin);
  a.function = fn;
  a.nested = nested;
  return a;
}

Alt ClassAlt(const ClassInfo* cls) {
  Alt a;
  a.kind = Alt::Kind::kClass;
  a.key = "c:" + cls->name;
  a.cls = cls;
  return a;
}

Alt CommandAlt(std::string method, std::map<std::string, AbsValue> input) {
  Alt a;
  a.kind = Alt::Kind::kCommand;
  a.key = "k:" + method + FieldsKey(input);
  a.name = std::move(method);
  a.fields = std::make_shared<const std::map<std::string, AbsValue>>(std::move(input));
  return a;
}

std::string AbsKey(const AbsValue& v) {
  std::string key;
  for (const auto& a : v.alts) key += a.key + "|";
  return key;
}

AbsValue Of(Alt a) {
  AbsValue v;
  v.alts.push_back(std::move(a));
  return v;
}

AbsValue Scalar(ValuePtr value) { return Of(ScalarAlt(std::move(value))); }
AbsValue Unknown(const std::string& origin) { return Scalar(ValueExpr::Unknown(origin)); }

void AddAlt(AbsValue& into, const Alt& alt) {
  for (const auto& a : into.alts) {
    if (a.key == alt.key) return;
  }
  if (into.alts.size() >= kMaxAlts) {
    Alt overflow = ScalarAlt(ValueExpr::Unknown("alternatives"));
    for (const auto& a : into.alts) {
      if (a.key == overflow.key) return;
    }
    into.alts.back() = overflow;
    return;
  }
  into.alts.push_back(alt);
}

AbsValue Union(AbsValue a, const AbsValue& b) {
  for (const auto& alt : b.alts) AddAlt(a, alt);
  return a;
}

bool IsNullish(const AbsValue& v) {
  return std::all_of(v.alts.begin(), v.alts.end(),
                     [](const Alt& a) { return a.kind == Alt::Kind::kNull; });
}

AbsValue WithoutNull(const AbsValue& v) {
  AbsValue out;
  for (const auto& a : v.alts) {
    if (a.kind != Alt::Kind::kNull) out.alts.push_back(a);
  }
  return out;
}

Env Merge(const Env& a, const Env& b) {
  Env out = a;
  for (const auto& [k, v] : b) {
    auto it = out.find(k);
    if (it == out.end()) {
      out.emplace(k, v);
    } else {
      it->second = Union(it->second, v);
    }
  }
  return out;
}

std::string LowerFirst(std::string s) {
  if (!s.empty() && s[0] >= 'A' && s[0] <= 'Z') s[0] = static_cast<char>(s[0] - 'A' + 'a');
  return s;
}

const Expr& Unwrap(const Expr& e) {
  return e.kind == ExprKind::kSpread && !e.children.empty() ? *e.children[0] : e;
}

std::string CallKey(const Expr& call, std::size_t child) {
  if (call.keys.size() == call.children.size()) return call.keys[child];
  if (call.keys.size() + 1 == call.children.size() && child >= 1) return call.keys[child - 1];
  return "";
}

bool Contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

void VisitExpr(const Expr& e, const std::function<void(const Expr&)>& fn);
void VisitBlock(const Block& b, const std::function<void(const Expr&)>& fn,
                const std::function<void(const Stmt&)>& on_stmt);

void VisitFunction(const Function& f, const std::function<void(const Expr&)>& fn,
                   const std::function<void(const Stmt&)>& on_stmt) {
  VisitBlock(f.body, fn, on_stmt);
}

void VisitExpr(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  for (const auto& c : e.children) {
    if (c) VisitExpr(*c, fn);
  }
  if (e.function) VisitFunction(*e.function, fn, [](const Stmt&) {});
}

void VisitBlock(const Block& b, const std::function<void(const Expr&)>& fn,
                const std::function<void(const Stmt&)>& on_stmt) {
  for (const auto& s : b) {
    if (!s) continue;
    on_stmt(*s);
    for (const auto& t : s->targets) {
      if (t) VisitExpr(*t, fn);
    }
    for (const auto& v : s->values) {
      if (v) VisitExpr(*v, fn);
    }
    for (const auto& inner : s->blocks) VisitBlock(inner, fn, on_stmt);
    if (s->function) VisitFunction(*s->function, fn, on_stmt);
  }
}

}  // namespace

std::vector<std::pair<std::string, std::uint32_t>> ImportedModules(const syntax::Module& module) {
  std::vector<std::pair<std::string, std::uint32_t>> out;
  VisitBlock(
      module.body,
      [&](const Expr& e) {
        if (module.language == Language::kJavaScript && e.kind == ExprKind::kCall &&
            e.children.size() == 2 && e.children[0]->kind == ExprKind::kName &&
            e.children[0]->text == "require" && e.children[1]->kind == ExprKind::kString) {
          out.emplace_back(e.children[1]->text, e.begin);
        }
      },
      [&](const Stmt& s) {
        if (s.kind == StmtKind::kImport) out.emplace_back(s.import.module, s.begin);
      });
  return out;
}

Interpreter::Interpreter(const SourceUnit& unit, const syntax::Module& module,
                         const RuleSet& rules, Vendor vendor)
    : unit_(unit), module_(module), rules_(rules), vendor_(vendor), language_(module.language) {
  if (vendor_ != Vendor::kUnknown) pair_ = rules_.Find(language_, vendor_);
}

// ---- driver ---------------------------------------------------------------

InterpreterResult Interpreter::Run() {
  VisitBlock(
      module_.body,
      [&](const Expr& e) {
        if (e.kind != ExprKind::kCall || e.children.empty()) return;
        const Expr& callee = *e.children[0];
        if (callee.kind == ExprKind::kName) called_names_.insert(callee.text);
        if (callee.kind == ExprKind::kMember && !callee.children.empty()) {
          const Expr& obj = *callee.children[0];
          if ((obj.kind == ExprKind::kKeyword && obj.text == "this") ||
              (obj.kind == ExprKind::kName && obj.text == "self")) {
            called_names_.insert(callee.text);
          }
        }
      },
      [](const Stmt&) {});

  WalkBlock(module_.body, globals_);
  at_module_ = false;

  // Entry points first, then anything never reached through a helper call.
  for (bool include_helpers : {false, true}) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t i = 0; i < functions_.size(); ++i) {
        const Function* fn = functions_[i];
        if (analyzed_.count(fn)) continue;
        if (expanded_.count(fn) && !depth_limited_.count(fn)) continue;
        if (!include_helpers && IsHelper(*fn)) continue;
        auto it = method_class_.find(fn);
        const ClassInfo* cls = it == method_class_.end() ? nullptr : it->second;
        std::string scope = fn->name.empty() ? "<anonymous@" + std::to_string(Locate(fn->begin).line) + ">"
                                             : fn->name;
        AnalyzeFunction(*fn, globals_, cls, scope);
        progress = true;
      }
    }
  }
  return std::move(out_);
}

bool Interpreter::IsHelper(const Function& fn) const {
  if (!fn.name.empty() && called_names_.count(fn.name)) return true;
  auto it = aliases_.find(&fn);
  if (it == aliases_.end()) return false;
  for (const auto& n : it->second) {
    if (called_names_.count(n)) return true;
  }
  return false;
}

void Interpreter::NoteFunction(const Function& fn) {
  if (seen_functions_.insert(&fn).second) functions_.push_back(&fn);
}

void Interpreter::BindParams(const Function& fn, const CallArgs* args, const ClassInfo* cls,
                             const AbsValue* self, Env& env) {
  std::size_t start = 0;
  if (cls != nullptr && self != nullptr) {
    if (language_ == Language::kJavaScript) {
      env["this"] = *self;
    } else if (language_ == Language::kPython && !fn.params.empty()) {
      env[fn.params[0]] = *self;
      start = 1;
    }
  }
  for (std::size_t i = start; i < fn.params.size(); ++i) {
    const std::string& name = fn.params[i];
    AbsValue value;
    if (args != nullptr) {
      for (const auto& [k, v] : args->keywords) {
        if (k == name) value = v;
      }
      std::size_t pos = i - start;
      if (value.empty() && pos < args->positional.size()) value = args->positional[pos];
    }
    if (value.empty()) value = Scalar(ValueExpr::Param(name));
    env[name] = value;
  }
}

void Interpreter::AnalyzeFunction(const Function& fn, const Env& base, const ClassInfo* cls,
                                  std::string scope) {
  analyzed_.insert(&fn);
  Env env = base;
  BindParams(fn, nullptr, cls, cls != nullptr ? &cls->self : nullptr, env);
  std::vector<AbsValue> returns;
  auto saved = std::make_tuple(at_module_, scope_, returns_, class_);
  at_module_ = false;
  scope_ = std::move(scope);
  returns_ = &returns;
  class_ = cls;
  WalkBlock(fn.body, env);
  std::tie(at_module_, scope_, returns_, class_) = saved;
}

AbsValue Interpreter::Expand(const Function& fn, const CallArgs& args, const Env& base,
                             const ClassInfo* cls, const AbsValue* self,
                             const SourceLocation& call_site) {
  if (helper_depth_ >= 1 || active_.count(&fn)) {
    // Past the tracing depth the helper still gets a standalone pass, so
    // its sites carry parameter values rather than vanishing.
    depth_limited_.insert(&fn);
    return Unknown("helper-depth");
  }
  expanded_.insert(&fn);
  active_.insert(&fn);
  Env env = base;
  BindParams(fn, &args, cls, self, env);
  std::vector<AbsValue> returns;
  auto saved = std::make_tuple(at_module_, scope_, returns_, class_, via_);
  at_module_ = false;
  ++helper_depth_;
  via_ = call_site;
  scope_ = fn.name.empty() ? "<helper>" : fn.name;
  returns_ = &returns;
  class_ = cls;
  WalkBlock(fn.body, env);
  --helper_depth_;
  std::tie(at_module_, scope_, returns_, class_, via_) = saved;
  active_.erase(&fn);
  AbsValue result;
  for (const auto& r : returns) result = Union(std::move(result), r);
  if (result.empty()) result = Of(NullAlt());
  return result;
}

// ---- statements -----------------------------------------------------------

void Interpreter::WalkBlock(const Block& block, Env& env, bool header) {
  bool top = at_module_ && !header && &block == &module_.body;
  // Hoist function declarations so calls before the definition resolve.
  for (const auto& s : block) {
    if (s && s->kind == StmtKind::kFunction && s->function && !s->function->name.empty() &&
        !(language_ == Language::kGo && s->function->name == "init")) {
      env[s->function->name] = Of(FunctionAlt(s->function.get(), !at_module_));
    }
  }
  std::vector<std::pair<std::string, std::string>> pending_checks;
  for (const auto& sp : block) {
    if (!sp) continue;
    const Stmt& s = *sp;
    if (language_ == Language::kGo && s.kind == StmtKind::kExpr && s.values.size() == 1 &&
        s.values[0]->kind == ExprKind::kCall && !s.values[0]->children.empty() &&
        s.values[0]->children[0]->kind == ExprKind::kName &&
        s.values[0]->children[0]->text == kGoCheckName) {
      const Expr& call = *s.values[0];
      if (call.children.size() >= 3 && call.children[1]->kind == ExprKind::kString &&
          call.children[2]->kind == ExprKind::kString) {
        pending_checks.emplace_back(call.children[1]->text, call.children[2]->text);
      }
      continue;
    }
    std::uint32_t saved_anchor = anchor_;
    bool else_if = s.kind == StmtKind::kIf && s.op == "header";
    if (!header && !else_if) anchor_ = s.begin;
    if (!pending_checks.empty()) {
      auto& slot = go_checks_[s.begin];
      slot.insert(slot.end(), pending_checks.begin(), pending_checks.end());
      pending_checks.clear();
    }
    bool saved_is_import = module_stmt_is_import_;
    if (top) module_stmt_is_import_ = false;
    WalkStmt(s, env);
    if (top) {
      bool is_import = module_stmt_is_import_ || s.kind == StmtKind::kImport;
      if (!is_import && s.kind == StmtKind::kBlock && s.op == "header" && !s.blocks.empty()) {
        is_import = std::all_of(s.blocks[0].begin(), s.blocks[0].end(), [](const auto& x) {
          return x && x->kind == StmtKind::kImport;
        });
      }
      if (is_import) out_.import_ends.push_back(s.end);
    }
    if (top) module_stmt_is_import_ = saved_is_import;
    if (!at_module_ && !inline_queue_.empty()) {
      auto queue = std::move(inline_queue_);
      inline_queue_.clear();
      for (const Function* fn : queue) {
        if (IsHelper(*fn)) continue;
        AnalyzeFunction(*fn, env, class_, scope_);
      }
    }
    anchor_ = saved_anchor;
  }
}

void Interpreter::WalkStmt(const Stmt& s, Env& env) {
  switch (s.kind) {
    case StmtKind::kExpr:
    case StmtKind::kOther:
      for (const auto& v : s.values) {
        if (v) Eval(*v, env);
      }
      break;
    case StmtKind::kAssign:
      WalkAssign(s, env);
      break;
    case StmtKind::kImport:
      WalkImport(s, env);
      break;
    case StmtKind::kReturn: {
      AbsValue v = s.values.empty() ? Of(NullAlt()) : Eval(*s.values[0], env);
      for (std::size_t i = 1; i < s.values.size(); ++i) Eval(*s.values[i], env);
      if (returns_ != nullptr) returns_->push_back(std::move(v));
      break;
    }
    case StmtKind::kFunction: {
      const Function* fn = s.function.get();
      if (fn == nullptr) break;
      NoteFunction(*fn);
      if (language_ == Language::kGo && at_module_ && fn->name == "init") {
        // Package initializers run as module code.
        analyzed_.insert(fn);
        WalkBlock(fn->body, env);
        break;
      }
      if (!fn->name.empty()) aliases_[fn].insert(fn->name);
      if (!at_module_) inline_queue_.push_back(fn);
      break;
    }
    case StmtKind::kClass:
      WalkClass(s, env);
      break;
    case StmtKind::kIf: {
      for (const auto& v : s.values) {
        if (v) Eval(*v, env);
      }
      Env merged;
      bool first = true;
      for (const auto& b : s.blocks) {
        Env branch = env;
        WalkBlock(b, branch);
        merged = first ? std::move(branch) : Merge(merged, branch);
        first = false;
      }
      if (first) break;
      env = s.exhaustive ? std::move(merged) : Merge(env, merged);
      break;
    }
    case StmtKind::kLoop: {
      AbsValue element = Unknown("loop");
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        AbsValue v = Eval(*s.values[i], env);
        if (i == 0 && !s.targets.empty()) {
          AbsValue elems;
          for (const auto& a : v.alts) {
            if (a.kind != Alt::Kind::kArray) continue;
            for (const auto& e : *a.elements) elems = Union(std::move(elems), e);
          }
          if (!elems.empty()) element = elems;
        }
      }
      auto bind = [&](Env& e) {
        if (s.targets.empty()) return;
        // Go range binds index then value; JavaScript and Python bind the element.
        if (language_ == Language::kGo && s.targets.size() == 2) {
          Assign(*s.targets[0], Unknown("index"), e);
          Assign(*s.targets[1], element, e);
        } else {
          for (const auto& t : s.targets) Assign(*t, element, e);
        }
      };
      if (s.blocks.empty()) break;
      Env once = env;
      bind(once);
      WalkBlock(s.blocks[0], once);
      Env twice = Merge(env, once);
      bind(twice);
      WalkBlock(s.blocks[0], twice);
      env = Merge(Merge(env, once), twice);
      for (std::size_t i = 1; i < s.blocks.size(); ++i) WalkBlock(s.blocks[i], env);
      break;
    }
    case StmtKind::kTry: {
      if (s.blocks.empty()) break;
      Env body = env;
      WalkBlock(s.blocks[0], body);
      std::size_t handlers_end = s.blocks.size() - (s.has_finally ? 1 : 0);
      Env merged = body;
      for (std::size_t i = 1; i < handlers_end; ++i) {
        Env handler = Merge(env, body);
        WalkBlock(s.blocks[i], handler);
        merged = Merge(merged, handler);
      }
      if (s.has_finally) WalkBlock(s.blocks.back(), merged);
      env = std::move(merged);
      break;
    }
    case StmtKind::kBlock:
      for (const auto& v : s.values) {
        if (v) Eval(*v, env);
      }
      for (const auto& b : s.blocks) WalkBlock(b, env, s.op == "header");
      break;
  }
}

void Interpreter::WalkAssign(const Stmt& s, Env& env) {
  bool plain = s.op == "=" || s.op == ":=" || s.op == "decl" || s.op == "chain";
  if (!plain) {
    for (std::size_t i = 0; i < s.targets.size() && i < s.values.size(); ++i) {
      AbsValue current = Eval(*s.targets[i], env);
      AbsValue rhs = Eval(*s.values[i], env);
      AbsValue result;
      if (s.op == "+=") {
        for (const auto& l : Scalars(current)) {
          for (const auto& r : Scalars(rhs)) {
            AddAlt(result, ScalarAlt(ValueExpr::Concat({l, r})));
          }
        }
      } else if (s.op == "||=" || s.op == "?\?=") {
        result = Union(WithoutNull(current), rhs);
      } else {
        result = Unknown("op");
      }
      Assign(*s.targets[i], result, env);
    }
    return;
  }
  if (s.targets.size() == s.values.size()) {
    std::vector<AbsValue> values;
    for (const auto& v : s.values) values.push_back(Eval(*v, env));
    for (std::size_t i = 0; i < s.targets.size(); ++i) Assign(*s.targets[i], values[i], env);
  } else if (s.values.size() == 1) {
    AbsValue v = Eval(*s.values[0], env);
    for (const auto& t : s.targets) Assign(*t, v, env);
  } else {
    for (const auto& v : s.values) Eval(*v, env);
    for (const auto& t : s.targets) Assign(*t, Unknown("assign"), env);
  }
}

void Interpreter::Assign(const Expr& target, const AbsValue& value, Env& env) {
  switch (target.kind) {
    case ExprKind::kName: {
      if (target.text == "_") return;
      env[target.text] = value;
      for (const auto& a : value.alts) {
        if (a.kind == Alt::Kind::kFunction) aliases_[a.function].insert(target.text);
      }
      ValueSet scalars;
      for (const auto& a : value.alts) {
        if (a.kind == Alt::Kind::kScalar) scalars.push_back(a.scalar);
      }
      if (!scalars.empty()) {
        auto& slot = out_.assignments[scope_ + ":" + target.text];
        for (const auto& v : scalars) {
          bool dup = std::any_of(slot.begin(), slot.end(),
                                 [&](const ValuePtr& x) { return SameValue(*x, *v); });
          if (!dup) slot.push_back(v);
        }
      }
      return;
    }
    case ExprKind::kMember:
    case ExprKind::kIndex:
      SetPath(target, value, env);
      return;
    case ExprKind::kObject:
      for (std::size_t i = 0; i < target.children.size(); ++i) {
        const std::string& key = i < target.keys.size() ? target.keys[i] : "";
        const Expr& child = *target.children[i];
        if (key == "...") {
          Assign(Unwrap(child), Unknown("rest"), env);
          continue;
        }
        AbsValue field = EvalMember(value, key, child);
        if (child.kind == ExprKind::kBinary && child.text == "=" && child.children.size() == 2) {
          AbsValue def = Eval(*child.children[1], env);
          Assign(*child.children[0], Union(WithoutNull(field), def), env);
        } else {
          Assign(child, field, env);
        }
      }
      return;
    case ExprKind::kArray: {
      for (std::size_t i = 0; i < target.children.size(); ++i) {
        AbsValue element;
        for (const auto& a : value.alts) {
          if (a.kind == Alt::Kind::kArray && i < a.elements->size()) {
            element = Union(std::move(element), (*a.elements)[i]);
          }
        }
        if (element.empty()) element = Unknown("element");
        Assign(Unwrap(*target.children[i]), element, env);
      }
      return;
    }
    case ExprKind::kUnary:
      if (!target.children.empty()) SetPath(*target.children[0], value, env);
      return;
    default:
      return;
  }
}

void Interpreter::SetPath(const Expr& target, const AbsValue& value, Env& env) {
  if (target.kind == ExprKind::kName) {
    Assign(target, value, env);
    return;
  }
  if (target.kind == ExprKind::kKeyword && target.text == "this") {
    env["this"] = value;
    return;
  }
  std::string field;
  if (target.kind == ExprKind::kMember) {
    field = target.text;
  } else if (target.kind == ExprKind::kIndex && target.children.size() == 2) {
    AbsValue idx = Eval(*target.children[1], env);
    auto lit = LiteralOf(idx);
    if (!lit) {
      Eval(*target.children[0], env);
      return;
    }
    field = *lit;
  } else {
    return;
  }
  const Expr& base = *target.children[0];
  if (base.kind != ExprKind::kName && base.kind != ExprKind::kMember &&
      base.kind != ExprKind::kIndex && !(base.kind == ExprKind::kKeyword && base.text == "this")) {
    return;
  }
  AbsValue current = Eval(base, env);
  AbsValue updated;
  for (const auto& a : current.alts) {
    if (a.kind != Alt::Kind::kObject) continue;
    auto fields = *a.fields;
    fields[field] = value;
    AddAlt(updated, ObjectAlt(std::move(fields)));
  }
  if (updated.empty()) {
    // Other alternatives (handles, modules) cannot take fields; a plain
    // value or nothing becomes a fresh object.
    bool objectless = std::all_of(current.alts.begin(), current.alts.end(), [](const Alt& a) {
      return a.kind == Alt::Kind::kScalar || a.kind == Alt::Kind::kNull;
    });
    if (!objectless) return;
    std::map<std::string, AbsValue> fields;
    fields[field] = value;
    updated = Of(ObjectAlt(std::move(fields)));
  }
  SetPath(base, updated, env);
}

void Interpreter::WalkImport(const Stmt& s, Env& env) {
  const std::string& module = s.import.module;
  auto vendors = rules_.VendorsForImport(language_, module);
  Vendor vendor = vendors.empty() ? Vendor::kUnknown : vendors.front();
  for (const auto& b : s.import.bindings) {
    if (b.local.empty()) continue;
    env[b.local] = Of(SymbolAlt(b.member.empty() ? module : module + "." + b.member));
  }
  if (vendor != Vendor::kUnknown) {
    if (s.import.bindings.empty()) {
      out_.imports.push_back({module, "", vendor, Locate(s.begin)});
    }
    for (const auto& b : s.import.bindings) {
      std::string full = b.member.empty() ? module : module + "." + b.member;
      out_.imports.push_back({full, b.local, vendor, Locate(s.begin)});
    }
  }
}

void Interpreter::WalkClass(const Stmt& s, Env& env) {
  auto info = std::make_unique<ClassInfo>();
  info->name = s.name;
  std::map<std::string, AbsValue> fields;
  const Function* ctor = nullptr;
  if (!s.blocks.empty()) {
    Env class_env = env;
    for (const auto& m : s.blocks[0]) {
      if (!m) continue;
      if (m->kind == StmtKind::kFunction && m->function) {
        info->methods[m->function->name] = m->function.get();
        if (m->function->name == "constructor" || m->function->name == "__init__") {
          ctor = m->function.get();
        }
      } else if (m->kind == StmtKind::kAssign) {
        for (std::size_t i = 0; i < m->targets.size() && i < m->values.size(); ++i) {
          AbsValue v = Eval(*m->values[i], class_env);
          if (m->targets[i]->kind == ExprKind::kName) fields[m->targets[i]->text] = v;
        }
      }
    }
  }
  info->self = Of(ObjectAlt(std::move(fields)));
  ClassInfo* cls = info.get();
  classes_.push_back(std::move(info));
  if (ctor != nullptr) {
    NoteFunction(*ctor);
    analyzed_.insert(ctor);
    Env ctor_env = env;
    BindParams(*ctor, nullptr, cls, &cls->self, ctor_env);
    auto saved = std::make_tuple(at_module_, scope_, returns_, class_);
    std::vector<AbsValue> ignored;
    at_module_ = false;
    scope_ = cls->name + "." + ctor->name;
    returns_ = &ignored;
    class_ = cls;
    WalkBlock(ctor->body, ctor_env);
    std::tie(at_module_, scope_, returns_, class_) = saved;
    std::string self_name = language_ == Language::kPython
                                ? (ctor->params.empty() ? "self" : ctor->params[0])
                                : "this";
    auto it = ctor_env.find(self_name);
    if (it != ctor_env.end()) {
      AbsValue self;
      for (const auto& a : it->second.alts) {
        if (a.kind == Alt::Kind::kObject) AddAlt(self, a);
      }
      if (!self.empty()) cls->self = self;
    }
  }
  for (const auto& [name, fn] : cls->methods) {
    if (fn == ctor) continue;
    method_class_[fn] = cls;
  }
  // Methods join the queue in source order.
  if (!s.blocks.empty()) {
    for (const auto& m : s.blocks[0]) {
      if (m && m->kind == StmtKind::kFunction && m->function && m->function.get() != ctor) {
        NoteFunction(*m->function);
      }
    }
  }
  if (!s.name.empty()) env[s.name] = Of(ClassAlt(cls));
}

// ---- expressions ----------------------------------------------------------

AbsValue Interpreter::Eval(const Expr& e, Env& env) {
  switch (e.kind) {
    case ExprKind::kString:
    case ExprKind::kNumber:
      return Scalar(ValueExpr::Literal(e.text));
    case ExprKind::kKeyword:
      if (e.text == "this") return Lookup("this", env);
      if (e.text == "null" || e.text == "None" || e.text == "nil" || e.text == "undefined") {
        return Of(NullAlt());
      }
      if (e.text == "true" || e.text == "false" || e.text == "True" || e.text == "False") {
        return Scalar(ValueExpr::Literal(e.text));
      }
      return Unknown("keyword");
    case ExprKind::kName:
      return Lookup(e.text, env);
    case ExprKind::kTemplate: {
      std::vector<ValueSet> parts;
      for (const auto& c : e.children) {
        if (c->kind == ExprKind::kString) {
          parts.push_back({ValueExpr::Literal(c->text)});
        } else {
          parts.push_back(Scalars(Eval(*c, env)));
        }
      }
      std::vector<ValuePtr> acc{ValueExpr::Literal("")};
      for (const auto& options : parts) {
        if (acc.size() * options.size() > kMaxAlts) return Unknown("alternatives");
        std::vector<ValuePtr> next;
        for (const auto& a : acc) {
          for (const auto& o : options) next.push_back(ValueExpr::Concat({a, o}));
        }
        acc = std::move(next);
      }
      AbsValue out;
      for (auto& v : acc) AddAlt(out, ScalarAlt(v));
      return out;
    }
    case ExprKind::kMember: {
      AbsValue obj = Eval(*e.children[0], env);
      return EvalMember(obj, e.text, e);
    }
    case ExprKind::kIndex: {
      AbsValue obj = Eval(*e.children[0], env);
      AbsValue idx = e.children.size() > 1 ? Eval(*e.children[1], env) : Unknown("slice");
      return EvalIndex(obj, idx, e);
    }
    case ExprKind::kCall:
      return EvalCall(e, env, false);
    case ExprKind::kNew:
      return EvalCall(e, env, true);
    case ExprKind::kBinary: {
      if (e.children.size() != 2) return Unknown("binary");
      const std::string& op = e.text;
      if (op == "=") {
        AbsValue v = Eval(*e.children[1], env);
        Assign(*e.children[0], v, env);
        return v;
      }
      if (op == "||=" || op == "?\?=") {
        AbsValue cur = Eval(*e.children[0], env);
        AbsValue v = Union(WithoutNull(cur), Eval(*e.children[1], env));
        Assign(*e.children[0], v, env);
        return v;
      }
      AbsValue l = Eval(*e.children[0], env);
      AbsValue r = Eval(*e.children[1], env);
      if (op == "+") {
        AbsValue out;
        ValueSet ls = Scalars(l), rs = Scalars(r);
        if (ls.size() * rs.size() > kMaxAlts) return Unknown("alternatives");
        for (const auto& a : ls) {
          for (const auto& b : rs) AddAlt(out, ScalarAlt(ValueExpr::Concat({a, b})));
        }
        return out;
      }
      if (op == "%" && language_ == Language::kPython) {
        std::vector<AbsValue> args;
        bool tuple = false;
        for (const auto& a : r.alts) {
          if (a.kind == Alt::Kind::kArray && r.alts.size() == 1) {
            args = *a.elements;
            tuple = true;
          }
        }
        if (!tuple) args.push_back(r);
        return Format(l, args, true);
      }
      if (op == "||" || op == "??" || op == "or") {
        if (IsNullish(l)) return r;
        return Union(WithoutNull(l), r);
      }
      if (op == "&&" || op == "and") return r;
      return Unknown("operator");
    }
    case ExprKind::kUnary: {
      if (e.children.empty()) return Unknown("unary");
      AbsValue v = Eval(*e.children[0], env);
      const std::string& op = e.text;
      if (op == "&" || op == "*" || op == "await" || op == "range" || op == "...") return v;
      return Unknown("unary");
    }
    case ExprKind::kConditional: {
      if (e.children.size() != 3) return Unknown("conditional");
      Eval(*e.children[0], env);
      AbsValue a = Eval(*e.children[1], env);
      AbsValue b = Eval(*e.children[2], env);
      return Union(std::move(a), b);
    }
    case ExprKind::kObject: {
      bool positional = !e.children.empty() &&
                        std::all_of(e.keys.begin(), e.keys.end(),
                                    [](const std::string& k) { return k.empty(); });
      if (positional && language_ == Language::kGo) {
        std::vector<AbsValue> elements;
        for (const auto& c : e.children) elements.push_back(Eval(*c, env));
        return Of(ArrayAlt(std::move(elements)));
      }
      std::map<std::string, AbsValue> fields;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        const std::string& key = i < e.keys.size() ? e.keys[i] : "";
        AbsValue v = Eval(Unwrap(*e.children[i]), env);
        if (key == "...") {
          for (const auto& a : v.alts) {
            if (a.kind != Alt::Kind::kObject) continue;
            for (const auto& [k, fv] : *a.fields) {
              auto it = fields.find(k);
              fields[k] = it == fields.end() ? fv : Union(it->second, fv);
            }
          }
          continue;
        }
        if (!key.empty()) fields[key] = std::move(v);
      }
      return Of(ObjectAlt(std::move(fields)));
    }
    case ExprKind::kArray: {
      std::vector<AbsValue> elements;
      for (const auto& c : e.children) elements.push_back(Eval(*c, env));
      return Of(ArrayAlt(std::move(elements)));
    }
    case ExprKind::kFunction: {
      const Function* fn = e.function.get();
      if (fn == nullptr) return Unknown("function");
      NoteFunction(*fn);
      if (!fn->name.empty()) aliases_[fn].insert(fn->name);
      if (!at_module_) inline_queue_.push_back(fn);
      return Of(FunctionAlt(fn, !at_module_));
    }
    case ExprKind::kSpread:
      return e.children.empty() ? Unknown("spread") : Eval(*e.children[0], env);
    case ExprKind::kOther: {
      Env scratch = env;
      for (const auto& c : e.children) {
        if (c) Eval(*c, scratch);
      }
      return Unknown(e.text.empty() ? "expression" : e.text);
    }
  }
  return Unknown("expression");
}

AbsValue Interpreter::EvalMember(const AbsValue& object, const std::string& name,
                                 const Expr& where) {
  AbsValue out;
  for (const auto& a : object.alts) {
    switch (a.kind) {
      case Alt::Kind::kSymbol:
        if (language_ == Language::kJavaScript && a.name == "process.env") {
          out = Union(std::move(out), ReadEnvName(name, where));
        } else {
          AddAlt(out, SymbolAlt(a.name + "." + name));
        }
        break;
      case Alt::Kind::kObject: {
        auto it = a.fields->find(name);
        if (it != a.fields->end()) {
          out = Union(std::move(out), it->second);
        } else {
          AddAlt(out, ScalarAlt(ValueExpr::Unknown("field:" + name)));
        }
        break;
      }
      case Alt::Kind::kCommand:
        if (name == "input") AddAlt(out, ObjectAlt(*a.fields));
        break;
      case Alt::Kind::kHandle: {
        const DerivationRule* d =
            pair_ ? pair_->FindDerivation(a.handle->service, a.handle->kind, name, true) : nullptr;
        if (d != nullptr) {
          HandleInfo h = *a.handle;
          h.kind = d->kind;
          AddAlt(out, HandleAlt(std::move(h)));
        }
        break;
      }
      case Alt::Kind::kScalar:
        if (a.scalar->kind == ValueKind::kParam) {
          AddAlt(out, ScalarAlt(ValueExpr::Param(a.scalar->text + "." + name)));
        } else {
          AddAlt(out, ScalarAlt(ValueExpr::Unknown("member:" + name)));
        }
        break;
      default:
        break;
    }
  }
  if (out.empty()) return Unknown("member:" + name);
  return out;
}

AbsValue Interpreter::EvalIndex(const AbsValue& object, const AbsValue& index, const Expr& where) {
  auto lit = LiteralOf(index);
  AbsValue out;
  for (const auto& a : object.alts) {
    if (a.kind == Alt::Kind::kSymbol && lit &&
        (a.name == "process.env" || a.name == "os.environ")) {
      out = Union(std::move(out), ReadEnvName(*lit, where));
    } else if (a.kind == Alt::Kind::kArray && lit) {
      bool digits = !lit->empty() && std::all_of(lit->begin(), lit->end(), ::isdigit);
      std::size_t i = digits ? std::stoul(*lit) : a.elements->size();
      if (i < a.elements->size()) {
        out = Union(std::move(out), (*a.elements)[i]);
      } else {
        AddAlt(out, ScalarAlt(ValueExpr::Unknown("element")));
      }
    } else if (a.kind == Alt::Kind::kScalar && a.scalar->kind == ValueKind::kParam) {
      AddAlt(out, ScalarAlt(ValueExpr::Param(a.scalar->text + "." + (lit ? *lit : "[]"))));
    } else if (lit && (a.kind == Alt::Kind::kObject || a.kind == Alt::Kind::kSymbol)) {
      out = Union(std::move(out), EvalMember(Of(a), *lit, where));
    }
  }
  if (out.empty()) return Unknown("index");
  return out;
}

Interpreter::CallArgs Interpreter::EvalArgs(const Expr& call, std::size_t first, Env& env) {
  CallArgs args;
  for (std::size_t i = first; i < call.children.size(); ++i) {
    const Expr& child = *call.children[i];
    std::string key = CallKey(call, i);
    if (key == "**") {
      args.spreads.push_back(Eval(Unwrap(child), env));
    } else if (key == "*" || child.kind == ExprKind::kSpread) {
      Eval(Unwrap(child), env);
      args.positional.push_back(Unknown("spread"));
      args.positional_exprs.push_back(&child);
    } else if (!key.empty()) {
      args.keywords.emplace_back(key, Eval(child, env));
    } else {
      args.positional.push_back(Eval(child, env));
      args.positional_exprs.push_back(&child);
    }
  }
  return args;
}

AbsValue Interpreter::EvalCall(const Expr& e, Env& env, bool is_new) {
  if (e.children.empty()) return Unknown("call");
  const Expr& callee = *e.children[0];
  if (callee.kind == ExprKind::kMember && !callee.children.empty()) {
    const Expr& recv_expr = *callee.children[0];
    AbsValue recv = Eval(recv_expr, env);
    CallArgs args = EvalArgs(e, 1, env);
    bool self_call = (recv_expr.kind == ExprKind::kKeyword && recv_expr.text == "this") ||
                     (recv_expr.kind == ExprKind::kName && language_ == Language::kPython &&
                      recv_expr.text == "self");
    if (self_call && class_ != nullptr) {
      auto it = class_->methods.find(callee.text);
      if (it != class_->methods.end()) {
        return Expand(*it->second, args, globals_, class_, &recv, Locate(callee.name_offset));
      }
    }
    return CallMethod(recv, callee.text, args, e, callee, env);
  }
  if (callee.kind == ExprKind::kName) {
    const std::string& name = callee.text;
    if (language_ == Language::kJavaScript && name == "require" && !env.count(name)) {
      CallArgs args = EvalArgs(e, 1, env);
      auto module = args.positional.empty() ? std::nullopt : LiteralOf(args.positional[0]);
      if (!module) {
        Finding("dynamic-import", "require() with a computed module name", e.begin);
        return Unknown("require");
      }
      if (at_module_) module_stmt_is_import_ = true;
      auto vendors = rules_.VendorsForImport(language_, *module);
      if (!vendors.empty()) out_.imports.push_back({*module, "", vendors.front(), Locate(e.begin)});
      return Of(SymbolAlt(*module));
    }
    if (name == kGuardName || name == kPyGuardName) {
      CallArgs args = EvalArgs(e, 1, env);
      if (args.positional.empty()) return Unknown("guard");
      AbsValue guarded;
      for (const auto& a : args.positional[0].alts) {
        if (a.kind == Alt::Kind::kHandle) {
          HandleInfo h = *a.handle;
          h.guarded = true;
          AddAlt(guarded, HandleAlt(std::move(h)));
        } else {
          AddAlt(guarded, a);
        }
      }
      std::uint32_t begin = args.positional_exprs[0]->begin;
      for (auto& c : out_.constructions) {
        if (c.begin == begin) c.guarded = true;
      }
      return guarded;
    }
    if ((language_ == Language::kJavaScript && name == "String") ||
        (language_ == Language::kPython && name == "str")) {
      CallArgs args = EvalArgs(e, 1, env);
      if (args.positional.empty()) return Scalar(ValueExpr::Literal(""));
      return Of(ScalarAlt(Scalars(args.positional[0]).front()));
    }
    AbsValue fn = Lookup(name, env);
    CallArgs args = EvalArgs(e, 1, env);
    AbsValue out;
    for (const auto& a : fn.alts) {
      if (a.kind == Alt::Kind::kSymbol) {
        out = Union(std::move(out), CallSymbol(a.name, args, e, is_new));
      } else if (a.kind == Alt::Kind::kFunction) {
        const Env& base = (a.nested || at_module_) ? env : globals_;
        out = Union(std::move(out),
                    Expand(*a.function, args, base, nullptr, nullptr, Locate(callee.begin)));
      } else if (a.kind == Alt::Kind::kClass) {
        out = Union(std::move(out), a.cls->self);
      }
    }
    if (out.empty()) return Unknown("call:" + name);
    return out;
  }
  AbsValue fn = Eval(callee, env);
  CallArgs args = EvalArgs(e, 1, env);
  AbsValue out;
  for (const auto& a : fn.alts) {
    if (a.kind == Alt::Kind::kSymbol) out = Union(std::move(out), CallSymbol(a.name, args, e, is_new));
    if (a.kind == Alt::Kind::kClass) out = Union(std::move(out), a.cls->self);
  }
  if (out.empty()) return Unknown("call");
  return out;
}

AbsValue Interpreter::CallSymbol(const std::string& symbol, const CallArgs& args, const Expr& call,
                                 bool /*is_new*/) {
  if (pair_ != nullptr) {
    if (const ConstructorRule* ctor = pair_->FindConstructor(symbol)) {
      return Construct(*ctor, symbol, args, call);
    }
    if (Contains(pair_->transparent, symbol)) {
      return args.positional.empty() ? Unknown("call") : args.positional[0];
    }
    if (!pair_->send_method.empty()) {
      auto dot = symbol.rfind('.');
      std::string last = dot == std::string::npos ? symbol : symbol.substr(dot + 1);
      const std::string& suffix = pair_->command_suffix;
      if (last.size() > suffix.size() &&
          last.compare(last.size() - suffix.size(), suffix.size(), suffix) == 0) {
        std::map<std::string, AbsValue> input;
        if (!args.positional.empty()) {
          for (const auto& a : args.positional[0].alts) {
            if (a.kind != Alt::Kind::kObject) continue;
            for (const auto& [k, v] : *a.fields) {
              auto it = input.find(k);
              input[k] = it == input.end() ? v : Union(it->second, v);
            }
          }
        }
        return Of(CommandAlt(LowerFirst(last.substr(0, last.size() - suffix.size())),
                             std::move(input)));
      }
    }
  }
  if ((language_ == Language::kPython &&
       (symbol == "os.getenv" || symbol == "os.environ.get")) ||
      (language_ == Language::kGo && (symbol == "os.Getenv" || symbol == "os.LookupEnv"))) {
    return EnvRead(args, call);
  }
  if (language_ == Language::kGo && symbol == "fmt.Sprintf" && !args.positional.empty()) {
    std::vector<AbsValue> rest(args.positional.begin() + 1, args.positional.end());
    return Format(args.positional[0], rest, true);
  }
  if (language_ == Language::kPython && symbol == "os.path.join") {
    std::vector<ValuePtr> parts;
    AbsValue out;
    std::vector<ValuePtr> acc{ValueExpr::Literal("")};
    for (std::size_t i = 0; i < args.positional.size(); ++i) {
      ValueSet options = Scalars(args.positional[i]);
      if (acc.size() * options.size() > kMaxAlts) return Unknown("alternatives");
      std::vector<ValuePtr> next;
      for (const auto& a : acc) {
        for (const auto& o : options) {
          next.push_back(i == 0 ? o : ValueExpr::Concat({a, ValueExpr::Literal("/"), o}));
        }
      }
      acc = std::move(next);
    }
    for (auto& v : acc) AddAlt(out, ScalarAlt(v));
    return out;
  }
  return Unknown("call:" + symbol);
}

AbsValue Interpreter::Construct(const ConstructorRule& rule, const std::string& symbol,
                                const CallArgs& args, const Expr& call) {
  std::string service = rule.service;
  if (rule.service_arg) {
    std::optional<std::string> name;
    std::size_t idx = static_cast<std::size_t>(*rule.service_arg);
    if (idx < args.positional.size()) name = LiteralOf(args.positional[idx]);
    for (const auto& [k, v] : args.keywords) {
      if (k == "service_name") name = LiteralOf(v);
    }
    auto it = name ? rule.service_map.find(*name) : rule.service_map.end();
    if (it == rule.service_map.end()) {
      Finding("unknown-service",
              symbol + "(" + (name ? "'" + *name + "'" : std::string("<dynamic>")) +
                  ") does not name a supported service",
              call.begin);
      return Unknown("client");
    }
    service = it->second;
  }
  HandleInfo h;
  h.service = service;
  h.kind = rule.kind;
  h.command_style = rule.command_style;
  h.origin = Locate(call.begin);
  if (construction_offsets_.insert(call.begin).second) {
    ClientConstruction c;
    c.service = service;
    c.symbol = symbol;
    c.location = Locate(call.begin);
    c.begin = call.begin;
    c.end = call.end;
    out_.constructions.push_back(c);
  }
  return Of(HandleAlt(std::move(h)));
}

AbsValue Interpreter::CallMethod(const AbsValue& receiver, const std::string& method,
                                 const CallArgs& args, const Expr& call, const Expr& member,
                                 Env& env) {
  AbsValue out;
  for (const auto& a : receiver.alts) {
    switch (a.kind) {
      case Alt::Kind::kHandle:
        out = Union(std::move(out), CallHandleMethod(a, method, args, call, member));
        break;
      case Alt::Kind::kSymbol:
        out = Union(std::move(out), CallSymbol(a.name + "." + method, args, call, false));
        break;
      case Alt::Kind::kObject: {
        auto it = a.fields->find(method);
        if (it == a.fields->end()) break;
        for (const auto& f : it->second.alts) {
          if (f.kind == Alt::Kind::kFunction) {
            const Env& base = (f.nested || at_module_) ? env : globals_;
            out = Union(std::move(out),
                        Expand(*f.function, args, base, nullptr, nullptr, Locate(member.name_offset)));
          } else if (f.kind == Alt::Kind::kHandle) {
            // A stored client called directly is not a method call.
          }
        }
        break;
      }
      case Alt::Kind::kScalar:
        if (language_ == Language::kPython && method == "format") {
          std::vector<AbsValue> positional = args.positional;
          out = Union(std::move(out), Format(Of(a), positional, false));
        } else if (language_ == Language::kPython && method == "join" &&
                   !args.positional.empty()) {
          for (const auto& list : args.positional[0].alts) {
            if (list.kind != Alt::Kind::kArray) continue;
            std::vector<ValuePtr> parts;
            bool single = true;
            for (std::size_t i = 0; i < list.elements->size(); ++i) {
              ValueSet s = Scalars((*list.elements)[i]);
              single = single && s.size() == 1;
              if (i) parts.push_back(a.scalar);
              parts.push_back(s.front());
            }
            if (single) AddAlt(out, ScalarAlt(ValueExpr::Concat(parts)));
          }
        } else if (method == "strip" || method == "trim" || method == "lower" ||
                   method == "toLowerCase" || method == "upper" || method == "toUpperCase") {
          if (a.scalar->kind == ValueKind::kLiteral) {
            AddAlt(out, ScalarAlt(ValueExpr::Unknown("call:" + method)));
          }
        }
        break;
      case Alt::Kind::kArray:
        if (language_ == Language::kJavaScript && method == "join") {
          std::optional<std::string> sep =
              args.positional.empty() ? std::optional<std::string>(",")
                                      : LiteralOf(args.positional[0]);
          if (!sep) break;
          std::vector<ValuePtr> parts;
          bool single = true;
          for (std::size_t i = 0; i < a.elements->size(); ++i) {
            ValueSet s = Scalars((*a.elements)[i]);
            single = single && s.size() == 1;
            if (i) parts.push_back(ValueExpr::Literal(*sep));
            parts.push_back(s.front());
          }
          if (single) AddAlt(out, ScalarAlt(ValueExpr::Concat(parts)));
        }
        break;
      default:
        break;
    }
  }
  if (out.empty()) return Unknown("call:" + method);
  return out;
}

AbsValue Interpreter::CallHandleMethod(const Alt& alt, const std::string& method,
                                       const CallArgs& args, const Expr& call,
                                       const Expr& member) {
  if (pair_ == nullptr) return Unknown("result");
  const HandleInfo& h = *alt.handle;
  if (h.command_style && method == pair_->send_method) {
    bool any = false;
    if (!args.positional.empty()) {
      for (const auto& c : args.positional[0].alts) {
        if (c.kind != Alt::Kind::kCommand) continue;
        any = true;
        std::map<std::string, ValueSet> params;
        for (const auto& [k, v] : *c.fields) params[k] = Scalars(v);
        RecordSite(h, c.name, params, args, call, member);
      }
    }
    if (!any) RecordSite(h, method, {}, args, call, member);
    return Unknown("result");
  }
  if (const DerivationRule* d = pair_->FindDerivation(h.service, h.kind, method, false)) {
    HandleInfo derived = h;
    derived.kind = d->kind;
    for (std::size_t i = 0; i < d->bind.size(); ++i) {
      const std::string& slot = d->bind[i];
      AbsValue value;
      for (const auto& [k, v] : args.keywords) {
        if (k == slot) value = v;
      }
      if (value.empty() && i < args.positional.size()) value = args.positional[i];
      if (value.empty()) value = Unknown("missing:" + slot);
      derived.binds[slot] = Scalars(value);
    }
    return Of(HandleAlt(std::move(derived)));
  }
  auto vm = pair_->value_methods.find(method);
  if (vm != pair_->value_methods.end()) {
    std::size_t idx = static_cast<std::size_t>(vm->second);
    return idx < args.positional.size() ? args.positional[idx] : Unknown("value");
  }
  if (Contains(pair_->passthrough, method)) return Unknown("result");
  RecordSite(h, method, {}, args, call, member);
  return Unknown("result");
}

std::map<std::string, ValueSet> Interpreter::SiteParams(const HandleInfo& h, const ActionRule* rule,
                                                        const CallArgs& args) const {
  std::map<std::string, ValueSet> params;
  auto put = [&](const std::string& k, const AbsValue& v) {
    ValueSet& slot = params[k];
    for (const auto& s : Scalars(v)) {
      bool dup = std::any_of(slot.begin(), slot.end(),
                             [&](const ValuePtr& x) { return SameValue(*x, *s); });
      if (!dup) slot.push_back(s);
    }
  };
  if (language_ != Language::kPython) {
    for (const auto& arg : args.positional) {
      bool found = false;
      for (const auto& a : arg.alts) {
        if (a.kind != Alt::Kind::kObject) continue;
        found = true;
        for (const auto& [k, v] : *a.fields) put(k, v);
      }
      if (found) break;
    }
  }
  for (const auto& spread : args.spreads) {
    for (const auto& a : spread.alts) {
      if (a.kind != Alt::Kind::kObject) continue;
      for (const auto& [k, v] : *a.fields) put(k, v);
    }
  }
  for (const auto& [k, v] : args.keywords) {
    params.erase(k);
    put(k, v);
  }
  if (rule != nullptr) {
    for (std::size_t i = 0; i < rule->positional.size() && i < args.positional.size(); ++i) {
      const std::string& name = rule->positional[i];
      bool keyword = std::any_of(args.keywords.begin(), args.keywords.end(),
                                 [&](const auto& kv) { return kv.first == name; });
      if (keyword) continue;
      params.erase(name);
      put(name, args.positional[i]);
    }
  }
  for (const auto& [k, vs] : h.binds) params[k] = vs;
  return params;
}

void Interpreter::RecordSite(const HandleInfo& h, const std::string& method,
                             const std::map<std::string, ValueSet>& extra, const CallArgs& args,
                             const Expr& call, const Expr& member) {
  std::string m = method;
  for (const auto& suffix : pair_->method_suffixes) {
    if (m.size() > suffix.size() &&
        m.compare(m.size() - suffix.size(), suffix.size(), suffix) == 0) {
      m = m.substr(0, m.size() - suffix.size());
      break;
    }
  }
  std::string qualified = h.kind == "client" ? m : h.kind + "." + m;
  const ActionRule* rule = pair_->FindAction(h.service, qualified);
  auto params = SiteParams(h, rule, args);
  for (const auto& [k, vs] : extra) {
    if (!h.binds.count(k)) params[k] = vs;
  }

  bool guarded = h.guarded;
  if (language_ == Language::kGo) {
    guarded = false;
    auto it = go_checks_.find(anchor_);
    if (it != go_checks_.end()) {
      for (const auto& [svc, meth] : it->second) {
        if (svc == h.service && meth == qualified) guarded = true;
      }
    }
  }

  std::uint32_t via_key = via_ ? (via_->line << 12) + via_->column : 0;
  auto key = std::make_tuple(member.name_offset, via_key, h.service, qualified);
  auto found = site_index_.find(key);
  if (found != site_index_.end()) {
    ServiceCallSite& site = out_.call_sites[found->second];
    for (const auto& [k, vs] : params) {
      ValueSet& slot = site.params[k];
      for (const auto& v : vs) {
        bool dup = std::any_of(slot.begin(), slot.end(),
                               [&](const ValuePtr& x) { return SameValue(*x, *v); });
        if (!dup && slot.size() < kMaxAlts) slot.push_back(v);
      }
    }
    site.guarded = site.guarded && guarded;
    return;
  }
  ServiceCallSite site;
  const Expr& receiver = *member.children[0];
  site.client = Text(receiver);
  site.service = h.service;
  site.method = qualified;
  site.known_method = rule != nullptr;
  site.params = std::move(params);
  site.location = Locate(member.name_offset);
  site.offset = member.name_offset;
  site.via = via_;
  site.client_origin = h.origin;
  site.guarded = guarded;
  site.call_begin = call.begin;
  site.call_end = call.end;
  site.receiver_begin = receiver.begin;
  site.receiver_end = receiver.end;
  site.anchor = anchor_;
  for (std::size_t i = 0; i < args.positional.size(); ++i) {
    bool object = std::any_of(args.positional[i].alts.begin(), args.positional[i].alts.end(),
                              [](const Alt& a) {
                                return a.kind == Alt::Kind::kObject || a.kind == Alt::Kind::kCommand;
                              });
    if (object) {
      site.input = std::make_pair(args.positional_exprs[i]->begin, args.positional_exprs[i]->end);
      break;
    }
  }
  site_index_[key] = out_.call_sites.size();
  out_.call_sites.push_back(std::move(site));
}

AbsValue Interpreter::Format(const AbsValue& format, const std::vector<AbsValue>& args,
                             bool percent) {
  AbsValue out;
  for (const auto& a : format.alts) {
    if (a.kind != Alt::Kind::kScalar || a.scalar->kind != ValueKind::kLiteral) {
      AddAlt(out, ScalarAlt(ValueExpr::Unknown("format")));
      continue;
    }
    const std::string& f = a.scalar->text;
    std::vector<ValueSet> parts;
    std::string lit;
    std::size_t next = 0;
    auto arg = [&](std::size_t i) -> ValueSet {
      return i < args.size() ? Scalars(args[i]) : ValueSet{ValueExpr::Unknown("format-arg")};
    };
    for (std::size_t i = 0; i < f.size(); ++i) {
      char c = f[i];
      if (percent && c == '%') {
        if (i + 1 < f.size() && f[i + 1] == '%') {
          lit += '%';
          ++i;
          continue;
        }
        std::size_t j = i + 1;
        while (j < f.size() && std::string_view("+-# 0123456789.").find(f[j]) != std::string::npos) ++j;
        if (j >= f.size()) {
          lit += c;
          continue;
        }
        parts.push_back({ValueExpr::Literal(lit)});
        lit.clear();
        parts.push_back(arg(next++));
        i = j;
      } else if (!percent && c == '{') {
        if (i + 1 < f.size() && f[i + 1] == '{') {
          lit += '{';
          ++i;
          continue;
        }
        auto close = f.find('}', i);
        if (close == std::string::npos) {
          lit += c;
          continue;
        }
        std::string field = f.substr(i + 1, close - i - 1);
        field = field.substr(0, field.find_first_of(":!"));
        parts.push_back({ValueExpr::Literal(lit)});
        lit.clear();
        if (field.empty()) {
          parts.push_back(arg(next++));
        } else if (std::all_of(field.begin(), field.end(), ::isdigit)) {
          parts.push_back(arg(std::stoul(field)));
        } else {
          parts.push_back({ValueExpr::Unknown("format-field")});
        }
        i = close;
      } else if (!percent && c == '}' && i + 1 < f.size() && f[i + 1] == '}') {
        lit += '}';
        ++i;
      } else {
        lit += c;
      }
    }
    parts.push_back({ValueExpr::Literal(lit)});
    std::vector<ValuePtr> acc{ValueExpr::Literal("")};
    for (const auto& options : parts) {
      if (acc.size() * options.size() > kMaxAlts) {
        acc = {ValueExpr::Unknown("alternatives")};
        break;
      }
      std::vector<ValuePtr> grown;
      for (const auto& x : acc) {
        for (const auto& o : options) grown.push_back(ValueExpr::Concat({x, o}));
      }
      acc = std::move(grown);
    }
    for (auto& v : acc) AddAlt(out, ScalarAlt(v));
  }
  if (out.empty()) return Unknown("format");
  return out;
}

AbsValue Interpreter::EnvRead(const CallArgs& args, const Expr& where) {
  auto name = args.positional.empty() ? std::nullopt : LiteralOf(args.positional[0]);
  if (!name) return Unknown("env-dynamic");
  AbsValue v = ReadEnvName(*name, where);
  if (args.positional.size() > 1) v = Union(std::move(v), args.positional[1]);
  for (const auto& [k, d] : args.keywords) {
    if (k == "default") v = Union(std::move(v), d);
  }
  return v;
}

AbsValue Interpreter::ReadEnvName(const std::string& name, const Expr& where) {
  if (env_read_offsets_.insert({name, where.begin}).second) {
    out_.env_reads[name].push_back(Locate(where.begin));
  }
  return Scalar(ValueExpr::Env(name));
}

// ---- helpers --------------------------------------------------------------

std::string Interpreter::Text(const Expr& e) const {
  if (e.end <= e.begin || e.end > unit_.text.size()) return "";
  return unit_.text.substr(e.begin, e.end - e.begin);
}

SourceLocation Interpreter::Locate(std::uint32_t offset) const {
  return unit_.line_index.Locate(offset);
}

ValueSet Interpreter::Scalars(const AbsValue& v) const {
  ValueSet out;
  bool null_only = !v.alts.empty();
  for (const auto& a : v.alts) {
    if (a.kind == Alt::Kind::kNull) continue;
    null_only = false;
    ValuePtr s = a.kind == Alt::Kind::kScalar ? a.scalar : ValueExpr::Unknown("object");
    bool dup = std::any_of(out.begin(), out.end(), [&](const ValuePtr& x) { return SameValue(*x, *s); });
    if (!dup) out.push_back(s);
  }
  if (out.empty()) out.push_back(ValueExpr::Unknown(null_only ? "null" : "undefined"));
  return out;
}

std::optional<std::string> Interpreter::LiteralOf(const AbsValue& v) const {
  if (v.alts.size() != 1 || v.alts[0].kind != Alt::Kind::kScalar) return std::nullopt;
  if (v.alts[0].scalar->kind != ValueKind::kLiteral) return std::nullopt;
  return v.alts[0].scalar->text;
}

AbsValue Interpreter::Lookup(const std::string& name, const Env& env) const {
  auto it = env.find(name);
  if (it != env.end()) return it->second;
  if (language_ == Language::kJavaScript && name == "process") return Of(SymbolAlt("process"));
  if (language_ == Language::kJavaScript && name == "undefined") return Of(NullAlt());
  return Unknown("name:" + name);
}

void Interpreter::Finding(const std::string& kind, const std::string& message,
                          std::uint32_t offset) {
  SourceLocation loc = Locate(offset);
  for (const auto& f : out_.findings) {
    if (f.kind == kind && f.location == loc) return;
  }
  out_.findings.push_back({kind, message, loc});
}

}  // namespace privscope::detail

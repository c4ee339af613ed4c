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

#include "privscope/source/value.h"

#include "privscope/common/error.h"

namespace privscope {
namespace {

ValuePtr Make(ValueKind kind, std::string text) {
  auto v = std::make_shared<ValueExpr>();
  v->kind = kind;
  v->text = std::move(text);
  return v;
}

void Flatten(const ValuePtr& v, std::vector<ValuePtr>& out) {
  if (v->kind == ValueKind::kConcat) {
    for (const auto& p : v->parts) Flatten(p, out);
    return;
  }
  if (v->kind == ValueKind::kLiteral) {
    if (v->text.empty()) return;
    if (!out.empty() && out.back()->kind == ValueKind::kLiteral) {
      out.back() = Make(ValueKind::kLiteral, out.back()->text + v->text);
      return;
    }
  }
  out.push_back(v);
}

bool IsStaticLeaf(const ValueExpr& v) {
  return v.kind == ValueKind::kLiteral || v.kind == ValueKind::kEnvRef;
}

std::string RenderLeaf(const ValueExpr& v) {
  return v.kind == ValueKind::kEnvRef ? "${" + v.text + "}" : v.text;
}

}  // namespace

ValuePtr ValueExpr::Literal(std::string value) { return Make(ValueKind::kLiteral, std::move(value)); }
ValuePtr ValueExpr::Env(std::string name) { return Make(ValueKind::kEnvRef, std::move(name)); }
ValuePtr ValueExpr::Param(std::string path) { return Make(ValueKind::kParam, std::move(path)); }
ValuePtr ValueExpr::Unknown(std::string origin) { return Make(ValueKind::kUnknown, std::move(origin)); }

ValuePtr ValueExpr::Concat(const std::vector<ValuePtr>& parts) {
  std::vector<ValuePtr> flat;
  for (const auto& p : parts) Flatten(p, flat);
  if (flat.empty()) return Literal("");
  if (flat.size() == 1) return flat.front();
  auto v = std::make_shared<ValueExpr>();
  v->kind = ValueKind::kConcat;
  v->parts = std::move(flat);
  return v;
}

std::string_view ValueKindName(ValueKind kind) {
  switch (kind) {
    case ValueKind::kLiteral: return "literal";
    case ValueKind::kEnvRef: return "env";
    case ValueKind::kConcat: return "concat";
    case ValueKind::kParam: return "param";
    case ValueKind::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string_view ResolvabilityName(Resolvability r) {
  switch (r) {
    case Resolvability::kStatic: return "static";
    case Resolvability::kPrefix: return "prefix";
    case Resolvability::kDynamic: return "dynamic";
  }
  return "dynamic";
}

std::vector<const ValueExpr*> Leaves(const ValueExpr& value) {
  std::vector<const ValueExpr*> out;
  if (value.kind != ValueKind::kConcat) {
    out.push_back(&value);
    return out;
  }
  for (const auto& p : value.parts) {
    for (const ValueExpr* leaf : Leaves(*p)) out.push_back(leaf);
  }
  return out;
}

Resolvability ResolvabilityOf(const ValueExpr& value) {
  auto leaves = Leaves(value);
  bool all_static = true;
  for (const ValueExpr* leaf : leaves) all_static = all_static && IsStaticLeaf(*leaf);
  if (all_static) return Resolvability::kStatic;
  return IsStaticLeaf(*leaves.front()) ? Resolvability::kPrefix : Resolvability::kDynamic;
}

std::string RenderPattern(const ValueExpr& value) {
  std::string out;
  for (const ValueExpr* leaf : Leaves(value)) {
    if (!IsStaticLeaf(*leaf)) return out + "*";
    out += RenderLeaf(*leaf);
  }
  return out;
}

std::vector<std::string> EnvNames(const ValueExpr& value) {
  std::vector<std::string> out;
  for (const ValueExpr* leaf : Leaves(value)) {
    if (leaf->kind == ValueKind::kEnvRef) out.push_back(leaf->text);
  }
  return out;
}

bool SameValue(const ValueExpr& a, const ValueExpr& b) {
  if (a.kind != b.kind || a.text != b.text || a.parts.size() != b.parts.size()) return false;
  for (std::size_t i = 0; i < a.parts.size(); ++i) {
    if (!SameValue(*a.parts[i], *b.parts[i])) return false;
  }
  return true;
}

std::string ValueKey(const ValueExpr& value) {
  if (value.kind == ValueKind::kConcat) {
    std::string out = "concat(";
    for (std::size_t i = 0; i < value.parts.size(); ++i) {
      if (i) out += ",";
      out += ValueKey(*value.parts[i]);
    }
    return out + ")";
  }
  return std::string(ValueKindName(value.kind)) + ":" + CompactJson(value.text);
}

Json ValueToJson(const ValueExpr& value) {
  Json j;
  j["kind"] = std::string(ValueKindName(value.kind));
  switch (value.kind) {
    case ValueKind::kLiteral: j["value"] = value.text; break;
    case ValueKind::kEnvRef: j["name"] = value.text; break;
    case ValueKind::kParam: j["path"] = value.text; break;
    case ValueKind::kUnknown: j["origin"] = value.text; break;
    case ValueKind::kConcat: {
      Json parts = Json::array();
      for (const auto& p : value.parts) parts.push_back(ValueToJson(*p));
      j["parts"] = std::move(parts);
      break;
    }
  }
  return j;
}

ValuePtr ValueFromJson(const Json& json) {
  std::string kind = json.at("kind").get<std::string>();
  if (kind == "literal") return ValueExpr::Literal(json.at("value").get<std::string>());
  if (kind == "env") return ValueExpr::Env(json.at("name").get<std::string>());
  if (kind == "param") return ValueExpr::Param(json.at("path").get<std::string>());
  if (kind == "unknown") return ValueExpr::Unknown(json.at("origin").get<std::string>());
  if (kind == "concat") {
    std::vector<ValuePtr> parts;
    for (const auto& p : json.at("parts")) parts.push_back(ValueFromJson(p));
    return ValueExpr::Concat(parts);
  }
  throw Error(ErrorCode::kIo, "unknown value kind " + kind);
}

}  // namespace privscope

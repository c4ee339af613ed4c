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

#ifndef PRIVSCOPE_SOURCE_VALUE_H_
#define PRIVSCOPE_SOURCE_VALUE_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "privscope/common/io.h"

namespace privscope {

enum class ValueKind { kLiteral, kEnvRef, kConcat, kParam, kUnknown };
enum class Resolvability { kStatic, kPrefix, kDynamic };

struct ValueExpr;
using ValuePtr = std::shared_ptr<const ValueExpr>;

// Symbolic string value. Trees are immutable and shared. A Concat always
// has at least two parts, never nests another Concat and never holds two
// adjacent or empty literals.
struct ValueExpr {
  ValueKind kind = ValueKind::kUnknown;
  // Literal: the value. EnvRef: variable name. Param: dotted access path
  // such as "event.key". Unknown: short origin tag.
  std::string text;
  std::vector<ValuePtr> parts;

  static ValuePtr Literal(std::string value);
  static ValuePtr Env(std::string name);
  static ValuePtr Param(std::string path);
  static ValuePtr Unknown(std::string origin);
  // Normalizing constructor: flattens, folds literals, drops empty ones.
  // Zero parts give Literal(""), one part is returned as is.
  static ValuePtr Concat(const std::vector<ValuePtr>& parts);
};

std::string_view ValueKindName(ValueKind kind);
std::string_view ResolvabilityName(Resolvability r);

Resolvability ResolvabilityOf(const ValueExpr& value);

// Leaves in order; a non-Concat value is its own single leaf.
std::vector<const ValueExpr*> Leaves(const ValueExpr& value);

// Resource pattern text: literals verbatim, env refs as ${NAME}. Static
// values render whole; Prefix values render their static head plus "*";
// Dynamic values render "*".
std::string RenderPattern(const ValueExpr& value);

// Env names referenced anywhere in the tree, in order of appearance.
std::vector<std::string> EnvNames(const ValueExpr& value);

bool SameValue(const ValueExpr& a, const ValueExpr& b);
// Stable one-line form used for ordering and dedup.
std::string ValueKey(const ValueExpr& value);

Json ValueToJson(const ValueExpr& value);
ValuePtr ValueFromJson(const Json& json);

}  // namespace privscope

#endif  // PRIVSCOPE_SOURCE_VALUE_H_

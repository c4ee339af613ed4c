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

#ifndef PRIVSCOPE_COMMON_SCHEMA_H_
#define PRIVSCOPE_COMMON_SCHEMA_H_

#include <string>
#include <vector>

#include "privscope/common/io.h"

namespace privscope {

// Validates a document against the JSON Schema subset used by the in-repo
// schema files: type, enum, const, required, properties,
// additionalProperties, items, minItems, minLength, pattern, anyOf and local
// "#/definitions/..." references. Unknown keywords are ignored.
class SchemaValidator {
 public:
  explicit SchemaValidator(Json schema) : root_(std::move(schema)) {}

  // Empty result means the document conforms. Each entry is
  // "<json-pointer>: <problem>".
  std::vector<std::string> Validate(const Json& document) const;

 private:
  void Check(const Json& schema, const Json& value, const std::string& where,
             std::vector<std::string>& out) const;
  const Json& Resolve(const Json& schema) const;

  Json root_;
};

}  // namespace privscope

#endif  // PRIVSCOPE_COMMON_SCHEMA_H_

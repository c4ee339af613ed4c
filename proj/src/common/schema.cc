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

#include "privscope/common/schema.h"

#include <regex>

#include "privscope/common/error.h"

namespace privscope {
namespace {

bool MatchesType(const std::string& type, const Json& value) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "boolean") return value.is_boolean();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "null") return value.is_null();
  return false;
}

}  // namespace

std::vector<std::string> SchemaValidator::Validate(const Json& document) const {
  std::vector<std::string> out;
  Check(root_, document, "", out);
  return out;
}

const Json& SchemaValidator::Resolve(const Json& schema) const {
  const Json* current = &schema;
  for (int depth = 0; depth < 16; ++depth) {
    if (!current->is_object() || !current->contains("$ref")) return *current;
    std::string ref = (*current)["$ref"].get<std::string>();
    if (ref.rfind("#/", 0) != 0) {
      throw Error(ErrorCode::kInvalidRules, "unsupported schema $ref " + ref);
    }
    current = &root_.at(Json::json_pointer(ref.substr(1)));
  }
  throw Error(ErrorCode::kInvalidRules, "schema $ref chain too deep");
}

void SchemaValidator::Check(const Json& raw_schema, const Json& value,
                            const std::string& where,
                            std::vector<std::string>& out) const {
  const Json& schema = Resolve(raw_schema);
  if (!schema.is_object()) return;
  const std::string at = where.empty() ? "/" : where;

  if (auto it = schema.find("type"); it != schema.end()) {
    bool ok = false;
    if (it->is_string()) {
      ok = MatchesType(it->get<std::string>(), value);
    } else {
      for (const auto& t : *it) ok = ok || MatchesType(t.get<std::string>(), value);
    }
    if (!ok) {
      out.push_back(at + ": expected type " + it->dump());
      return;
    }
  }
  if (auto it = schema.find("const"); it != schema.end() && *it != value) {
    out.push_back(at + ": expected constant " + it->dump());
  }
  if (auto it = schema.find("enum"); it != schema.end()) {
    bool found = false;
    for (const auto& v : *it) found = found || v == value;
    if (!found) out.push_back(at + ": value " + value.dump() + " not in enum");
  }
  if (auto it = schema.find("anyOf"); it != schema.end()) {
    bool any = false;
    for (const auto& alt : *it) {
      std::vector<std::string> scratch;
      Check(alt, value, where, scratch);
      if (scratch.empty()) {
        any = true;
        break;
      }
    }
    if (!any) out.push_back(at + ": matches none of anyOf");
  }
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (auto it = schema.find("minLength");
        it != schema.end() && s.size() < it->get<std::size_t>()) {
      out.push_back(at + ": string shorter than " + it->dump());
    }
    if (auto it = schema.find("pattern"); it != schema.end()) {
      std::regex re(it->get<std::string>(), std::regex::ECMAScript);
      if (!std::regex_search(s, re)) {
        out.push_back(at + ": string does not match " + it->dump());
      }
    }
  }
  if (value.is_array()) {
    if (auto it = schema.find("minItems");
        it != schema.end() && value.size() < it->get<std::size_t>()) {
      out.push_back(at + ": fewer than " + it->dump() + " items");
    }
    if (auto it = schema.find("items"); it != schema.end()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        Check(*it, value[i], where + "/" + std::to_string(i), out);
      }
    }
  }
  if (value.is_object()) {
    if (auto it = schema.find("required"); it != schema.end()) {
      for (const auto& key : *it) {
        if (!value.contains(key.get<std::string>())) {
          out.push_back(at + ": missing required key " + key.dump());
        }
      }
    }
    const Json* props = nullptr;
    if (auto it = schema.find("properties"); it != schema.end()) props = &*it;
    const Json* extra = nullptr;
    if (auto it = schema.find("additionalProperties"); it != schema.end()) {
      extra = &*it;
    }
    for (const auto& [key, child] : value.items()) {
      std::string child_where = where + "/" + key;
      if (props != nullptr && props->contains(key)) {
        Check((*props)[key], child, child_where, out);
      } else if (extra != nullptr) {
        if (extra->is_boolean()) {
          if (!extra->get<bool>()) {
            out.push_back(at + ": unexpected key \"" + key + "\"");
          }
        } else {
          Check(*extra, child, child_where, out);
        }
      }
    }
  }
}

}  // namespace privscope

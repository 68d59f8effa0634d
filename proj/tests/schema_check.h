// Copyright 2026 The vfatigue Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Validator for the JSON Schema keywords used by docs/*.schema.json:
// type, const, enum, required, properties, additionalProperties, items,
// minItems, maxItems, minimum. Any other keyword is reported as an error
// so that a schema edit cannot silently go unchecked.

#ifndef VFATIGUE_TESTS_SCHEMA_CHECK_H_
#define VFATIGUE_TESTS_SCHEMA_CHECK_H_

#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace vfatigue::testing {

inline bool MatchesType(const nlohmann::json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  return false;
}

inline void CheckSchema(const nlohmann::json& schema, const nlohmann::json& v,
                        const std::string& where, std::vector<std::string>* errors) {
  static const std::set<std::string> kKnown = {
      "$schema", "title",      "description", "type",     "const",
      "enum",    "required",   "properties",  "additionalProperties",
      "items",   "minItems",   "maxItems",    "minimum"};
  for (const auto& [key, unused] : schema.items()) {
    if (kKnown.count(key) == 0) errors->push_back(where + ": unsupported keyword " + key);
  }
  auto fail = [&](const std::string& what) { errors->push_back(where + ": " + what); };
  if (schema.contains("type") && !MatchesType(v, schema["type"].get<std::string>())) {
    fail("expected " + schema["type"].get<std::string>());
    return;
  }
  if (schema.contains("const") && v != schema["const"]) fail("const mismatch");
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& option : schema["enum"]) found = found || option == v;
    if (!found) fail("value not in enum");
  }
  if (schema.contains("minimum") && v.is_number() &&
      v.get<double>() < schema["minimum"].get<double>()) {
    fail("below minimum");
  }
  if (v.is_object()) {
    for (const auto& key : schema.value("required", nlohmann::json::array())) {
      if (!v.contains(key.get<std::string>())) fail("missing " + key.get<std::string>());
    }
    const nlohmann::json props = schema.value("properties", nlohmann::json::object());
    for (const auto& [key, child] : v.items()) {
      if (props.contains(key)) {
        CheckSchema(props[key], child, where + "." + key, errors);
      } else if (schema.contains("additionalProperties")) {
        const auto& extra = schema["additionalProperties"];
        if (extra.is_boolean()) {
          if (!extra.get<bool>()) fail("unexpected property " + key);
        } else {
          CheckSchema(extra, child, where + "." + key, errors);
        }
      }
    }
  }
  if (v.is_array()) {
    if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>()) {
      fail("too few items");
    }
    if (schema.contains("maxItems") && v.size() > schema["maxItems"].get<std::size_t>()) {
      fail("too many items");
    }
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        CheckSchema(schema["items"], v[i], where + "[" + std::to_string(i) + "]", errors);
      }
    }
  }
}

inline std::vector<std::string> ValidateAgainstSchema(const nlohmann::json& schema,
                                                      const nlohmann::json& doc) {
  std::vector<std::string> errors;
  CheckSchema(schema, doc, "$", &errors);
  return errors;
}

}  // namespace vfatigue::testing

#endif  // VFATIGUE_TESTS_SCHEMA_CHECK_H_

// Copyright 2026 The dirtree Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dirtree/json_io.h"

#include <fstream>
#include <sstream>

#include "dirtree/errors.h"

namespace dirtree {
namespace json_field {

const Json& require(const Json& obj, const std::string& key,
                    const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

double number(const Json& obj, const std::string& key,
              const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_number()) throw SchemaError(path + "." + key, "expected a number");
  return v.get<double>();
}

bool boolean(const Json& obj, const std::string& key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_boolean()) {
    throw SchemaError(path + "." + key, "expected a boolean");
  }
  return v.get<bool>();
}

std::string string(const Json& obj, const std::string& key,
                   const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_string()) throw SchemaError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

long long integer(const Json& obj, const std::string& key,
                  const std::string& path) {
  const Json& v = require(obj, key, path);
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d == static_cast<double>(static_cast<long long>(d))) {
      return static_cast<long long>(d);
    }
  }
  throw SchemaError(path + "." + key, "expected an integer");
}

const Json& array(const Json& obj, const std::string& key,
                  const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_array()) throw SchemaError(path + "." + key, "expected an array");
  return v;
}

}  // namespace json_field

Json parse_json_text(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw SchemaError("$", what + " is not valid JSON: " + e.what());
  }
}

Json bbox_to_json(const BBox& b) {
  return Json{{"l", b.left}, {"t", b.top}, {"r", b.right}, {"b", b.bottom}};
}

BBox bbox_from_json(const Json& j, const std::string& path) {
  return BBox{json_field::number(j, "l", path), json_field::number(j, "t", path),
              json_field::number(j, "r", path),
              json_field::number(j, "b", path)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write file: " + path);
  out << contents;
  if (!out) throw InputError("failed writing file: " + path);
}

}  // namespace dirtree

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

#ifndef DIRTREE_JSON_IO_H_
#define DIRTREE_JSON_IO_H_

// JSON conversions for the on-disk formats: visual documents, gazetteers,
// labeled spans, reading trees, directory blocks, forest models and gold
// files.

#include <string>
#include <vector>

#include "json.hpp"

#include "dirtree/visual_model.h"

namespace dirtree {

using Json = nlohmann::json;

// Typed field access that reports the offending JSON path in SchemaError.
namespace json_field {

const Json& require(const Json& obj, const std::string& key,
                    const std::string& path);
double number(const Json& obj, const std::string& key, const std::string& path);
bool boolean(const Json& obj, const std::string& key, const std::string& path);
std::string string(const Json& obj, const std::string& key,
                   const std::string& path);
long long integer(const Json& obj, const std::string& key,
                  const std::string& path);
const Json& array(const Json& obj, const std::string& key,
                  const std::string& path);

}  // namespace json_field

Json parse_json_text(std::string_view text, const std::string& what);

Json bbox_to_json(const BBox& b);
BBox bbox_from_json(const Json& j, const std::string& path);

Json document_to_json(const std::vector<VisualPage>& pages);
std::vector<VisualPage> document_from_json(const Json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace dirtree

#endif  // DIRTREE_JSON_IO_H_

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

#ifndef DIRTREE_ERRORS_H_
#define DIRTREE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dirtree {

// Errors caused by malformed or inconsistent input. The CLI maps these to
// exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing or mistyped field. The message starts with the JSON path.
class SchemaError : public InputError {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : InputError(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A geometric invariant of the visual model does not hold.
class GeometryError : public InputError {
 public:
  using InputError::InputError;
};

class EmptyClassError : public InputError {
 public:
  using InputError::InputError;
};

class EmptyPageError : public InputError {
 public:
  using InputError::InputError;
};

class PageSetMismatch : public InputError {
 public:
  using InputError::InputError;
};

// An internal invariant was violated. Signals a bug, not bad input; the CLI
// maps these to exit code 2.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dirtree

#endif  // DIRTREE_ERRORS_H_

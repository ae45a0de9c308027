//
// Copyright 2026 The dashcam-hazard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DASHCAM_ERROR_H_
#define DASHCAM_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dashcam {

// Bad input data: unreadable files, malformed records, schema violations.
// The CLI maps these to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A line of a line-oriented input could not be decoded at all.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A record decoded but violates a structural invariant. line() is 0 when
// the violation is not tied to a single line.
class SchemaError : public InputError {
 public:
  SchemaError(std::size_t line, const std::string& what)
      : InputError(line == 0 ? what
                             : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  explicit SchemaError(const std::string& what) : SchemaError(0, what) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Invalid configuration values. The CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dashcam

#endif  // DASHCAM_ERROR_H_

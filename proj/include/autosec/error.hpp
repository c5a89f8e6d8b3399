// Copyright 2026 The autosec Authors.
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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace autosec {

/// Position inside a text input; both fields are 1-based.
struct SourceLocation {
  int line = 0;
  int column = 0;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, SourceLocation where)
      : Error(std::to_string(where.line) + ":" + std::to_string(where.column) + ": " + message),
        where_(where) {}

  [[nodiscard]] SourceLocation where() const { return where_; }

 private:
  SourceLocation where_;
};

/// Raised with every violated invariant, not only the first one found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}

  [[nodiscard]] const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& problems) {
    std::string out = "validation failed:";
    for (const auto& p : problems) out += "\n  " + p;
    return out;
  }

  std::vector<std::string> problems_;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace autosec

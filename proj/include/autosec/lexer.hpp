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

#include <string>
#include <string_view>
#include <vector>

#include "autosec/error.hpp"

namespace autosec {

enum class TokenKind {
  Identifier,
  String,
  Punct,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceLocation where;
};

/// Shared tokenizer for the model and rule formats.
///
/// Identifiers are runs of [A-Za-z0-9_] plus '-' when not followed by '>'.
/// Strings are double-quoted with backslash escapes for '"' and '\'.
/// Punctuation: ":=" ">=" "<=" "!=" "->" and single characters "={}[],&.:;@/".
/// '#' starts a comment running to end of line.
std::vector<Token> tokenize(std::string_view text);

/// Quotes a string so that tokenize() reads it back verbatim.
std::string quote(std::string_view raw);

/// Cursor over a token vector with the small helpers every parser here needs.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  [[nodiscard]] const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  [[nodiscard]] bool at_end() const { return peek().kind == TokenKind::End; }
  /// Location of the most recently consumed token.
  [[nodiscard]] SourceLocation last_location() const;

  [[nodiscard]] bool is_word(std::string_view word, std::size_t ahead = 0) const;
  [[nodiscard]] bool is_punct(std::string_view p, std::size_t ahead = 0) const;

  void expect_word(std::string_view word);
  void expect_punct(std::string_view p);
  std::string expect_string();
  std::string expect_identifier();
  bool accept_word(std::string_view word);
  bool accept_punct(std::string_view p);

  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace autosec

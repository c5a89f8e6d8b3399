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

#include "autosec/lexer.hpp"

#include <cctype>

namespace autosec {

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::End:
      return "end of input";
    case TokenKind::String:
      return "string " + quote(t.text);
    default:
      return "'" + t.text + "'";
  }
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      advance(1);
      continue;
    }
    const SourceLocation at{line, col};
    if (c == '"') {
      std::string value;
      advance(1);
      bool closed = false;
      while (i < text.size()) {
        const char d = text[i];
        if (d == '"') {
          advance(1);
          closed = true;
          break;
        }
        if (d == '\\') {
          if (i + 1 >= text.size()) break;
          const char e = text[i + 1];
          if (e != '"' && e != '\\') throw ParseError("unknown escape sequence", {line, col});
          value.push_back(e);
          advance(2);
          continue;
        }
        if (d == '\n') break;
        value.push_back(d);
        advance(1);
      }
      if (!closed) throw ParseError("unterminated string", at);
      out.push_back({TokenKind::String, std::move(value), at});
      continue;
    }
    if (is_ident_char(c)) {
      std::string word;
      while (i < text.size()) {
        const char d = text[i];
        if (is_ident_char(d) || (d == '-' && !(i + 1 < text.size() && text[i + 1] == '>'))) {
          word.push_back(d);
          advance(1);
        } else {
          break;
        }
      }
      out.push_back({TokenKind::Identifier, std::move(word), at});
      continue;
    }
    static constexpr std::string_view kTwo[] = {":=", ">=", "<=", "!=", "->"};
    bool matched = false;
    for (auto two : kTwo) {
      if (text.substr(i, 2) == two) {
        out.push_back({TokenKind::Punct, std::string(two), at});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("={}[],&.:;@/").find(c) != std::string_view::npos) {
      out.push_back({TokenKind::Punct, std::string(1, c), at});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", at);
  }
  out.push_back({TokenKind::End, "", {line, col}});
  return out;
}

std::string quote(std::string_view raw) {
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  const std::size_t at = pos_ + ahead;
  return at < tokens_.size() ? tokens_[at] : tokens_.back();
}

SourceLocation TokenStream::last_location() const {
  return pos_ == 0 ? tokens_.front().where : tokens_[pos_ - 1].where;
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool TokenStream::is_word(std::string_view word, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::Identifier && t.text == word;
}

bool TokenStream::is_punct(std::string_view p, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::Punct && t.text == p;
}

void TokenStream::expect_word(std::string_view word) {
  if (!is_word(word)) fail("expected '" + std::string(word) + "' but found " + describe(peek()));
  next();
}

void TokenStream::expect_punct(std::string_view p) {
  if (!is_punct(p)) fail("expected '" + std::string(p) + "' but found " + describe(peek()));
  next();
}

std::string TokenStream::expect_string() {
  if (peek().kind != TokenKind::String) fail("expected a quoted string but found " + describe(peek()));
  return next().text;
}

std::string TokenStream::expect_identifier() {
  if (peek().kind != TokenKind::Identifier) fail("expected an identifier but found " + describe(peek()));
  return next().text;
}

bool TokenStream::accept_word(std::string_view word) {
  if (!is_word(word)) return false;
  next();
  return true;
}

bool TokenStream::accept_punct(std::string_view p) {
  if (!is_punct(p)) return false;
  next();
  return true;
}

void TokenStream::fail(const std::string& message) const {
  throw ParseError(message, peek().where);
}

}  // namespace autosec

// Copyright 2026 The nestmlc Authors
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

#ifndef NESTML_SYNTAX_LEXER_HPP
#define NESTML_SYNTAX_LEXER_HPP

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nestml/syntax/diagnostic.hpp"

namespace nestml {

enum class Tok {
  ident,
  keyword,
  number,
  string,
  newline,
  lparen,
  rparen,
  lbracket,
  rbracket,
  comma,
  colon,
  semicolon,
  dot,
  assign,      // =
  plus_assign,
  minus_assign,
  star_assign,
  slash_assign,
  eq,          // ==
  ne,
  lt,
  le,
  gt,
  ge,
  plus,
  minus,
  star,
  slash,
  power,       // **
  arrow,       // <-
  eof,
};

struct Token {
  Tok kind = Tok::eof;
  std::string text;  // identifier/keyword name, literal spelling, string value
  SourceSpan span;
  // Text of the standalone `#` comment lines directly above this token,
  // joined with '\n'. Trailing comments after code are dropped.
  std::string doc;
  bool has_doc = false;
};

bool is_keyword(std::string_view word);
std::string_view token_name(Tok kind);

struct LexResult {
  std::vector<Token> tokens;  // no trailing newline, no eof marker
  Diagnostics errors;
  bool ok() const { return errors.empty(); }
};

// Newlines are statement separators. They are suppressed inside brackets,
// after a line that ends in a binary operator or comma, and before a line
// that starts with `*`, `/`, `**`, `+`, `-` or `==`-style operators.
LexResult tokenize(std::string_view source, const std::string& file = "");

}  // namespace nestml

#endif  // NESTML_SYNTAX_LEXER_HPP

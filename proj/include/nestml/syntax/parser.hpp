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

#ifndef NESTML_SYNTAX_PARSER_HPP
#define NESTML_SYNTAX_PARSER_HPP

#include <string>
#include <string_view>

#include "nestml/syntax/ast.hpp"

namespace nestml {

struct ParseOptions {
  // Generated models use `__` names; user sources may not.
  bool allow_reserved_names = false;
};

struct ParseResult {
  ModelFile model;
  Diagnostics errors;
  bool ok() const { return errors.empty(); }
};

struct ExprParseResult {
  ExprPtr expr;
  Diagnostics errors;
  bool ok() const { return errors.empty() && expr != nullptr; }
};

ParseResult parse_file(std::string_view source, const std::string& file = "",
                       const ParseOptions& options = {});

ExprParseResult parse_expression(std::string_view source,
                                 const std::string& file = "",
                                 const ParseOptions& options = {});

}  // namespace nestml

#endif  // NESTML_SYNTAX_PARSER_HPP

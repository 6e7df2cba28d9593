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

#ifndef NESTML_SYNTAX_PRETTY_PRINTER_HPP
#define NESTML_SYNTAX_PRETTY_PRINTER_HPP

#include <string>

#include "nestml/syntax/ast.hpp"

namespace nestml {

// Canonical source text. Blocks are printed in a fixed order with two
// spaces of indentation per level.
std::string pretty_print(const ModelFile& model);
std::string pretty_print(const ModelDecl& decl);
std::string pretty_print(const ExprPtr& expr);
std::string pretty_print(const Declaration& decl);

// Binding strength used by the printer; higher binds tighter.
int precedence(const Expr& e);

}  // namespace nestml

#endif  // NESTML_SYNTAX_PRETTY_PRINTER_HPP

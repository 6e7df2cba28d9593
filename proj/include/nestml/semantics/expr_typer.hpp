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

#ifndef NESTML_SEMANTICS_EXPR_TYPER_HPP
#define NESTML_SEMANTICS_EXPR_TYPER_HPP

#include <optional>
#include <set>
#include <string>
#include <unordered_map>

#include "nestml/semantics/symbol_table.hpp"

namespace nestml {

// Types of typed expression nodes plus scale conversions. A node with a
// conversion exponent k is multiplied by 10^k where its parent consumes it
// (operand of +, -, comparison, argument, assigned or returned value).
struct TypeInfo {
  std::unordered_map<const Expr*, TypeSpec> types;
  std::unordered_map<const Expr*, int> conversions;
  std::unordered_map<const ShapeEq*, TypeSpec> shape_types;

  TypeSpec type(const Expr* e) const;
  int conversion_exponent(const Expr* e) const;
  double conversion_factor(const Expr* e) const;
};

// A unitless numeric literal, possibly negated or parenthesized. It takes
// the unit of the operand or target it meets.
bool is_plain_literal(const Expr& e);

// Exponent k such that a value of type `from` times 10^k is a value of
// type `to`, or nullopt when the types are incompatible.
std::optional<int> conversion_to(const TypeSpec& from, const TypeSpec& to,
                                 bool plain_literal);

struct TypingOptions {
  std::string unknown_code = "E0302";
  // Names that exist but are not yet visible at this point.
  const std::set<std::string>* forward = nullptr;
  std::string forward_code = "E0401";
};

class ExprTyper {
 public:
  // `diags` may be null to type silently.
  ExprTyper(const ModelScope& model, const Scope& scope, TypeInfo& info,
            Diagnostics* diags, TypingOptions options = {});

  TypeSpec type_of(const ExprPtr& e);

  // Checks `value` (already typed) against `target` and records the
  // conversion on it. False on mismatch; nothing is reported.
  bool coerce(const ExprPtr& value, const TypeSpec& target);

 private:
  TypeSpec visit(const Expr& e);
  TypeSpec visit_var(const Expr& e);
  TypeSpec visit_call(const Expr& e);
  TypeSpec visit_binary(const Expr& e);
  TypeSpec check_user_call(const Expr& e, const FunctionDecl& f);
  TypeSpec check_builtin_call(const Expr& e, const std::string& name);
  bool coerce_arg(const ExprPtr& arg, const TypeSpec& target);
  void error(const std::string& code, const std::string& msg,
             const SourceSpan& span);

  const ModelScope& model_;
  const Scope& scope_;
  TypeInfo& info_;
  Diagnostics* diags_;
  TypingOptions options_;
};

// Resolves a written type; nullopt when the unit is unknown.
std::optional<TypeSpec> resolve_type_ref(const TypeRef& ref);

}  // namespace nestml

#endif  // NESTML_SEMANTICS_EXPR_TYPER_HPP

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

#ifndef NESTML_SYNTAX_AST_HPP
#define NESTML_SYNTAX_AST_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nestml/syntax/diagnostic.hpp"

namespace nestml {

enum class UnaryOp { neg, not_ };

enum class BinaryOp { add, sub, mul, div, pow, lt, le, eq, ne, ge, gt, and_, or_ };

const char* to_string(UnaryOp op);
const char* to_string(BinaryOp op);
bool is_comparison(BinaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Expression nodes are immutable once built and may be shared.
struct Expr {
  enum class Kind { number, string, boolean, var, call, unary, binary, paren };

  Kind kind = Kind::number;
  SourceSpan span;

  // number: value plus the literal spelling; unit is the suffix as written.
  double value = 0.0;
  std::string spelling;
  std::string unit;
  // string literal value
  std::string text;
  bool bool_value = false;
  // var, and the callee of call. `PSP.f` has qualifier "PSP".
  std::string qualifier;
  std::string name;
  std::vector<ExprPtr> args;

  UnaryOp unary_op = UnaryOp::neg;
  BinaryOp binary_op = BinaryOp::add;
  ExprPtr lhs;  // also the operand of unary and paren
  ExprPtr rhs;

  bool is_integer_literal() const;
  std::string qualified_name() const;
};

ExprPtr make_number(double value, SourceSpan span = {}, std::string unit = "");
ExprPtr make_number_spelled(std::string spelling, SourceSpan span = {},
                            std::string unit = "");
ExprPtr make_string(std::string text, SourceSpan span = {});
ExprPtr make_bool(bool value, SourceSpan span = {});
ExprPtr make_var(std::string name, SourceSpan span = {},
                 std::string qualifier = "");
ExprPtr make_call(std::string name, std::vector<ExprPtr> args,
                  SourceSpan span = {}, std::string qualifier = "");
ExprPtr make_unary(UnaryOp op, ExprPtr operand, SourceSpan span = {});
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs,
                    SourceSpan span = {});
ExprPtr make_paren(ExprPtr inner, SourceSpan span = {});

// Deep copy with fresh node identities.
ExprPtr clone(const ExprPtr& e);

// Shortest decimal spelling that reads back to the same double.
std::string format_number(double value);

// Type as written: `real`, `integer`, `mV`, `mV/ms`, `1/mV`, ...
struct TypeRef {
  std::string text;
  SourceSpan span;
};

struct Declaration {
  std::vector<std::string> names;
  TypeRef type;
  ExprPtr init;
  ExprPtr guard;
  bool is_alias = false;
  std::optional<std::string> doc;
  SourceSpan span;
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;
using Block = std::vector<StmtPtr>;

struct IfBranch {
  ExprPtr cond;
  Block body;
  SourceSpan span;
};

struct ShapeEq {
  std::string name;
  ExprPtr kernel;
  std::string buffer;  // `on <buffer>`, empty when unbound
  std::optional<std::string> doc;
  SourceSpan span;
};

struct DiffEq {
  std::string state_var;
  ExprPtr rhs;
  std::optional<std::string> doc;
  SourceSpan span;
};

struct OdeBlock {
  std::vector<ShapeEq> shapes;
  std::vector<DiffEq> equations;
};

enum class AssignOp { set, add, sub, mul, div };
const char* to_string(AssignOp op);

struct Stmt {
  enum class Kind { assign, if_chain, call, ode, return_, local };

  Kind kind = Kind::call;
  SourceSpan span;
  std::optional<std::string> doc;

  // assign
  ExprPtr target;  // var node
  AssignOp assign_op = AssignOp::set;
  ExprPtr value;  // also the return value and the call expression
  // if_chain
  std::vector<IfBranch> branches;
  bool has_else = false;
  Block else_body;
  // ode
  OdeBlock ode;
  // local
  Declaration decl;
};

StmtPtr make_assign(ExprPtr target, AssignOp op, ExprPtr value,
                    SourceSpan span = {});
StmtPtr make_call_stmt(ExprPtr call, SourceSpan span = {});
StmtPtr make_local(Declaration decl);
StmtPtr make_return(ExprPtr value, SourceSpan span = {});

struct Param {
  std::string name;
  TypeRef type;
  SourceSpan span;
};

struct FunctionDecl {
  std::string name;
  std::vector<Param> params;
  std::optional<TypeRef> return_type;
  Block body;
  std::optional<std::string> doc;
  SourceSpan span;
};

enum class DynamicsKind { timestep, min_delay };

struct DynamicsDecl {
  DynamicsKind kind = DynamicsKind::timestep;
  std::vector<Param> params;
  Block body;
  std::optional<std::string> doc;
  SourceSpan span;
};

enum class BufferKind { spike, current };

struct InputLine {
  std::string buffer;
  bool inhibitory = false;
  bool excitatory = false;
  BufferKind kind = BufferKind::spike;
  SourceSpan span;
};

struct OutputDecl {
  BufferKind kind = BufferKind::spike;
  SourceSpan span;
};

struct UseDecl {
  std::string component;
  std::string alias;  // empty: bound under the component name
  SourceSpan span;
};

// A neuron or a component. Components have no input, output or dynamics.
struct ModelDecl {
  bool is_component = false;
  std::string name;
  std::optional<std::string> doc;
  SourceSpan span;

  std::vector<UseDecl> uses;
  std::optional<std::vector<Declaration>> state;
  std::optional<std::vector<Declaration>> parameter;
  std::optional<std::vector<Declaration>> internal;
  std::optional<std::vector<InputLine>> input;
  std::vector<OutputDecl> outputs;  // more than one is a context error
  std::vector<FunctionDecl> functions;
  std::vector<DynamicsDecl> dynamics;
};

struct Import {
  std::string name;
  SourceSpan span;
};

struct ModelFile {
  std::string path;
  std::vector<Import> imports;
  std::vector<ModelDecl> decls;
};

// Structural equality that ignores spans.
bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const Block& a, const Block& b);
bool equal(const Declaration& a, const Declaration& b);
bool equal(const ModelDecl& a, const ModelDecl& b);
bool equal(const ModelFile& a, const ModelFile& b);

// Visits every statement, descending into if branches.
template <typename F>
void for_each_stmt(const Block& block, F&& f) {
  for (const auto& s : block) {
    f(*s);
    if (s->kind == Stmt::Kind::if_chain) {
      for (const auto& b : s->branches) for_each_stmt(b.body, f);
      for_each_stmt(s->else_body, f);
    }
  }
}

// Visits every node of an expression tree in preorder.
template <typename F>
void for_each_expr(const ExprPtr& e, F&& f) {
  if (!e) return;
  f(*e);
  for (const auto& a : e->args) for_each_expr(a, f);
  for_each_expr(e->lhs, f);
  for_each_expr(e->rhs, f);
}

}  // namespace nestml

#endif  // NESTML_SYNTAX_AST_HPP

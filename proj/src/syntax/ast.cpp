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

#include "nestml/syntax/ast.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace nestml {

const char* to_string(UnaryOp op) { return op == UnaryOp::neg ? "-" : "not"; }

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::pow: return "**";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::eq: return "==";
    case BinaryOp::ne: return "!=";
    case BinaryOp::ge: return ">=";
    case BinaryOp::gt: return ">";
    case BinaryOp::and_: return "and";
    case BinaryOp::or_: return "or";
  }
  return "?";
}

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::lt: case BinaryOp::le: case BinaryOp::eq:
    case BinaryOp::ne: case BinaryOp::ge: case BinaryOp::gt:
      return true;
    default:
      return false;
  }
}

const char* to_string(AssignOp op) {
  switch (op) {
    case AssignOp::set: return "=";
    case AssignOp::add: return "+=";
    case AssignOp::sub: return "-=";
    case AssignOp::mul: return "*=";
    case AssignOp::div: return "/=";
  }
  return "?";
}

bool Expr::is_integer_literal() const {
  return kind == Kind::number &&
         spelling.find_first_of(".eE") == std::string::npos;
}

std::string Expr::qualified_name() const {
  return qualifier.empty() ? name : qualifier + "." + name;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  if (std::isinf(value)) return value > 0 ? "1e308" : "-1e308";
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  std::string s = buf;
  const double mag = std::fabs(value);
  if (s.find('e') != std::string::npos && mag >= 1e-5 && mag < 1e16) {
    // Plain decimals for moderate magnitudes: 10 rather than 1e1.
    for (int digits = 0; digits <= 20; ++digits) {
      std::snprintf(buf, sizeof buf, "%.*f", digits, value);
      if (std::strtod(buf, nullptr) == value) return buf;
    }
  }
  // `1e-05` -> `1e-5`
  auto e = s.find('e');
  if (e != std::string::npos) {
    std::string mant = s.substr(0, e);
    std::string exp = s.substr(e + 1);
    bool neg = !exp.empty() && exp[0] == '-';
    if (!exp.empty() && (exp[0] == '-' || exp[0] == '+')) exp.erase(0, 1);
    while (exp.size() > 1 && exp[0] == '0') exp.erase(0, 1);
    s = mant + "e" + (neg ? "-" : "") + exp;
  }
  return s;
}

namespace {

std::shared_ptr<Expr> node(Expr::Kind kind, SourceSpan span) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->span = std::move(span);
  return e;
}

}  // namespace

ExprPtr make_number(double value, SourceSpan span, std::string unit) {
  auto e = node(Expr::Kind::number, std::move(span));
  e->value = value;
  e->spelling = format_number(value);
  e->unit = std::move(unit);
  return e;
}

ExprPtr make_number_spelled(std::string spelling, SourceSpan span,
                            std::string unit) {
  auto e = node(Expr::Kind::number, std::move(span));
  e->value = std::strtod(spelling.c_str(), nullptr);
  e->spelling = std::move(spelling);
  e->unit = std::move(unit);
  return e;
}

ExprPtr make_string(std::string text, SourceSpan span) {
  auto e = node(Expr::Kind::string, std::move(span));
  e->text = std::move(text);
  return e;
}

ExprPtr make_bool(bool value, SourceSpan span) {
  auto e = node(Expr::Kind::boolean, std::move(span));
  e->bool_value = value;
  return e;
}

ExprPtr make_var(std::string name, SourceSpan span, std::string qualifier) {
  auto e = node(Expr::Kind::var, std::move(span));
  e->name = std::move(name);
  e->qualifier = std::move(qualifier);
  return e;
}

ExprPtr make_call(std::string name, std::vector<ExprPtr> args, SourceSpan span,
                  std::string qualifier) {
  auto e = node(Expr::Kind::call, std::move(span));
  e->name = std::move(name);
  e->qualifier = std::move(qualifier);
  e->args = std::move(args);
  return e;
}

ExprPtr make_unary(UnaryOp op, ExprPtr operand, SourceSpan span) {
  auto e = node(Expr::Kind::unary, std::move(span));
  e->unary_op = op;
  e->lhs = std::move(operand);
  return e;
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span) {
  auto e = node(Expr::Kind::binary, std::move(span));
  e->binary_op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

ExprPtr make_paren(ExprPtr inner, SourceSpan span) {
  auto e = node(Expr::Kind::paren, std::move(span));
  e->lhs = std::move(inner);
  return e;
}

ExprPtr clone(const ExprPtr& e) {
  if (!e) return nullptr;
  auto c = std::make_shared<Expr>(*e);
  for (auto& a : c->args) a = clone(a);
  c->lhs = clone(e->lhs);
  c->rhs = clone(e->rhs);
  return c;
}

StmtPtr make_assign(ExprPtr target, AssignOp op, ExprPtr value,
                    SourceSpan span) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::assign;
  s->span = std::move(span);
  s->target = std::move(target);
  s->assign_op = op;
  s->value = std::move(value);
  return s;
}

StmtPtr make_call_stmt(ExprPtr call, SourceSpan span) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::call;
  s->span = std::move(span);
  s->value = std::move(call);
  return s;
}

StmtPtr make_local(Declaration decl) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::local;
  s->span = decl.span;
  s->decl = std::move(decl);
  return s;
}

StmtPtr make_return(ExprPtr value, SourceSpan span) {
  auto s = std::make_shared<Stmt>();
  s->kind = Stmt::Kind::return_;
  s->span = std::move(span);
  s->value = std::move(value);
  return s;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::number:
      return a->value == b->value && a->unit == b->unit &&
             a->is_integer_literal() == b->is_integer_literal();
    case Expr::Kind::string:
      return a->text == b->text;
    case Expr::Kind::boolean:
      return a->bool_value == b->bool_value;
    case Expr::Kind::var:
      return a->name == b->name && a->qualifier == b->qualifier;
    case Expr::Kind::call:
      if (a->name != b->name || a->qualifier != b->qualifier ||
          a->args.size() != b->args.size())
        return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
      return true;
    case Expr::Kind::unary:
      return a->unary_op == b->unary_op && equal(a->lhs, b->lhs);
    case Expr::Kind::binary:
      return a->binary_op == b->binary_op && equal(a->lhs, b->lhs) &&
             equal(a->rhs, b->rhs);
    case Expr::Kind::paren:
      return equal(a->lhs, b->lhs);
  }
  return false;
}

bool equal(const Declaration& a, const Declaration& b) {
  return a.names == b.names && a.type.text == b.type.text &&
         equal(a.init, b.init) && equal(a.guard, b.guard) &&
         a.is_alias == b.is_alias && a.doc == b.doc;
}

namespace {

bool equal_decls(const std::optional<std::vector<Declaration>>& a,
                 const std::optional<std::vector<Declaration>>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  if (a->size() != b->size()) return false;
  for (size_t i = 0; i < a->size(); ++i)
    if (!equal((*a)[i], (*b)[i])) return false;
  return true;
}

bool equal_params(const std::vector<Param>& a, const std::vector<Param>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || a[i].type.text != b[i].type.text)
      return false;
  return true;
}

bool equal_stmt(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.doc != b.doc) return false;
  switch (a.kind) {
    case Stmt::Kind::assign:
      return a.assign_op == b.assign_op && equal(a.target, b.target) &&
             equal(a.value, b.value);
    case Stmt::Kind::call:
    case Stmt::Kind::return_:
      return equal(a.value, b.value);
    case Stmt::Kind::local:
      return equal(a.decl, b.decl);
    case Stmt::Kind::if_chain:
      if (a.branches.size() != b.branches.size() || a.has_else != b.has_else)
        return false;
      for (size_t i = 0; i < a.branches.size(); ++i)
        if (!equal(a.branches[i].cond, b.branches[i].cond) ||
            !equal(a.branches[i].body, b.branches[i].body))
          return false;
      return equal(a.else_body, b.else_body);
    case Stmt::Kind::ode: {
      const auto& x = a.ode;
      const auto& y = b.ode;
      if (x.shapes.size() != y.shapes.size() ||
          x.equations.size() != y.equations.size())
        return false;
      for (size_t i = 0; i < x.shapes.size(); ++i)
        if (x.shapes[i].name != y.shapes[i].name ||
            x.shapes[i].buffer != y.shapes[i].buffer ||
            x.shapes[i].doc != y.shapes[i].doc ||
            !equal(x.shapes[i].kernel, y.shapes[i].kernel))
          return false;
      for (size_t i = 0; i < x.equations.size(); ++i)
        if (x.equations[i].state_var != y.equations[i].state_var ||
            x.equations[i].doc != y.equations[i].doc ||
            !equal(x.equations[i].rhs, y.equations[i].rhs))
          return false;
      return true;
    }
  }
  return false;
}

}  // namespace

bool equal(const Block& a, const Block& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!equal_stmt(*a[i], *b[i])) return false;
  return true;
}

bool equal(const ModelDecl& a, const ModelDecl& b) {
  if (a.is_component != b.is_component || a.name != b.name || a.doc != b.doc)
    return false;
  if (a.uses.size() != b.uses.size()) return false;
  for (size_t i = 0; i < a.uses.size(); ++i)
    if (a.uses[i].component != b.uses[i].component ||
        a.uses[i].alias != b.uses[i].alias)
      return false;
  if (!equal_decls(a.state, b.state) ||
      !equal_decls(a.parameter, b.parameter) ||
      !equal_decls(a.internal, b.internal))
    return false;
  if (a.input.has_value() != b.input.has_value()) return false;
  if (a.input) {
    if (a.input->size() != b.input->size()) return false;
    for (size_t i = 0; i < a.input->size(); ++i) {
      const auto& x = (*a.input)[i];
      const auto& y = (*b.input)[i];
      if (x.buffer != y.buffer || x.inhibitory != y.inhibitory ||
          x.excitatory != y.excitatory || x.kind != y.kind)
        return false;
    }
  }
  if (a.outputs.size() != b.outputs.size()) return false;
  for (size_t i = 0; i < a.outputs.size(); ++i)
    if (a.outputs[i].kind != b.outputs[i].kind) return false;
  if (a.functions.size() != b.functions.size()) return false;
  for (size_t i = 0; i < a.functions.size(); ++i) {
    const auto& x = a.functions[i];
    const auto& y = b.functions[i];
    if (x.name != y.name || x.doc != y.doc ||
        !equal_params(x.params, y.params) ||
        x.return_type.has_value() != y.return_type.has_value() ||
        (x.return_type && x.return_type->text != y.return_type->text) ||
        !equal(x.body, y.body))
      return false;
  }
  if (a.dynamics.size() != b.dynamics.size()) return false;
  for (size_t i = 0; i < a.dynamics.size(); ++i) {
    const auto& x = a.dynamics[i];
    const auto& y = b.dynamics[i];
    if (x.kind != y.kind || x.doc != y.doc ||
        !equal_params(x.params, y.params) || !equal(x.body, y.body))
      return false;
  }
  return true;
}

bool equal(const ModelFile& a, const ModelFile& b) {
  if (a.imports.size() != b.imports.size()) return false;
  for (size_t i = 0; i < a.imports.size(); ++i)
    if (a.imports[i].name != b.imports[i].name) return false;
  if (a.decls.size() != b.decls.size()) return false;
  for (size_t i = 0; i < a.decls.size(); ++i)
    if (!equal(a.decls[i], b.decls[i])) return false;
  return true;
}

}  // namespace nestml

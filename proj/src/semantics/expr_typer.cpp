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

#include "nestml/semantics/expr_typer.hpp"

namespace nestml {

using Kind = TypeSpec::Kind;

TypeSpec TypeInfo::type(const Expr* e) const {
  auto it = types.find(e);
  return it == types.end() ? TypeSpec::error() : it->second;
}

int TypeInfo::conversion_exponent(const Expr* e) const {
  auto it = conversions.find(e);
  return it == conversions.end() ? 0 : it->second;
}

double TypeInfo::conversion_factor(const Expr* e) const {
  return pow10(conversion_exponent(e));
}

bool is_plain_literal(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::number: return e.unit.empty();
    case Expr::Kind::paren: return is_plain_literal(*e.lhs);
    case Expr::Kind::unary:
      return e.unary_op == UnaryOp::neg && is_plain_literal(*e.lhs);
    default: return false;
  }
}

std::optional<int> conversion_to(const TypeSpec& from, const TypeSpec& to,
                                 bool plain_literal) {
  if (from.kind == Kind::error || to.kind == Kind::error) return 0;
  switch (to.kind) {
    case Kind::unit:
      if (from.kind == Kind::unit) {
        if (from.unit.dimension != to.unit.dimension) return std::nullopt;
        return from.unit.scale - to.unit.scale;
      }
      if (from.kind == Kind::integer || from.kind == Kind::real) {
        if (plain_literal) return 0;
        if (to.unit.dimensionless()) return -to.unit.scale;
      }
      return std::nullopt;
    case Kind::real:
      if (from.kind == Kind::integer || from.kind == Kind::real) return 0;
      if (from.kind == Kind::unit && from.unit.dimensionless()) {
        return from.unit.scale;
      }
      return std::nullopt;
    case Kind::integer:
      if (from.kind == Kind::integer) return 0;
      return std::nullopt;
    case Kind::boolean:
    case Kind::string:
      if (from.kind == to.kind) return 0;
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::optional<TypeSpec> resolve_type_ref(const TypeRef& ref) {
  try {
    return resolve_type(ref.text);
  } catch (const UnitError&) {
    return std::nullopt;
  }
}

ExprTyper::ExprTyper(const ModelScope& model, const Scope& scope,
                     TypeInfo& info, Diagnostics* diags, TypingOptions options)
    : model_(model),
      scope_(scope),
      info_(info),
      diags_(diags),
      options_(std::move(options)) {}

void ExprTyper::error(const std::string& code, const std::string& msg,
                      const SourceSpan& span) {
  if (diags_ != nullptr) diags_->push_back(make_error(code, msg, span));
}

TypeSpec ExprTyper::type_of(const ExprPtr& e) { return visit(*e); }

bool ExprTyper::coerce(const ExprPtr& value, const TypeSpec& target) {
  auto k = conversion_to(info_.type(value.get()), target,
                         is_plain_literal(*value));
  if (!k) return false;
  if (*k != 0) {
    info_.conversions[value.get()] = *k;
  } else {
    info_.conversions.erase(value.get());
  }
  return true;
}

namespace {

bool is_unit(const TypeSpec& t) { return t.kind == Kind::unit; }
bool is_error(const TypeSpec& t) { return t.kind == Kind::error; }

std::optional<int> integer_literal(const Expr& e) {
  if (e.kind == Expr::Kind::number && e.unit.empty() &&
      e.is_integer_literal()) {
    return static_cast<int>(e.value);
  }
  if (e.kind == Expr::Kind::paren) return integer_literal(*e.lhs);
  if (e.kind == Expr::Kind::unary && e.unary_op == UnaryOp::neg) {
    auto v = integer_literal(*e.lhs);
    if (v) return -*v;
  }
  return std::nullopt;
}

}  // namespace

TypeSpec ExprTyper::visit(const Expr& e) {
  TypeSpec t = TypeSpec::error();
  switch (e.kind) {
    case Expr::Kind::number:
      if (e.unit.empty()) {
        t = e.is_integer_literal() ? TypeSpec::integer() : TypeSpec::real();
      } else {
        try {
          t = TypeSpec::of_unit(parse_unit(e.unit));
        } catch (const UnitError&) {
          error(options_.unknown_code, "unknown unit '" + e.unit + "'",
                e.span);
        }
      }
      break;
    case Expr::Kind::string: t = TypeSpec::string(); break;
    case Expr::Kind::boolean: t = TypeSpec::boolean(); break;
    case Expr::Kind::var: t = visit_var(e); break;
    case Expr::Kind::call: t = visit_call(e); break;
    case Expr::Kind::paren: t = visit(*e.lhs); break;
    case Expr::Kind::unary: {
      TypeSpec inner = visit(*e.lhs);
      if (e.unary_op == UnaryOp::neg) {
        if (inner.is_numeric() || is_error(inner)) {
          t = inner;
        } else {
          error("E0301", "operand of unary '-' must be numeric, got " +
                             to_string(inner),
                e.span);
        }
      } else {
        if (inner.kind == Kind::boolean || is_error(inner)) {
          t = TypeSpec::boolean();
        } else {
          error("E0304", "operand of 'not' must be boolean, got " +
                             to_string(inner),
                e.span);
        }
      }
      break;
    }
    case Expr::Kind::binary: t = visit_binary(e); break;
  }
  info_.types[&e] = t;
  return t;
}

TypeSpec ExprTyper::visit_var(const Expr& e) {
  if (!e.qualifier.empty()) {
    const Symbol* q = scope_.lookup(e.qualifier);
    if (q != nullptr && q->kind == SymbolKind::buffer) {
      error("E0410", "buffer '" + e.qualifier + "' is read only via getSum",
            e.span);
      return TypeSpec::error();
    }
    auto it = model_.components.find(e.qualifier);
    if (it == model_.components.end()) {
      error(options_.unknown_code,
            "unknown symbol '" + e.qualified_name() + "'", e.span);
      return TypeSpec::error();
    }
    const Symbol* m = it->second->scope->find_local(e.name);
    if (m == nullptr || (m->kind != SymbolKind::state &&
                         m->kind != SymbolKind::parameter &&
                         m->kind != SymbolKind::internal)) {
      error(options_.unknown_code,
            "component '" + it->second->decl->name +
                "' exports no variable '" + e.name + "'",
            e.span);
      return TypeSpec::error();
    }
    return m->type;
  }
  if (options_.forward != nullptr && options_.forward->count(e.name) != 0) {
    error(options_.forward_code,
          "'" + e.name + "' is used before its declaration", e.span);
    return TypeSpec::error();
  }
  const Symbol* s = scope_.lookup(e.name);
  if (s == nullptr) {
    error(options_.unknown_code, "unknown symbol '" + e.name + "'", e.span);
    return TypeSpec::error();
  }
  switch (s->kind) {
    case SymbolKind::buffer:
      error("E0410", "buffer '" + e.name + "' is read only via getSum",
            e.span);
      return TypeSpec::error();
    case SymbolKind::function:
    case SymbolKind::neuron:
    case SymbolKind::component:
      error(options_.unknown_code, "'" + e.name + "' is not a variable",
            e.span);
      return TypeSpec::error();
    case SymbolKind::builtin:
      if (e.name == "E") return TypeSpec::real();
      error(options_.unknown_code, "'" + e.name + "' is not a variable",
            e.span);
      return TypeSpec::error();
    default:
      return s->type;
  }
}

bool ExprTyper::coerce_arg(const ExprPtr& arg, const TypeSpec& target) {
  if (coerce(arg, target)) return true;
  error("E0303",
        "argument of type " + to_string(info_.type(arg.get())) +
            " does not match parameter type " + to_string(target),
        arg->span);
  return false;
}

TypeSpec ExprTyper::check_user_call(const Expr& e, const FunctionDecl& f) {
  if (e.args.size() != f.params.size()) {
    error("E0303",
          "'" + f.name + "' expects " + std::to_string(f.params.size()) +
              " argument(s), got " + std::to_string(e.args.size()),
          e.span);
    return TypeSpec::error();
  }
  for (size_t i = 0; i < e.args.size(); ++i) {
    auto pt = resolve_type_ref(f.params[i].type);
    coerce_arg(e.args[i], pt ? *pt : TypeSpec::error());
  }
  if (!f.return_type) return TypeSpec::void_();
  auto rt = resolve_type_ref(*f.return_type);
  return rt ? *rt : TypeSpec::error();
}

TypeSpec ExprTyper::check_builtin_call(const Expr& e, const std::string& name) {
  const BuiltinFunction* b = find_builtin(name);
  if (e.args.size() != b->params.size()) {
    error("E0303",
          "'" + name + "' expects " + std::to_string(b->params.size()) +
              " argument(s), got " + std::to_string(e.args.size()),
          e.span);
    return TypeSpec::error();
  }
  if (name == "min" || name == "max") {
    // Either both unitless, or the second converts to the first's unit.
    TypeSpec a = info_.type(e.args[0].get());
    if (is_unit(a)) {
      coerce_arg(e.args[1], a);
      return a;
    }
    TypeSpec c = info_.type(e.args[1].get());
    if (is_unit(c) && is_plain_literal(*e.args[0])) {
      coerce_arg(e.args[0], c);
      return c;
    }
  }
  for (size_t i = 0; i < e.args.size(); ++i) coerce_arg(e.args[i], b->params[i]);
  return b->result;
}

TypeSpec ExprTyper::visit_call(const Expr& e) {
  for (const auto& a : e.args) visit(*a);
  if (!e.qualifier.empty()) {
    const Symbol* q = scope_.lookup(e.qualifier);
    if (q != nullptr && q->kind == SymbolKind::buffer) {
      if (e.name != "getSum") {
        error("E0410", "buffers support only getSum, not '" + e.name + "'",
              e.span);
        return TypeSpec::error();
      }
      if (e.args.size() != 1) {
        error("E0303", "'getSum' expects 1 argument", e.span);
        return TypeSpec::error();
      }
      coerce_arg(e.args[0], TypeSpec::of_unit(parse_unit("ms")));
      return q->type.buffer == BufferKind::current
                 ? TypeSpec::of_unit(parse_unit("pA"))
                 : TypeSpec::real();
    }
    auto it = model_.components.find(e.qualifier);
    if (it == model_.components.end()) {
      if (e.name == "getSum") {
        error("E0410", "'" + e.qualifier + "' is not a declared input buffer",
              e.span);
      } else {
        error("E0406", "'" + e.qualifier + "' is not a used component",
              e.span);
      }
      return TypeSpec::error();
    }
    const Symbol* f = it->second->scope->find_local(e.name);
    if (f == nullptr || f->kind != SymbolKind::function) {
      error("E0406",
            "component '" + it->second->decl->name + "' defines no function '" +
                e.name + "'",
            e.span);
      return TypeSpec::error();
    }
    return check_user_call(e, *f->function);
  }
  const Symbol* s = scope_.lookup(e.name);
  if (s == nullptr) {
    error(options_.unknown_code, "unknown function '" + e.name + "'", e.span);
    return TypeSpec::error();
  }
  if (s->kind == SymbolKind::function) return check_user_call(e, *s->function);
  if (s->kind == SymbolKind::builtin && find_builtin(e.name) != nullptr) {
    return check_builtin_call(e, e.name);
  }
  error(options_.unknown_code, "'" + e.name + "' is not a function", e.span);
  return TypeSpec::error();
}

TypeSpec ExprTyper::visit_binary(const Expr& e) {
  TypeSpec l = visit(*e.lhs);
  TypeSpec r = visit(*e.rhs);
  const BinaryOp op = e.binary_op;
  auto mismatch = [&](const char* what) {
    error("E0301",
          std::string(what) + " '" + to_string(op) + "' on " + to_string(l) +
              " and " + to_string(r),
          e.span);
    return TypeSpec::error();
  };

  if (op == BinaryOp::and_ || op == BinaryOp::or_) {
    for (const TypeSpec* t : {&l, &r}) {
      if (t->kind != Kind::boolean && !is_error(*t)) {
        error("E0304",
              std::string("operand of '") + to_string(op) +
                  "' must be boolean, got " + to_string(*t),
              e.span);
      }
    }
    return TypeSpec::boolean();
  }

  const bool cmp = is_comparison(op);
  if (is_error(l) || is_error(r)) {
    return cmp ? TypeSpec::boolean() : TypeSpec::error();
  }

  if (cmp && (op == BinaryOp::eq || op == BinaryOp::ne) &&
      !l.is_numeric() && l.kind == r.kind &&
      (l.kind == Kind::boolean || l.kind == Kind::string)) {
    return TypeSpec::boolean();
  }
  if (!l.is_numeric() || !r.is_numeric()) return mismatch("invalid operands of");

  if (op == BinaryOp::add || op == BinaryOp::sub || cmp) {
    TypeSpec result;
    if (!is_unit(l) && !is_unit(r)) {
      result = (l.kind == Kind::integer && r.kind == Kind::integer)
                   ? TypeSpec::integer()
                   : TypeSpec::real();
    } else if (is_unit(l)) {
      if (!coerce(e.rhs, l)) return mismatch("dimension mismatch in");
      result = l;
    } else if (is_plain_literal(*e.lhs)) {
      result = r;
    } else {
      if (!coerce(e.rhs, l)) return mismatch("dimension mismatch in");
      result = l;
    }
    return cmp ? TypeSpec::boolean() : result;
  }
  if (op == BinaryOp::mul || op == BinaryOp::div) {
    if (is_unit(l) || is_unit(r)) {
      UnitType u = op == BinaryOp::mul ? unit_multiply(l.as_unit(), r.as_unit())
                                       : unit_divide(l.as_unit(), r.as_unit());
      return TypeSpec::of_unit(u);
    }
    if (op == BinaryOp::mul && l.kind == Kind::integer &&
        r.kind == Kind::integer) {
      return TypeSpec::integer();
    }
    return TypeSpec::real();
  }
  // pow
  if (is_unit(r)) return mismatch("exponent must be unitless in");
  auto n = integer_literal(*e.rhs);
  if (is_unit(l)) {
    if (!n) {
      error("E0301", "exponent of a unit-typed base must be an integer literal",
            e.rhs->span);
      return TypeSpec::error();
    }
    return TypeSpec::of_unit(unit_power(l.unit, *n));
  }
  if (l.kind == Kind::integer && n && *n >= 0) return TypeSpec::integer();
  return TypeSpec::real();
}

}  // namespace nestml

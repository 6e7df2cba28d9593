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

#include "nestml/odesolver/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nestml/semantics/expr_typer.hpp"
#include "nestml/syntax/pretty_printer.hpp"
#include "nestml/units/unit_type.hpp"

namespace nestml {

namespace {

using K = Sym::Kind;

std::string const_key(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "#%.17g", v);
  return buf;
}

std::string join_key(const char* head, const std::vector<SymPtr>& ops) {
  std::string k = "(";
  k += head;
  for (const auto& o : ops) {
    k += ' ';
    k += o->key;
  }
  k += ')';
  return k;
}

SymPtr node(K kind, std::vector<SymPtr> ops) {
  auto s = std::make_shared<Sym>();
  s->kind = kind;
  s->ops = std::move(ops);
  switch (kind) {
    case K::add: s->key = join_key("+", s->ops); break;
    case K::mul: s->key = join_key("*", s->ops); break;
    case K::pow: s->key = join_key("^", s->ops); break;
    case K::exp: s->key = join_key("exp", s->ops); break;
    case K::ln: s->key = join_key("ln", s->ops); break;
    default: break;
  }
  return s;
}

bool key_less(const SymPtr& a, const SymPtr& b) { return a->key < b->key; }

// Splits a term into numeric coefficient and the rest.
std::pair<double, SymPtr> split_coefficient(const SymPtr& t) {
  if (t->kind == K::mul && t->ops[0]->kind == K::constant) {
    std::vector<SymPtr> rest(t->ops.begin() + 1, t->ops.end());
    if (rest.size() == 1) return {t->ops[0]->value, rest[0]};
    return {t->ops[0]->value, node(K::mul, std::move(rest))};
  }
  return {1.0, t};
}

SymPtr with_coefficient(double c, const SymPtr& rest) {
  if (c == 1.0) return rest;
  std::vector<SymPtr> ops{sym_const(c)};
  if (rest->kind == K::mul) {
    ops.insert(ops.end(), rest->ops.begin(), rest->ops.end());
  } else {
    ops.push_back(rest);
  }
  return node(K::mul, std::move(ops));
}

std::optional<long> as_integer(const SymPtr& e) {
  if (e->kind != K::constant) return std::nullopt;
  double v = e->value;
  if (v != std::floor(v) || std::fabs(v) > 1e9) return std::nullopt;
  return static_cast<long>(v);
}

}  // namespace

SymPtr sym_const(double v) {
  if (v == 0.0) v = 0.0;  // no negative zero
  auto s = std::make_shared<Sym>();
  s->kind = K::constant;
  s->value = v;
  s->key = const_key(v);
  return s;
}

SymPtr sym_symbol(const std::string& name) {
  auto s = std::make_shared<Sym>();
  s->kind = K::symbol;
  s->name = name;
  s->key = name;
  return s;
}

SymPtr sym_atom(ExprPtr expr, std::set<std::string> deps) {
  auto s = std::make_shared<Sym>();
  s->kind = K::atom;
  s->name = pretty_print(expr);
  s->expr = std::move(expr);
  s->deps = std::move(deps);
  s->key = "@" + s->name;
  return s;
}

SymPtr sym_scale(int k) {
  if (k == 0) return sym_const(1.0);
  auto s = std::make_shared<Sym>();
  s->kind = K::scale;
  s->scale = k;
  s->key = "~" + std::to_string(k);
  return s;
}

SymPtr sym_add(std::vector<SymPtr> terms) {
  double constant = 0.0;
  std::map<std::string, std::pair<double, SymPtr>> groups;
  std::vector<SymPtr> stack(terms.rbegin(), terms.rend());
  while (!stack.empty()) {
    SymPtr t = stack.back();
    stack.pop_back();
    if (t->kind == K::add) {
      for (auto it = t->ops.rbegin(); it != t->ops.rend(); ++it) {
        stack.push_back(*it);
      }
    } else if (t->kind == K::constant) {
      constant += t->value;
    } else {
      auto [c, rest] = split_coefficient(t);
      auto& g = groups[rest->key];
      if (!g.second) g.second = rest;
      g.first += c;
    }
  }
  std::vector<SymPtr> out;
  if (constant != 0.0) out.push_back(sym_const(constant));
  for (auto& [key, g] : groups) {
    if (g.first != 0.0) out.push_back(with_coefficient(g.first, g.second));
  }
  if (out.empty()) return sym_const(0.0);
  if (out.size() == 1) return out[0];
  return node(K::add, std::move(out));
}

SymPtr sym_mul(std::vector<SymPtr> factors) {
  double coef = 1.0;
  int scale = 0;
  std::vector<SymPtr> exp_args;
  std::map<std::string, std::pair<SymPtr, std::vector<SymPtr>>> bases;
  std::vector<SymPtr> stack(factors.rbegin(), factors.rend());
  while (!stack.empty()) {
    SymPtr f = stack.back();
    stack.pop_back();
    switch (f->kind) {
      case K::mul:
        for (auto it = f->ops.rbegin(); it != f->ops.rend(); ++it) {
          stack.push_back(*it);
        }
        break;
      case K::constant: coef *= f->value; break;
      case K::scale: scale += f->scale; break;
      case K::exp: exp_args.push_back(f->ops[0]); break;
      case K::pow: {
        auto& b = bases[f->ops[0]->key];
        if (!b.first) b.first = f->ops[0];
        b.second.push_back(f->ops[1]);
        break;
      }
      default: {
        auto& b = bases[f->key];
        if (!b.first) b.first = f;
        b.second.push_back(sym_const(1.0));
        break;
      }
    }
  }
  if (coef == 0.0) return sym_const(0.0);

  std::vector<SymPtr> out;
  std::vector<SymPtr> redo;
  for (auto& [key, b] : bases) {
    SymPtr p = sym_pow(b.first, sym_add(b.second));
    switch (p->kind) {
      case K::constant: coef *= p->value; break;
      case K::pow: case K::symbol: case K::atom: case K::add: case K::ln:
        out.push_back(p);
        break;
      default: redo.push_back(p); break;
    }
  }
  if (!exp_args.empty()) {
    SymPtr e = sym_exp(sym_add(exp_args));
    if (e->kind == K::exp) {
      out.push_back(e);
    } else {
      redo.push_back(e);
    }
  }
  if (!redo.empty()) {
    redo.push_back(sym_const(coef));
    redo.push_back(sym_scale(scale));
    redo.insert(redo.end(), out.begin(), out.end());
    return sym_mul(std::move(redo));
  }
  if (coef == 0.0) return sym_const(0.0);
  if (scale != 0) out.push_back(sym_scale(scale));
  if (out.size() == 1 && out[0]->kind == K::add && coef != 1.0) {
    std::vector<SymPtr> terms;
    for (const auto& t : out[0]->ops) terms.push_back(sym_mul({sym_const(coef), t}));
    return sym_add(std::move(terms));
  }
  std::sort(out.begin(), out.end(), key_less);
  if (out.empty()) return sym_const(coef);
  if (coef == 1.0 && out.size() == 1) return out[0];
  if (coef != 1.0) out.insert(out.begin(), sym_const(coef));
  return node(K::mul, std::move(out));
}

SymPtr sym_pow(SymPtr base, SymPtr exponent) {
  if (exponent->is_constant(0.0)) return sym_const(1.0);
  if (exponent->is_constant(1.0)) return base;
  if (base->kind == K::constant) {
    if (base->value == 1.0) return sym_const(1.0);
    if (exponent->kind == K::constant) {
      double v = std::pow(base->value, exponent->value);
      if (std::isfinite(v)) return sym_const(v);
    }
  }
  if (base->kind == K::symbol && base->name == "E") return sym_exp(exponent);
  if (base->kind == K::exp) return sym_exp(sym_mul({base->ops[0], exponent}));
  if (auto n = as_integer(exponent)) {
    if (base->kind == K::scale) return sym_scale(static_cast<int>(base->scale * *n));
    if (base->kind == K::pow) {
      return sym_pow(base->ops[0], sym_mul({base->ops[1], exponent}));
    }
    if (base->kind == K::mul) {
      std::vector<SymPtr> fs;
      for (const auto& f : base->ops) fs.push_back(sym_pow(f, exponent));
      return sym_mul(std::move(fs));
    }
  }
  return node(K::pow, {std::move(base), std::move(exponent)});
}

SymPtr sym_exp(SymPtr arg) {
  if (arg->is_constant(0.0)) return sym_const(1.0);
  if (arg->kind == K::ln) return arg->ops[0];
  return node(K::exp, {std::move(arg)});
}

SymPtr sym_ln(SymPtr arg) {
  if (arg->is_constant(1.0)) return sym_const(0.0);
  if (arg->kind == K::exp) return arg->ops[0];
  if (arg->kind == K::symbol && arg->name == "E") return sym_const(1.0);
  return node(K::ln, {std::move(arg)});
}

SymPtr operator+(const SymPtr& a, const SymPtr& b) { return sym_add({a, b}); }
SymPtr operator-(const SymPtr& a, const SymPtr& b) {
  return sym_add({a, sym_mul({sym_const(-1.0), b})});
}
SymPtr operator*(const SymPtr& a, const SymPtr& b) { return sym_mul({a, b}); }
SymPtr operator/(const SymPtr& a, const SymPtr& b) {
  return sym_mul({a, sym_pow(b, sym_const(-1.0))});
}
SymPtr operator-(const SymPtr& a) { return sym_mul({sym_const(-1.0), a}); }

bool sym_equal(const SymPtr& a, const SymPtr& b) { return a->key == b->key; }
bool is_zero(const SymPtr& a) { return a->is_constant(0.0); }

SymPtr diff(const SymPtr& e, const std::string& var) {
  switch (e->kind) {
    case K::constant:
    case K::scale:
      return sym_const(0.0);
    case K::symbol:
      return sym_const(e->name == var ? 1.0 : 0.0);
    case K::atom:
      if (e->deps.count(var) != 0) {
        throw SymbolicError("cannot differentiate '" + e->name +
                            "' with respect to " + var);
      }
      return sym_const(0.0);
    case K::add: {
      std::vector<SymPtr> terms;
      for (const auto& t : e->ops) terms.push_back(diff(t, var));
      return sym_add(std::move(terms));
    }
    case K::mul: {
      std::vector<SymPtr> terms;
      for (size_t i = 0; i < e->ops.size(); ++i) {
        SymPtr d = diff(e->ops[i], var);
        if (is_zero(d)) continue;
        std::vector<SymPtr> fs = e->ops;
        fs[i] = d;
        terms.push_back(sym_mul(std::move(fs)));
      }
      return sym_add(std::move(terms));
    }
    case K::pow: {
      const SymPtr& b = e->ops[0];
      const SymPtr& x = e->ops[1];
      SymPtr db = diff(b, var);
      SymPtr dx = diff(x, var);
      if (is_zero(dx)) {
        if (is_zero(db)) return sym_const(0.0);
        return sym_mul({x, sym_pow(b, x - sym_const(1.0)), db});
      }
      // d(b^x) = b^x (x' ln b + x b'/b)
      return e * (dx * sym_ln(b) + x * db / b);
    }
    case K::exp:
      return e * diff(e->ops[0], var);
    case K::ln:
      return diff(e->ops[0], var) / e->ops[0];
  }
  return sym_const(0.0);
}

SymPtr substitute(const SymPtr& e, const std::map<std::string, SymPtr>& map) {
  switch (e->kind) {
    case K::symbol: {
      auto it = map.find(e->name);
      return it == map.end() ? e : it->second;
    }
    case K::constant:
    case K::scale:
    case K::atom:
      return e;
    case K::add:
    case K::mul: {
      std::vector<SymPtr> ops;
      for (const auto& o : e->ops) ops.push_back(substitute(o, map));
      return e->kind == K::add ? sym_add(std::move(ops)) : sym_mul(std::move(ops));
    }
    case K::pow:
      return sym_pow(substitute(e->ops[0], map), substitute(e->ops[1], map));
    case K::exp: return sym_exp(substitute(e->ops[0], map));
    case K::ln: return sym_ln(substitute(e->ops[0], map));
  }
  return e;
}

namespace {

void collect_free(const SymPtr& e, std::set<std::string>& out) {
  if (e->kind == K::symbol) out.insert(e->name);
  if (e->kind == K::atom) out.insert(e->deps.begin(), e->deps.end());
  for (const auto& o : e->ops) collect_free(o, out);
}

}  // namespace

std::set<std::string> free_symbols(const SymPtr& e) {
  std::set<std::string> out;
  collect_free(e, out);
  return out;
}

bool depends_on(const SymPtr& e, const std::string& name) {
  if (e->kind == K::symbol) return e->name == name;
  if (e->kind == K::atom) return e->deps.count(name) != 0;
  for (const auto& o : e->ops) {
    if (depends_on(o, name)) return true;
  }
  return false;
}

bool contains_atom(const SymPtr& e) {
  if (e->kind == K::atom) return true;
  for (const auto& o : e->ops) {
    if (contains_atom(o)) return true;
  }
  return false;
}

double evaluate(const SymPtr& e, const SymEnv& lookup) {
  switch (e->kind) {
    case K::constant: return e->value;
    case K::scale: return pow10(e->scale);
    case K::symbol:
    case K::atom:
      return lookup(*e);
    case K::add: {
      double s = 0.0;
      for (const auto& o : e->ops) s += evaluate(o, lookup);
      return s;
    }
    case K::mul: {
      double p = 1.0;
      for (const auto& o : e->ops) p *= evaluate(o, lookup);
      return p;
    }
    case K::pow: {
      double b = evaluate(e->ops[0], lookup);
      if (auto n = as_integer(e->ops[1]); n && *n == -1) return 1.0 / b;
      return std::pow(b, evaluate(e->ops[1], lookup));
    }
    case K::exp: return std::exp(evaluate(e->ops[0], lookup));
    case K::ln: return std::log(evaluate(e->ops[0], lookup));
  }
  return 0.0;
}

double evaluate(const SymPtr& e, const std::map<std::string, double>& env) {
  return evaluate(e, [&](const Sym& s) {
    auto it = env.find(s.name);
    if (it != env.end()) return it->second;
    if (s.kind == K::symbol && s.name == "E") return std::exp(1.0);
    throw SymbolicError("no value for '" + s.name + "'");
  });
}

namespace {

std::set<std::string> atom_deps(const Expr& call) {
  std::set<std::string> deps;
  if (!call.qualifier.empty() && call.name == "getSum") return deps;
  for (const auto& a : call.args) {
    for_each_expr(a, [&](const Expr& x) {
      if (x.kind == Expr::Kind::var) deps.insert(x.qualified_name());
    });
  }
  return deps;
}

SymPtr convert(const ExprPtr& e, const TypeInfo* types,
               const std::map<std::string, ExprPtr>& aliases, int depth) {
  if (depth > 64) throw SymbolicError("alias nesting too deep");
  SymPtr s;
  switch (e->kind) {
    case Expr::Kind::number:
      s = sym_const(e->value);
      break;
    case Expr::Kind::var:
      if (e->qualifier.empty()) {
        auto it = aliases.find(e->name);
        if (it != aliases.end()) {
          s = convert(it->second, types, aliases, depth + 1);
          break;
        }
      }
      s = sym_symbol(e->qualified_name());
      break;
    case Expr::Kind::call:
      if (e->qualifier.empty() && e->args.size() == 1 &&
          (e->name == "exp" || e->name == "ln")) {
        SymPtr a = convert(e->args[0], types, aliases, depth);
        s = e->name == "exp" ? sym_exp(a) : sym_ln(a);
      } else {
        s = sym_atom(clone(e), atom_deps(*e));
      }
      break;
    case Expr::Kind::paren:
      s = convert(e->lhs, types, aliases, depth);
      break;
    case Expr::Kind::unary:
      if (e->unary_op != UnaryOp::neg) {
        throw SymbolicError("'not' is not arithmetic");
      }
      s = -convert(e->lhs, types, aliases, depth);
      break;
    case Expr::Kind::binary: {
      SymPtr l = convert(e->lhs, types, aliases, depth);
      SymPtr r = convert(e->rhs, types, aliases, depth);
      switch (e->binary_op) {
        case BinaryOp::add: s = l + r; break;
        case BinaryOp::sub: s = l - r; break;
        case BinaryOp::mul: s = l * r; break;
        case BinaryOp::div: s = l / r; break;
        case BinaryOp::pow: s = sym_pow(l, r); break;
        default:
          throw SymbolicError(std::string("operator '") +
                              to_string(e->binary_op) + "' is not arithmetic");
      }
      break;
    }
    default:
      throw SymbolicError("expression is not arithmetic");
  }
  if (types != nullptr) {
    int k = types->conversion_exponent(e.get());
    if (k != 0) s = sym_scale(k) * s;
  }
  return s;
}

}  // namespace

SymPtr from_expr(const ExprPtr& e, const TypeInfo* types,
                 const std::map<std::string, ExprPtr>& aliases) {
  return convert(e, types, aliases, 0);
}

namespace {

ExprPtr number(double v) {
  if (v < 0) return make_unary(UnaryOp::neg, make_number(-v));
  return make_number(v);
}

ExprPtr product_expr(double coef, std::vector<SymPtr> factors,
                     bool negative);

// Expression for a term with its sign folded in where it reads naturally.
ExprPtr signed_term(const SymPtr& t) {
  if (t->kind == K::constant) return number(t->value);
  auto [c, rest] = split_coefficient(t);
  std::vector<SymPtr> fs;
  if (rest->kind == K::mul) {
    fs = rest->ops;
  } else {
    fs.push_back(rest);
  }
  return product_expr(std::fabs(c), fs, c < 0);
}

// Magnitude form of a term and its sign.
std::pair<ExprPtr, bool> term_expr(const SymPtr& t) {
  if (t->kind == K::constant) return {number(std::fabs(t->value)), t->value < 0};
  double c = split_coefficient(t).first;
  return {signed_term(c < 0 ? -t : t), c < 0};
}

bool is_leaf(const SymPtr& f) {
  return f->kind == K::symbol || f->kind == K::atom || f->kind == K::exp ||
         f->kind == K::ln;
}

ExprPtr product_expr(double coef, std::vector<SymPtr> factors,
                     bool negative) {
  std::vector<SymPtr> num_syms;
  std::vector<ExprPtr> den;
  for (const auto& f : factors) {
    if (f->kind == K::pow && f->ops[1]->kind == K::constant &&
        f->ops[1]->value < 0) {
      den.push_back(to_expr(sym_pow(f->ops[0], sym_const(-f->ops[1]->value))));
    } else {
      num_syms.push_back(f);
    }
  }
  // The sign goes into a sum factor, the numeric coefficient or a leading
  // leaf; otherwise the whole product is negated.
  bool negate_first = false;
  bool wrap = false;
  if (negative) {
    auto sum = std::find_if(num_syms.begin(), num_syms.end(),
                            [](const SymPtr& f) { return f->kind == K::add; });
    if (sum != num_syms.end()) {
      *sum = -*sum;
    } else if (coef != 1.0 || num_syms.empty()) {
      coef = -coef;
    } else if (is_leaf(num_syms.front())) {
      negate_first = true;
    } else {
      wrap = true;
    }
  }
  ExprPtr out;
  if (coef != 1.0 || num_syms.empty()) out = number(coef);
  for (size_t i = 0; i < num_syms.size(); ++i) {
    ExprPtr x = to_expr(num_syms[i]);
    if (i == 0 && negate_first) x = make_unary(UnaryOp::neg, x);
    out = out ? make_binary(BinaryOp::mul, out, x) : x;
  }
  for (auto& d : den) out = make_binary(BinaryOp::div, out, d);
  return wrap ? make_unary(UnaryOp::neg, out) : out;
}

}  // namespace

ExprPtr to_expr(const SymPtr& e) {
  switch (e->kind) {
    case K::constant: return number(e->value);
    case K::scale: {
      UnitType u;
      u.scale = -e->scale;
      return make_number(pow10(e->scale), {}, "(" + pretty_unit(u) + ")");
    }
    case K::symbol: {
      auto dot = e->name.find('.');
      if (dot == std::string::npos) return make_var(e->name);
      return make_var(e->name.substr(dot + 1), {}, e->name.substr(0, dot));
    }
    case K::atom: return clone(e->expr);
    case K::add: {
      struct Term {
        SymPtr sym;
        ExprPtr magnitude;
        bool negative;
      };
      std::vector<Term> terms;
      for (const auto& t : e->ops) {
        auto [mag, neg] = term_expr(t);
        terms.push_back({t, mag, neg});
      }
      std::stable_partition(terms.begin(), terms.end(),
                            [](const Term& t) { return !t.negative; });
      ExprPtr out = terms[0].negative ? signed_term(terms[0].sym)
                                      : terms[0].magnitude;
      for (size_t i = 1; i < terms.size(); ++i) {
        out = make_binary(terms[i].negative ? BinaryOp::sub : BinaryOp::add,
                          out, terms[i].magnitude);
      }
      return out;
    }
    case K::mul: return signed_term(e);
    case K::pow:
      if (e->ops[1]->kind == K::constant && e->ops[1]->value < 0) {
        return product_expr(1.0, {e}, false);
      }
      return make_binary(BinaryOp::pow, to_expr(e->ops[0]), to_expr(e->ops[1]));
    case K::exp: return make_call("exp", {to_expr(e->ops[0])});
    case K::ln: return make_call("ln", {to_expr(e->ops[0])});
  }
  return make_number(0);
}

std::string to_string(const SymPtr& e) { return pretty_print(to_expr(e)); }

}  // namespace nestml

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


#include "lowering_oracle.hpp"

#include <cmath>
#include <functional>
#include <regex>
#include <stdexcept>
#include <vector>

namespace nestml::testing {

double eval_dsl(const ExprPtr& e, const std::map<std::string, double>& env,
            const TypeInfo* types) {
  std::function<double(const ExprPtr&)> ev = [&](const ExprPtr& n) -> double {
    double v = 0.0;
    switch (n->kind) {
      case Expr::Kind::number: v = n->value; break;
      case Expr::Kind::var: v = env.at(n->name); break;
      case Expr::Kind::paren: v = ev(n->lhs); break;
      case Expr::Kind::unary: v = -ev(n->lhs); break;
      case Expr::Kind::call: {
        std::vector<double> a;
        for (const auto& x : n->args) a.push_back(ev(x));
        if (n->name == "exp") v = std::exp(a[0]);
        else if (n->name == "ln" || n->name == "log") v = std::log(a[0]);
        else if (n->name == "pow") v = std::pow(a[0], a[1]);
        else if (n->name == "min") v = std::min(a[0], a[1]);
        else if (n->name == "max") v = std::max(a[0], a[1]);
        else if (n->name == "resolution") v = env.at("__resolution");
        else throw std::runtime_error("call " + n->name);
        break;
      }
      case Expr::Kind::binary: {
        double l = ev(n->lhs), r = ev(n->rhs);
        switch (n->binary_op) {
          case BinaryOp::add: v = l + r; break;
          case BinaryOp::sub: v = l - r; break;
          case BinaryOp::mul: v = l * r; break;
          case BinaryOp::div: v = l / r; break;
          case BinaryOp::pow: v = std::pow(l, r); break;
          default: throw std::runtime_error("operator");
        }
        break;
      }
      default: throw std::runtime_error("node");
    }
    if (types != nullptr) v *= types->conversion_factor(n.get());
    return v;
  };
  return ev(e);
}

std::string to_dsl(std::string text) {
  static const std::vector<std::pair<std::regex, std::string>> rules = {
      {std::regex(R"(\b[SPV]_\.)"), ""},
      {std::regex(R"(static_cast<double>)"), ""},
      {std::regex(R"(std::exp\b)"), "exp"},
      {std::regex(R"(std::log\b)"), "ln"},
      {std::regex(R"(std::(pow|min|max)\b)"), "$1"},
      {std::regex(R"(nestml_shim::E\b)"), "E"},
      {std::regex(R"(nestml_shim::resolution\b)"), "resolution"}};
  for (const auto& [re, with] : rules) text = std::regex_replace(text, re, with);
  return text;
}

bool arithmetic(const ExprPtr& e, const ModelScope& m) {
  bool ok = true;
  for_each_expr(e, [&](const Expr& n) {
    if (n.kind == Expr::Kind::binary && n.binary_op != BinaryOp::add &&
        n.binary_op != BinaryOp::sub && n.binary_op != BinaryOp::mul &&
        n.binary_op != BinaryOp::div && n.binary_op != BinaryOp::pow) {
      ok = false;
    }
    if (n.kind == Expr::Kind::call && (!n.qualifier.empty() || n.name == "steps")) {
      ok = false;
    }
    if (n.kind == Expr::Kind::var) {
      const Symbol* s = m.scope->lookup(n.name);
      if (!n.qualifier.empty() || s == nullptr || s->kind == SymbolKind::alias) ok = false;
      if (s != nullptr && s->type.kind == TypeSpec::Kind::integer) ok = false;
    }
  });
  return ok;
}

}  // namespace nestml::testing

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

#ifndef NESTML_ODESOLVER_SYMBOLIC_HPP
#define NESTML_ODESOLVER_SYMBOLIC_HPP

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nestml/syntax/ast.hpp"

namespace nestml {

struct TypeInfo;

struct Sym;
using SymPtr = std::shared_ptr<const Sym>;

// Canonical symbolic expression. Nodes are built only through the smart
// constructors below, which keep them simplified: sums and products are
// flat and sorted, constants are folded, like terms and like bases are
// collected, exp(a)*exp(b) becomes exp(a+b), and numeric coefficients
// distribute over sums. Structurally equal inputs give equal keys.
struct Sym {
  enum class Kind { constant, symbol, atom, scale, add, mul, pow, exp, ln };

  Kind kind = Kind::constant;
  double value = 0.0;  // constant
  int scale = 0;       // scale: the power of ten 10^scale
  std::string name;    // symbol name, or the atom's printed text
  std::vector<SymPtr> ops;
  // atom: the opaque expression and the names its value depends on
  ExprPtr expr;
  std::set<std::string> deps;
  std::string key;

  bool is_constant(double v) const { return kind == Kind::constant && value == v; }
};

class SymbolicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SymPtr sym_const(double v);
SymPtr sym_symbol(const std::string& name);
// Opaque value such as `buf.getSum(t)` or a user function call.
SymPtr sym_atom(ExprPtr expr, std::set<std::string> deps);
// Exact power of ten that prints as a typed literal.
SymPtr sym_scale(int k);
SymPtr sym_add(std::vector<SymPtr> terms);
SymPtr sym_mul(std::vector<SymPtr> factors);
SymPtr sym_pow(SymPtr base, SymPtr exponent);
SymPtr sym_exp(SymPtr arg);
SymPtr sym_ln(SymPtr arg);

SymPtr operator+(const SymPtr& a, const SymPtr& b);
SymPtr operator-(const SymPtr& a, const SymPtr& b);
SymPtr operator*(const SymPtr& a, const SymPtr& b);
SymPtr operator/(const SymPtr& a, const SymPtr& b);
SymPtr operator-(const SymPtr& a);

bool sym_equal(const SymPtr& a, const SymPtr& b);
bool is_zero(const SymPtr& a);

// d/d`var`. Throws SymbolicError when an atom depends on `var`.
SymPtr diff(const SymPtr& e, const std::string& var);

SymPtr substitute(const SymPtr& e, const std::map<std::string, SymPtr>& map);

// Symbol names plus atom dependencies.
std::set<std::string> free_symbols(const SymPtr& e);
bool depends_on(const SymPtr& e, const std::string& name);
bool contains_atom(const SymPtr& e);

// `lookup` gives symbol values and atom values (by Sym::name). The symbol
// `E` defaults to Euler's number.
using SymEnv = std::function<double(const Sym&)>;
double evaluate(const SymPtr& e, const SymEnv& lookup);
double evaluate(const SymPtr& e, const std::map<std::string, double>& env);

// Conversion from the AST. Scale conversions recorded in `types` become
// scale factors; `aliases` are inlined. Throws SymbolicError for
// non-arithmetic nodes.
SymPtr from_expr(const ExprPtr& e, const TypeInfo* types,
                 const std::map<std::string, ExprPtr>& aliases = {});

// Readable AST form: sums put positive terms first, products read as
// `a * b / c`, scale factors print as typed literals.
ExprPtr to_expr(const SymPtr& e);
std::string to_string(const SymPtr& e);

}  // namespace nestml

#endif  // NESTML_ODESOLVER_SYMBOLIC_HPP

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

#ifndef NESTML_SEMANTICS_SYMBOL_TABLE_HPP
#define NESTML_SEMANTICS_SYMBOL_TABLE_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nestml/syntax/ast.hpp"
#include "nestml/units/type_spec.hpp"

namespace nestml {

enum class SymbolKind {
  state,
  alias,
  parameter,
  internal,
  local,
  function,
  buffer,
  component,
  neuron,
  builtin,
  shape,
};

const char* to_string(SymbolKind kind);

struct ModelScope;

struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::local;
  TypeSpec type;
  SourceSpan decl_span;
  bool writable = false;

  const Declaration* decl = nullptr;     // variables
  const FunctionDecl* function = nullptr;
  const InputLine* input = nullptr;
  const ShapeEq* shape = nullptr;
  const ModelScope* model = nullptr;     // neuron/component symbols
};

class Scope {
 public:
  explicit Scope(const Scope* parent = nullptr) : parent_(parent) {}

  const Symbol* lookup(const std::string& name) const;
  const Symbol* find_local(const std::string& name) const;
  // False when the name is already bound in this scope.
  bool add(Symbol sym);
  const Scope* parent() const { return parent_; }
  const std::map<std::string, Symbol>& symbols() const { return symbols_; }
  Symbol* find_mutable(const std::string& name);

 private:
  const Scope* parent_;
  std::map<std::string, Symbol> symbols_;
};

struct ModelScope {
  const ModelDecl* decl = nullptr;
  const ModelFile* file = nullptr;
  std::unique_ptr<Scope> scope;
  // use-alias -> component
  std::map<std::string, const ModelScope*> components;
};

class SymbolTable {
 public:
  SymbolTable();
  SymbolTable(SymbolTable&&) = default;
  SymbolTable& operator=(SymbolTable&&) = default;

  const Scope& global() const { return *global_; }
  Scope& global_mutable() { return *global_; }
  const ModelScope* model(const std::string& name) const;
  const ModelScope* model_of(const ModelDecl* decl) const;
  std::vector<const ModelScope*> models() const;  // declaration order
  ModelScope& add_model(const ModelDecl* decl, const ModelFile* file);
  std::vector<ModelScope*> models_mutable();

 private:
  std::unique_ptr<Scope> global_;
  std::vector<std::unique_ptr<ModelScope>> models_;
};

// Registers neurons, components, their blocks and the builtins; resolves
// imports and `use`. The files must outlive the table.
//   E0201 duplicate symbol, E0202 unresolved import, E0203 unresolved use.
Diagnostics build_symbol_table(const std::vector<ModelFile>& files,
                               SymbolTable& table);

// Signature of a builtin function, or nullptr.
struct BuiltinFunction {
  std::string name;
  std::vector<TypeSpec> params;
  TypeSpec result;
};
const BuiltinFunction* find_builtin(const std::string& name);

}  // namespace nestml

#endif  // NESTML_SEMANTICS_SYMBOL_TABLE_HPP

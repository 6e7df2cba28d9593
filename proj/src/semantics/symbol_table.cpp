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

#include "nestml/semantics/symbol_table.hpp"

#include <set>

#include "nestml/semantics/expr_typer.hpp"

namespace nestml {

const char* to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::state: return "state variable";
    case SymbolKind::alias: return "alias";
    case SymbolKind::parameter: return "parameter";
    case SymbolKind::internal: return "internal";
    case SymbolKind::local: return "local variable";
    case SymbolKind::function: return "function";
    case SymbolKind::buffer: return "buffer";
    case SymbolKind::component: return "component";
    case SymbolKind::neuron: return "neuron";
    case SymbolKind::builtin: return "builtin";
    case SymbolKind::shape: return "shape";
  }
  return "?";
}

const Symbol* Scope::lookup(const std::string& name) const {
  for (const Scope* s = this; s != nullptr; s = s->parent_) {
    if (const Symbol* sym = s->find_local(name)) return sym;
  }
  return nullptr;
}

const Symbol* Scope::find_local(const std::string& name) const {
  auto it = symbols_.find(name);
  return it == symbols_.end() ? nullptr : &it->second;
}

Symbol* Scope::find_mutable(const std::string& name) {
  auto it = symbols_.find(name);
  return it == symbols_.end() ? nullptr : &it->second;
}

bool Scope::add(Symbol sym) {
  std::string name = sym.name;
  return symbols_.emplace(std::move(name), std::move(sym)).second;
}

SymbolTable::SymbolTable() : global_(std::make_unique<Scope>()) {}

const ModelScope* SymbolTable::model(const std::string& name) const {
  for (const auto& m : models_) {
    if (m->decl->name == name) return m.get();
  }
  return nullptr;
}

const ModelScope* SymbolTable::model_of(const ModelDecl* decl) const {
  for (const auto& m : models_) {
    if (m->decl == decl) return m.get();
  }
  return nullptr;
}

std::vector<const ModelScope*> SymbolTable::models() const {
  std::vector<const ModelScope*> out;
  for (const auto& m : models_) out.push_back(m.get());
  return out;
}

std::vector<ModelScope*> SymbolTable::models_mutable() {
  std::vector<ModelScope*> out;
  for (auto& m : models_) out.push_back(m.get());
  return out;
}

ModelScope& SymbolTable::add_model(const ModelDecl* decl,
                                   const ModelFile* file) {
  auto m = std::make_unique<ModelScope>();
  m->decl = decl;
  m->file = file;
  m->scope = std::make_unique<Scope>(global_.get());
  models_.push_back(std::move(m));
  return *models_.back();
}

const BuiltinFunction* find_builtin(const std::string& name) {
  static const std::vector<BuiltinFunction> builtins = [] {
    TypeSpec ms = TypeSpec::of_unit(parse_unit("ms"));
    TypeSpec real = TypeSpec::real();
    return std::vector<BuiltinFunction>{
        {"resolution", {}, ms},
        {"steps", {ms}, TypeSpec::integer()},
        {"exp", {real}, real},
        {"ln", {real}, real},
        {"min", {real, real}, real},
        {"max", {real, real}, real},
        {"emitSpike", {}, TypeSpec::void_()},
        {"log_info", {TypeSpec::string()}, TypeSpec::void_()},
    };
  }();
  for (const auto& b : builtins) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

namespace {

TypeSpec declared_type(const TypeRef& ref) {
  auto t = resolve_type_ref(ref);
  return t ? *t : TypeSpec::error();
}

void register_builtins(Scope& global) {
  for (const char* name : {"resolution", "steps", "exp", "ln", "min", "max",
                           "emitSpike", "log_info"}) {
    Symbol s;
    s.name = name;
    s.kind = SymbolKind::builtin;
    s.type = find_builtin(name)->result;
    global.add(std::move(s));
  }
  Symbol e;
  e.name = "E";
  e.kind = SymbolKind::builtin;
  e.type = TypeSpec::real();
  global.add(std::move(e));
}

class Builder {
 public:
  Builder(SymbolTable& table, Diagnostics& diags)
      : table_(table), diags_(diags) {}

  void add(Scope& scope, Symbol sym) {
    const Symbol* prev = scope.find_local(sym.name);
    if (prev != nullptr) {
      diags_.push_back(make_error("E0201",
                                  "duplicate symbol '" + sym.name +
                                      "' (already declared as " +
                                      to_string(prev->kind) + ")",
                                  sym.decl_span));
      return;
    }
    scope.add(std::move(sym));
  }

  void add_block(ModelScope& m, const std::vector<Declaration>& decls,
                 SymbolKind kind) {
    for (const auto& d : decls) {
      for (const auto& name : d.names) {
        Symbol s;
        s.name = name;
        s.kind = d.is_alias ? SymbolKind::alias : kind;
        s.type = declared_type(d.type);
        s.decl_span = d.span;
        s.decl = &d;
        s.writable = kind == SymbolKind::state && !d.is_alias;
        add(*m.scope, std::move(s));
      }
    }
  }

  void add_model(const ModelFile& file, const ModelDecl& decl) {
    Symbol g;
    g.name = decl.name;
    g.kind = decl.is_component ? SymbolKind::component : SymbolKind::neuron;
    g.decl_span = decl.span;
    ModelScope& m = table_.add_model(&decl, &file);
    g.model = &m;
    add(table_.global_mutable(), std::move(g));

    if (decl.state) add_block(m, *decl.state, SymbolKind::state);
    if (decl.parameter) add_block(m, *decl.parameter, SymbolKind::parameter);
    if (decl.internal) add_block(m, *decl.internal, SymbolKind::internal);
    for (const auto& f : decl.functions) {
      Symbol s;
      s.name = f.name;
      s.kind = SymbolKind::function;
      s.type = f.return_type ? declared_type(*f.return_type)
                             : TypeSpec::void_();
      s.decl_span = f.span;
      s.function = &f;
      add(*m.scope, std::move(s));
    }
    if (decl.input) {
      for (const auto& in : *decl.input) {
        Symbol s;
        s.name = in.buffer;
        s.kind = SymbolKind::buffer;
        s.type = TypeSpec::buffer_of(in.kind);
        s.decl_span = in.span;
        s.input = &in;
        add(*m.scope, std::move(s));
      }
    }
    // Shapes are added only when fresh; the checker reports the rest.
    for (const auto& dyn : decl.dynamics) {
      for_each_stmt(dyn.body, [&](const Stmt& st) {
        if (st.kind != Stmt::Kind::ode) return;
        for (const auto& sh : st.ode.shapes) {
          if (m.scope->lookup(sh.name) != nullptr) continue;
          Symbol s;
          s.name = sh.name;
          s.kind = SymbolKind::shape;
          s.type = TypeSpec::error();
          s.decl_span = sh.span;
          s.shape = &sh;
          m.scope->add(std::move(s));
        }
      });
    }
    // Alias setters.
    for (auto& [name, sym] : std::map<std::string, Symbol>(m.scope->symbols())) {
      if (sym.kind != SymbolKind::alias) continue;
      const Symbol* setter = m.scope->find_local("set_" + name);
      bool ok = setter != nullptr && setter->kind == SymbolKind::function &&
                setter->function->params.size() == 1;
      m.scope->find_mutable(name)->writable = ok;
    }
  }

  void resolve_uses(const std::vector<ModelFile>& files) {
    for (const auto& file : files) {
      std::set<std::string> visible;
      for (const auto& d : file.decls) visible.insert(d.name);
      for (const auto& imp : file.imports) {
        if (table_.model(imp.name) == nullptr) {
          diags_.push_back(make_error(
              "E0202", "unresolved import '" + imp.name + "'", imp.span));
          continue;
        }
        visible.insert(imp.name);
      }
      for (const auto& decl : file.decls) {
        ModelScope* m = nullptr;
        for (auto* ms : table_.models_mutable()) {
          if (ms->decl == &decl) m = ms;
        }
        if (m == nullptr) continue;
        for (const auto& use : decl.uses) {
          const ModelScope* target = table_.model(use.component);
          if (target == nullptr || !target->decl->is_component ||
              visible.count(use.component) == 0) {
            diags_.push_back(make_error(
                "E0203", "unresolved use of component '" + use.component + "'",
                use.span));
            continue;
          }
          std::string alias = use.alias.empty() ? use.component : use.alias;
          Symbol s;
          s.name = alias;
          s.kind = SymbolKind::component;
          s.decl_span = use.span;
          s.model = target;
          if (m->scope->find_local(alias) != nullptr) {
            diags_.push_back(make_error(
                "E0201", "duplicate symbol '" + alias + "'", use.span));
            continue;
          }
          m->scope->add(std::move(s));
          m->components[alias] = target;
        }
      }
    }
  }

  // Shape types come from their kernels with `t` in ms.
  void type_shapes() {
    for (auto* m : table_.models_mutable()) {
      for (auto& [name, sym] : std::map<std::string, Symbol>(m->scope->symbols())) {
        if (sym.kind != SymbolKind::shape) continue;
        Scope frame(m->scope.get());
        Symbol t;
        t.name = "t";
        t.kind = SymbolKind::local;
        t.type = TypeSpec::of_unit(parse_unit("ms"));
        frame.add(std::move(t));
        TypeInfo scratch;
        ExprTyper typer(*m, frame, scratch, nullptr);
        m->scope->find_mutable(name)->type = typer.type_of(sym.shape->kernel);
      }
    }
  }

 private:
  SymbolTable& table_;
  Diagnostics& diags_;
};

}  // namespace

Diagnostics build_symbol_table(const std::vector<ModelFile>& files,
                               SymbolTable& table) {
  Diagnostics diags;
  register_builtins(table.global_mutable());
  Builder b(table, diags);
  for (const auto& file : files) {
    for (const auto& decl : file.decls) b.add_model(file, decl);
  }
  b.resolve_uses(files);
  b.type_shapes();
  sort_diagnostics(diags);
  return diags;
}

}  // namespace nestml

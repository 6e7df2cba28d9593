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

#include "nestml/semantics/context_conditions.hpp"

#include <set>

namespace nestml {

namespace {

using Kind = TypeSpec::Kind;
using Names = std::set<std::string>;

TypeSpec ms_type() { return TypeSpec::of_unit(parse_unit("ms")); }

bool is_model_variable(SymbolKind k) {
  return k == SymbolKind::state || k == SymbolKind::parameter ||
         k == SymbolKind::internal || k == SymbolKind::alias;
}

bool mentions(const ExprPtr& e, const std::string& name) {
  bool found = false;
  for_each_expr(e, [&](const Expr& x) {
    if (x.kind == Expr::Kind::var && x.qualifier.empty() && x.name == name) {
      found = true;
    }
  });
  return found;
}

// Every expression directly held by a statement, not descending into
// nested blocks.
template <typename F>
void stmt_exprs(const Stmt& s, F&& f) {
  if (s.target) f(s.target);
  if (s.value) f(s.value);
  for (const auto& b : s.branches) f(b.cond);
  if (s.decl.init) f(s.decl.init);
  if (s.decl.guard) f(s.decl.guard);
  for (const auto& sh : s.ode.shapes) f(sh.kernel);
  for (const auto& eq : s.ode.equations) f(eq.rhs);
}

struct BodyContext {
  bool dynamics = false;
  const FunctionDecl* function = nullptr;
};

class Checker {
 public:
  Checker(TypeInfo& info, Diagnostics& diags) : info_(info), diags_(diags) {}

  void check_model(const ModelScope& m) {
    check_blocks(m);
    for (const auto& f : m.decl->functions) check_function(m, f);
    for (const auto& d : m.decl->dynamics) check_dynamics(m, d);
    check_outputs(m);
  }

 private:
  void error(const std::string& code, const std::string& msg,
             const SourceSpan& span) {
    diags_.push_back(make_error(code, msg, span));
  }

  TypeSpec check_type_ref(const TypeRef& ref) {
    auto t = resolve_type_ref(ref);
    if (!t) {
      error("E0302", "unknown type '" + ref.text + "'", ref.span);
      return TypeSpec::error();
    }
    return *t;
  }

  TypeSpec type_expr(const ModelScope& m, const Scope& scope,
                     const ExprPtr& e, const TypingOptions& opts = {}) {
    ExprTyper typer(m, scope, info_, &diags_, opts);
    return typer.type_of(e);
  }

  bool coerce(const ModelScope& m, const Scope& scope, const ExprPtr& e,
              const TypeSpec& target) {
    ExprTyper typer(m, scope, info_, nullptr);
    return typer.coerce(e, target);
  }

  void assign_mismatch(const ExprPtr& value, const TypeSpec& target,
                       const std::string& what) {
    error("E0402",
          "cannot assign " + to_string(info_.type(value.get())) + " to " +
              what + " of type " + to_string(target),
          value->span);
  }

  // CC-01, CC-02, CC-04, CC-05 and W0310 over the declaration blocks, in
  // their evaluation order: parameters, internals, state.
  void check_blocks(const ModelScope& m) {
    struct BlockRef {
      const std::vector<Declaration>* decls;
      SymbolKind kind;
    };
    std::vector<BlockRef> blocks;
    if (m.decl->parameter) blocks.push_back({&*m.decl->parameter, SymbolKind::parameter});
    if (m.decl->internal) blocks.push_back({&*m.decl->internal, SymbolKind::internal});
    if (m.decl->state) blocks.push_back({&*m.decl->state, SymbolKind::state});

    const Scope& scope = *m.scope;
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
      Names later;
      for (size_t bj = bi + 1; bj < blocks.size(); ++bj) {
        for (const auto& d : *blocks[bj].decls) {
          later.insert(d.names.begin(), d.names.end());
        }
      }
      const auto& decls = *blocks[bi].decls;
      for (size_t i = 0; i < decls.size(); ++i) {
        const Declaration& d = decls[i];
        TypeSpec declared = check_type_ref(d.type);
        Names own(d.names.begin(), d.names.end());
        Names rest = later;
        for (size_t j = i + 1; j < decls.size(); ++j) {
          rest.insert(decls[j].names.begin(), decls[j].names.end());
        }
        if (d.is_alias) {
          if (d.names.size() != 1) {
            error("E0404", "an alias declares exactly one name", d.span);
          }
          if (!d.init) {
            error("E0404", "alias '" + d.names[0] + "' needs an initializer",
                  d.span);
          }
        }
        if (d.init) {
          TypingOptions opts;
          Names forward = own;
          if (!d.is_alias) forward.insert(rest.begin(), rest.end());
          opts.forward = &forward;
          TypeSpec t = type_expr(m, scope, d.init, opts);
          if (!coerce(m, scope, d.init, declared)) {
            if (blocks[bi].kind == SymbolKind::internal &&
                declared.kind == Kind::real && t.kind == Kind::unit) {
              diags_.push_back(make_warning(
                  "W0310",
                  "unit " + to_string(t) + " taken as real for '" +
                      d.names[0] + "'",
                  d.init->span));
            } else {
              assign_mismatch(d.init, declared, "'" + d.names[0] + "'");
            }
          }
        }
        if (d.guard) {
          TypingOptions opts;
          opts.forward = &rest;
          opts.forward_code = "E0405";
          opts.unknown_code = "E0405";
          TypeSpec g = type_expr(m, scope, d.guard, opts);
          if (g.kind != Kind::boolean && g.kind != Kind::error) {
            error("E0405", "guard must be boolean, got " + to_string(g),
                  d.guard->span);
          }
        }
      }
    }
  }

  void declare_params(const ModelScope& m, const std::vector<Param>& params,
                      Scope& scope) {
    for (const auto& p : params) {
      Symbol s;
      s.name = p.name;
      s.kind = SymbolKind::local;
      s.type = check_type_ref(p.type);
      s.decl_span = p.span;
      s.writable = true;
      declare_local(m, scope, std::move(s));
    }
  }

  // CC-07
  void declare_local(const ModelScope&, Scope& scope, Symbol s) {
    if (scope.find_local(s.name) != nullptr) {
      error("E0201", "duplicate symbol '" + s.name + "'", s.decl_span);
      return;
    }
    const Symbol* outer = scope.lookup(s.name);
    if (outer != nullptr && (is_model_variable(outer->kind) ||
                             outer->kind == SymbolKind::local ||
                             outer->kind == SymbolKind::shape ||
                             outer->kind == SymbolKind::buffer)) {
      error("E0407",
            "local '" + s.name + "' shadows " + to_string(outer->kind) +
                " '" + s.name + "'",
            s.decl_span);
      return;
    }
    scope.add(std::move(s));
  }

  void check_function(const ModelScope& m, const FunctionDecl& f) {
    Scope scope(m.scope.get());
    declare_params(m, f.params, scope);
    if (f.return_type) check_type_ref(*f.return_type);
    BodyContext ctx;
    ctx.function = &f;
    check_body(m, f.body, scope, ctx, {});
  }

  void check_dynamics(const ModelScope& m, const DynamicsDecl& d) {
    Scope scope(m.scope.get());
    declare_params(m, d.params, scope);
    BodyContext ctx;
    ctx.dynamics = true;
    check_body(m, d.body, scope, ctx, {});
  }

  void check_body(const ModelScope& m, const Block& block, const Scope& parent,
                  const BodyContext& ctx, const Names& outer_pending) {
    Scope scope(&parent);
    Names pending = outer_pending;
    for (const auto& s : block) {
      if (s->kind == Stmt::Kind::local) {
        pending.insert(s->decl.names.begin(), s->decl.names.end());
      }
    }
    for (const auto& sp : block) {
      const Stmt& s = *sp;
      TypingOptions opts;
      opts.forward = &pending;
      switch (s.kind) {
        case Stmt::Kind::local: {
          const Declaration& d = s.decl;
          TypeSpec declared = check_type_ref(d.type);
          if (d.init) {
            type_expr(m, scope, d.init, opts);
            if (!coerce(m, scope, d.init, declared)) {
              assign_mismatch(d.init, declared, "'" + d.names[0] + "'");
            }
          }
          for (const auto& n : d.names) pending.erase(n);
          for (const auto& n : d.names) {
            Symbol sym;
            sym.name = n;
            sym.kind = SymbolKind::local;
            sym.type = declared;
            sym.decl_span = d.span;
            sym.writable = true;
            declare_local(m, scope, std::move(sym));
          }
          break;
        }
        case Stmt::Kind::assign:
          check_assign(m, scope, s, ctx, opts);
          break;
        case Stmt::Kind::call:
          type_expr(m, scope, s.value, opts);
          break;
        case Stmt::Kind::return_:
          check_return(m, scope, s, ctx, opts);
          break;
        case Stmt::Kind::if_chain:
          for (const auto& b : s.branches) {
            TypeSpec c = type_expr(m, scope, b.cond, opts);
            if (c.kind != Kind::boolean && c.kind != Kind::error) {
              error("E0304", "condition must be boolean, got " + to_string(c),
                    b.cond->span);
            }
            check_body(m, b.body, scope, ctx, pending);
          }
          if (s.has_else) check_body(m, s.else_body, scope, ctx, pending);
          break;
        case Stmt::Kind::ode:
          check_ode(m, scope, s, ctx, opts);
          break;
      }
    }
  }

  void check_assign(const ModelScope& m, const Scope& scope, const Stmt& s,
                    const BodyContext& ctx, const TypingOptions& opts) {
    const Expr& target = *s.target;
    type_expr(m, scope, s.value, opts);
    const Symbol* sym = nullptr;
    if (!target.qualifier.empty()) {
      auto it = m.components.find(target.qualifier);
      if (it == m.components.end()) {
        error("E0302", "unknown symbol '" + target.qualified_name() + "'",
              target.span);
        return;
      }
      sym = it->second->scope->find_local(target.name);
      if (sym == nullptr || sym->kind == SymbolKind::alias) {
        error("E0302",
              "component '" + it->second->decl->name +
                  "' exports no variable '" + target.name + "'",
              target.span);
        return;
      }
    } else {
      if (opts.forward->count(target.name) != 0) {
        error("E0401", "'" + target.name + "' is used before its declaration",
              target.span);
        return;
      }
      sym = scope.lookup(target.name);
      if (sym == nullptr) {
        error("E0302", "unknown symbol '" + target.name + "'", target.span);
        return;
      }
    }
    switch (sym->kind) {
      case SymbolKind::state:
      case SymbolKind::local:
        break;
      case SymbolKind::alias:
        if (!sym->writable) {
          error("E0404",
                "alias '" + sym->name + "' has no setter set_" + sym->name,
                target.span);
          return;
        }
        break;
      default:
        error("E0403",
              std::string(ctx.dynamics ? "dynamics" : "functions") +
                  " may not assign " + to_string(sym->kind) + " '" +
                  sym->name + "'",
              target.span);
        return;
    }
    info_.types[&target] = sym->type;
    TypeSpec want = sym->type;
    if (s.assign_op == AssignOp::mul || s.assign_op == AssignOp::div) {
      want = want.kind == Kind::integer ? TypeSpec::integer() : TypeSpec::real();
    }
    if (!coerce(m, scope, s.value, want)) {
      assign_mismatch(s.value, want, "'" + sym->name + "'");
    }
  }

  void check_return(const ModelScope& m, const Scope& scope, const Stmt& s,
                    const BodyContext& ctx, const TypingOptions& opts) {
    if (s.value) type_expr(m, scope, s.value, opts);
    const FunctionDecl* f = ctx.function;
    if (f == nullptr || !f->return_type) {
      if (s.value) error("E0402", "return with a value outside a typed function", s.span);
      return;
    }
    auto rt = resolve_type_ref(*f->return_type);
    TypeSpec want = rt ? *rt : TypeSpec::error();
    if (!s.value) {
      error("E0402", "'" + f->name + "' must return " + to_string(want),
            s.span);
      return;
    }
    if (!coerce(m, scope, s.value, want)) {
      assign_mismatch(s.value, want, "return value");
    }
  }

  // CC-09
  void check_ode(const ModelScope& m, const Scope& scope, const Stmt& s,
                 const BodyContext& ctx, const TypingOptions& opts) {
    if (!ctx.dynamics) {
      error("E0409", "ODE blocks are allowed only in dynamics", s.span);
    }
    for (const auto& sh : s.ode.shapes) {
      const Symbol* sym = scope.lookup(sh.name);
      if (sym == nullptr || sym->shape != &sh) {
        error("E0409", "shape name '" + sh.name + "' is not fresh", sh.span);
      }
      Scope frame(&scope);
      Symbol t;
      t.name = "t";
      t.kind = SymbolKind::local;
      t.type = ms_type();
      frame.add(std::move(t));
      info_.shape_types[&sh] = type_expr(m, frame, sh.kernel, opts);
      if (!mentions(sh.kernel, "t")) {
        error("E0409", "shape '" + sh.name + "' does not depend on t",
              sh.kernel->span);
      }
      if (mentions(sh.kernel, sh.name)) {
        error("E0409", "shape '" + sh.name + "' refers to itself",
              sh.kernel->span);
      }
      if (!sh.buffer.empty()) {
        const Symbol* b = m.scope->find_local(sh.buffer);
        if (b == nullptr || b->kind != SymbolKind::buffer) {
          error("E0410", "'" + sh.buffer + "' is not a declared input buffer",
                sh.span);
        }
      }
    }
    Names seen;
    for (const auto& eq : s.ode.equations) {
      TypeSpec rhs = type_expr(m, scope, eq.rhs, opts);
      const Symbol* sym = m.scope->find_local(eq.state_var);
      if (sym == nullptr || sym->kind != SymbolKind::state) {
        error("E0409",
              "'" + eq.state_var + "' is not declared in the state block",
              eq.span);
        continue;
      }
      if (!seen.insert(eq.state_var).second) {
        error("E0409", "second equation for '" + eq.state_var + "'", eq.span);
        continue;
      }
      if (sym->type.kind == Kind::error) continue;
      if (!sym->type.is_numeric() || sym->type.kind == Kind::integer) {
        error("E0409", "'" + eq.state_var + "' is not a real-valued state",
              eq.span);
        continue;
      }
      TypeSpec want = TypeSpec::of_unit(
          unit_divide(sym->type.as_unit(), ms_type().unit));
      if (!coerce(m, scope, eq.rhs, want)) {
        error("E0301",
              "right-hand side of d/dt " + eq.state_var + " has type " +
                  to_string(rhs) + ", expected " + to_string(want),
              eq.rhs->span);
      }
    }
  }

  // CC-08
  void check_outputs(const ModelScope& m) {
    const auto& outs = m.decl->outputs;
    for (size_t i = 1; i < outs.size(); ++i) {
      error("E0408", "more than one output block", outs[i].span);
    }
    bool spike_out = !outs.empty() && outs[0].kind == BufferKind::spike;
    if (spike_out) return;
    auto scan = [&](const Block& body) {
      for_each_stmt(body, [&](const Stmt& s) {
        stmt_exprs(s, [&](const ExprPtr& e) {
          for_each_expr(e, [&](const Expr& x) {
            if (x.kind == Expr::Kind::call && x.qualifier.empty() &&
                x.name == "emitSpike") {
              error("E0408", "emitSpike() requires a spike output block",
                    x.span);
            }
          });
        });
      });
    };
    for (const auto& f : m.decl->functions) scan(f.body);
    for (const auto& d : m.decl->dynamics) scan(d.body);
  }

  TypeInfo& info_;
  Diagnostics& diags_;
};

}  // namespace

Diagnostics check_context_conditions(const std::vector<ModelFile>& files,
                                     const SymbolTable& table,
                                     TypeInfo* types) {
  Diagnostics diags;
  TypeInfo local;
  TypeInfo& info = types != nullptr ? *types : local;
  Checker checker(info, diags);
  for (const auto& file : files) {
    for (const auto& decl : file.decls) {
      if (const ModelScope* m = table.model_of(&decl)) checker.check_model(*m);
    }
  }
  sort_diagnostics(diags);
  return diags;
}

Analysis analyze(const std::vector<ModelFile>& files) {
  Analysis a;
  a.diagnostics = build_symbol_table(files, a.table);
  Diagnostics more = check_context_conditions(files, a.table, &a.types);
  a.diagnostics.insert(a.diagnostics.end(), more.begin(), more.end());
  sort_diagnostics(a.diagnostics);
  return a;
}

}  // namespace nestml

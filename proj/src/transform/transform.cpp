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


#include "nestml/transform/transform.hpp"

#include <algorithm>
#include <set>

#include "nestml/syntax/parser.hpp"
#include "nestml/syntax/pretty_printer.hpp"

namespace nestml {

const char* to_string(TransformReport::Mode mode) {
  switch (mode) {
    case TransformReport::Mode::exact: return "exact";
    case TransformReport::Mode::numeric: return "numeric";
    case TransformReport::Mode::none: return "none";
  }
  return "none";
}

namespace {

using ExprMap = std::map<std::string, ExprPtr>;

// Fresh copy of `e` with unqualified variables replaced.
ExprPtr substitute_vars(const ExprPtr& e, const ExprMap& repl) {
  if (!e) return nullptr;
  switch (e->kind) {
    case Expr::Kind::var:
      if (e->qualifier.empty()) {
        auto it = repl.find(e->name);
        if (it != repl.end()) return clone(it->second);
      }
      return clone(e);
    case Expr::Kind::call: {
      std::vector<ExprPtr> args;
      for (const auto& a : e->args) args.push_back(substitute_vars(a, repl));
      return make_call(e->name, std::move(args), e->span, e->qualifier);
    }
    case Expr::Kind::unary:
      return make_unary(e->unary_op, substitute_vars(e->lhs, repl), e->span);
    case Expr::Kind::binary:
      return make_binary(e->binary_op, substitute_vars(e->lhs, repl),
                         substitute_vars(e->rhs, repl), e->span);
    case Expr::Kind::paren:
      return make_paren(substitute_vars(e->lhs, repl), e->span);
    default:
      return clone(e);
  }
}

std::set<std::string> var_names(const ExprPtr& e) {
  std::set<std::string> out;
  for_each_expr(e, [&](const Expr& n) {
    if (n.kind == Expr::Kind::var && n.qualifier.empty()) out.insert(n.name);
  });
  return out;
}

ExprPtr grouped(ExprPtr e) {
  if (e->kind == Expr::Kind::binary || e->kind == Expr::Kind::unary) {
    return make_paren(std::move(e));
  }
  return e;
}

ExprPtr inline_aliases(const ExprPtr& e, const SolverContext& ctx) {
  ExprMap repl;
  for (const auto& [name, init] : ctx.aliases) repl[name] = grouped(clone(init));
  ExprPtr out = e;
  for (int depth = 0; depth < 16; ++depth) {
    bool any = false;
    for (const auto& v : var_names(out)) any = any || repl.count(v) > 0;
    if (!any) break;
    out = substitute_vars(out, repl);
  }
  return out;
}

Declaration make_decl(const std::string& name, const std::string& type,
                      ExprPtr init) {
  Declaration d;
  d.names = {name};
  d.type.text = type;
  d.init = std::move(init);
  return d;
}

StmtPtr make_set(const std::string& var, ExprPtr value,
                 AssignOp op = AssignOp::set) {
  return make_assign(make_var(var), op, std::move(value));
}

// Replaces `target` (searched through if branches) by `replacement`.
Block splice(const Block& block, const Stmt* target, const Block& replacement) {
  Block out;
  for (const auto& s : block) {
    if (s.get() == target) {
      out.insert(out.end(), replacement.begin(), replacement.end());
      continue;
    }
    if (s->kind == Stmt::Kind::if_chain) {
      Stmt copy = *s;
      for (auto& b : copy.branches) b.body = splice(b.body, target, replacement);
      copy.else_body = splice(copy.else_body, target, replacement);
      out.push_back(std::make_shared<const Stmt>(std::move(copy)));
      continue;
    }
    out.push_back(s);
  }
  return out;
}

bool contains(const Block& block, const Stmt* target) {
  bool found = false;
  for_each_stmt(block, [&](const Stmt& s) { found = found || &s == target; });
  return found;
}

// Alias writes become setter calls; `x op= v` becomes `set_x(x op v)`.
Block rewrite_alias_writes(const Block& block, const std::set<std::string>& aliases,
                           const std::string& skip) {
  Block out;
  for (const auto& s : block) {
    if (s->kind == Stmt::Kind::assign && s->target->qualifier.empty() &&
        aliases.count(s->target->name) > 0 && s->target->name != skip) {
      const std::string& name = s->target->name;
      ExprPtr value = s->value;
      static const std::map<AssignOp, BinaryOp> ops = {
          {AssignOp::add, BinaryOp::add},
          {AssignOp::sub, BinaryOp::sub},
          {AssignOp::mul, BinaryOp::mul},
          {AssignOp::div, BinaryOp::div}};
      auto op = ops.find(s->assign_op);
      if (op != ops.end()) {
        value = make_binary(op->second, make_var(name), grouped(value));
      }
      out.push_back(
          make_call_stmt(make_call("set_" + name, {value}, s->span), s->span));
      continue;
    }
    if (s->kind == Stmt::Kind::if_chain) {
      Stmt copy = *s;
      for (auto& b : copy.branches) {
        b.body = rewrite_alias_writes(b.body, aliases, skip);
      }
      copy.else_body = rewrite_alias_writes(copy.else_body, aliases, skip);
      out.push_back(std::make_shared<const Stmt>(std::move(copy)));
      continue;
    }
    out.push_back(s);
  }
  return out;
}

void rewrite_aliases(ModelDecl& model, const SolverContext& ctx) {
  std::set<std::string> aliases;
  for (const auto& [name, init] : ctx.aliases) {
    bool has_setter = std::any_of(
        model.functions.begin(), model.functions.end(),
        [&](const FunctionDecl& f) { return f.name == "set_" + name; });
    if (has_setter) aliases.insert(name);
  }
  if (aliases.empty()) return;
  for (auto& d : model.dynamics) d.body = rewrite_alias_writes(d.body, aliases, "");
  for (auto& f : model.functions) {
    std::string own = f.name.rfind("set_", 0) == 0 ? f.name.substr(4) : "";
    f.body = rewrite_alias_writes(f.body, aliases, own);
  }
}

std::string fresh_name(const std::string& base, const SolverContext& ctx) {
  return ctx.taken_names.count(base) > 0 ? "__" + base : base;
}

std::vector<Declaration>& block_of(std::optional<std::vector<Declaration>>& b) {
  if (!b) b.emplace();
  return *b;
}

Block spike_statements(const SolverPlan& plan, const std::string& time) {
  Block out;
  for (const auto& [buffer, incs] : plan.spike_increments) {
    SymPtr sum = sym_atom(make_call("getSum", {make_var(time)}, {}, buffer), {});
    for (const auto& inc : incs) {
      out.push_back(make_set(inc.name, to_expr(inc.expr * sum), AssignOp::add));
    }
  }
  return out;
}

// Exact updates ordered so that a slot is written after every update that
// reads it; remaining conflicts read from snapshots.
Block exact_statements(const SolverPlan& plan, const SolverContext& ctx) {
  std::vector<std::pair<std::string, ExprPtr>> updates;
  for (auto it = plan.updates.rbegin(); it != plan.updates.rend(); ++it) {
    updates.emplace_back(it->name, to_expr(it->expr));
  }
  Block out;
  ExprMap snapshots;
  for (size_t k = 0; k < updates.size(); ++k) {
    const std::string& var = updates[k].first;
    bool read_later = false;
    for (size_t m = k + 1; m < updates.size(); ++m) {
      read_later = read_later || var_names(updates[m].second).count(var) > 0;
    }
    if (!read_later) continue;
    std::string pre = var + "__pre";
    auto type = ctx.variable_types.find(var);
    std::string type_str;
    for (const auto& s : plan.slots) {
      if (s.name == var) type_str = type_text(s.type, ctx);
    }
    if (type_str.empty() && type != ctx.variable_types.end()) {
      type_str = type_text(type->second, ctx);
    }
    out.push_back(make_local(make_decl(pre, type_str, make_var(var))));
    snapshots[var] = make_var(pre);
  }
  std::set<std::string> written;
  for (const auto& [var, value] : updates) {
    ExprMap repl;
    for (const auto& w : written) {
      if (snapshots.count(w) > 0) repl[w] = snapshots[w];
    }
    out.push_back(make_set(var, substitute_vars(value, repl)));
    written.insert(var);
  }
  return out;
}

FunctionDecl rk4_function(const SolverPlan& plan, const SolverContext& ctx,
                          const std::string& name, const std::string& h) {
  FunctionDecl f;
  f.name = name;
  Param p;
  p.name = ctx.time;
  p.type.text = "ms";
  f.params.push_back(p);

  std::vector<std::string> vars;
  std::vector<ExprPtr> rhs;
  std::vector<std::string> types;
  for (const auto& r : plan.rhs) {
    vars.push_back(r.name);
    rhs.push_back(r.source ? inline_aliases(r.source, ctx) : to_expr(r.expr));
    types.push_back(type_text(r.type, ctx));
  }
  auto k_name = [&](int stage, const std::string& var) {
    return "__k" + std::to_string(stage) + "_" + var;
  };
  for (int stage = 1; stage <= 4; ++stage) {
    ExprMap repl;
    if (stage > 1) {
      for (const auto& v : vars) {
        ExprPtr step = stage == 4 ? make_var(h)
                                  : make_binary(BinaryOp::div, make_var(h),
                                                make_number(2));
        repl[v] = make_paren(make_binary(
            BinaryOp::add, make_var(v),
            make_binary(BinaryOp::mul, step, make_var(k_name(stage - 1, v)))));
      }
    }
    for (size_t i = 0; i < vars.size(); ++i) {
      f.body.push_back(make_local(make_decl(k_name(stage, vars[i]), types[i],
                                            substitute_vars(rhs[i], repl))));
    }
  }
  for (const auto& v : vars) {
    ExprPtr sum = make_binary(
        BinaryOp::add,
        make_binary(
            BinaryOp::add,
            make_binary(BinaryOp::add, make_var(k_name(1, v)),
                        make_binary(BinaryOp::mul, make_number(2),
                                    make_var(k_name(2, v)))),
            make_binary(BinaryOp::mul, make_number(2), make_var(k_name(3, v)))),
        make_var(k_name(4, v)));
    ExprPtr incr = make_binary(
        BinaryOp::mul, make_binary(BinaryOp::div, make_var(h), make_number(6)),
        make_paren(sum));
    f.body.push_back(make_set(v, make_binary(BinaryOp::add, make_var(v), incr)));
  }
  return f;
}

}  // namespace

TransformedModel apply_solver_plan(const ModelDecl& model, const Stmt& ode_stmt,
                                   const SolverPlan& plan,
                                   const SolverContext& ctx) {
  TransformedModel out;
  out.model = model;
  out.plan = plan;
  out.report.model = model.name;
  out.report.diagnostics = plan.diagnostics;
  out.report.replaced_spans.push_back(ode_stmt.span);
  ModelDecl& m = out.model;

  for (const auto& s : plan.slots) {
    if (s.role != StateSlot::Role::kernel) continue;
    block_of(m.state).push_back(
        make_decl(s.name, type_text(s.type, ctx), make_number(0)));
    out.report.injected_decls.push_back(s.name);
  }

  Block replacement;
  if (plan.mode == SolverPlan::Mode::exact) {
    out.report.mode = TransformReport::Mode::exact;
    for (const auto& d : plan.internal_decls) {
      block_of(m.internal).push_back(
          make_decl(d.name, type_text(d.type, ctx), to_expr(d.expr)));
      out.report.injected_decls.push_back(d.name);
    }
    replacement = exact_statements(plan, ctx);
  } else {
    out.report.mode = TransformReport::Mode::numeric;
    std::string h = "h";
    if (ctx.taken_names.count("h") > 0 && !ctx.h_is_resolution) h = "__h";
    if (!(ctx.taken_names.count("h") > 0 && ctx.h_is_resolution)) {
      block_of(m.internal).push_back(
          make_decl(h, "ms", make_call("resolution", {})));
      out.report.injected_decls.push_back(h);
    }
    std::string fn = fresh_name("integrate_rk4", ctx);
    m.functions.push_back(rk4_function(plan, ctx, fn, h));
    out.report.injected_decls.push_back(fn);
    replacement.push_back(make_call_stmt(make_call(fn, {make_var(ctx.time)})));
  }
  Block spikes = spike_statements(plan, ctx.time);
  replacement.insert(replacement.end(), spikes.begin(), spikes.end());

  for (auto& d : m.dynamics) {
    if (contains(d.body, &ode_stmt)) d.body = splice(d.body, &ode_stmt, replacement);
  }
  rewrite_aliases(m, ctx);
  return out;
}

TransformedModel transform_model(const ModelScope& model, const TypeInfo& types,
                                 const TransformOptions& options) {
  TransformedModel out;
  out.model = *model.decl;
  out.report.model = model.decl->name;

  std::vector<std::pair<const Stmt*, const DynamicsDecl*>> odes;
  for (const auto& d : model.decl->dynamics) {
    for_each_stmt(d.body, [&](const Stmt& s) {
      if (s.kind == Stmt::Kind::ode) odes.emplace_back(&s, &d);
    });
  }
  if (odes.empty()) return out;
  if (odes.size() > 1) {
    out.report.diagnostics.push_back(make_error(
        "E0503", "model '" + model.decl->name + "' has more than one ODE block",
        odes[1].first->span));
    return out;
  }
  SolverContext ctx = make_solver_context(model, types);
  if (!odes[0].second->params.empty()) ctx.time = odes[0].second->params[0].name;
  SolverPlan plan = options.force_numeric
                        ? make_numeric_plan(odes[0].first->ode, ctx)
                        : make_solver_plan(odes[0].first->ode, ctx);
  if (has_errors(plan.diagnostics)) {
    out.report.diagnostics = plan.diagnostics;
    out.plan = std::move(plan);
    return out;
  }
  if (!plan.kernels_resolved) {
    out.report.diagnostics = plan.diagnostics;
    out.report.diagnostics.push_back(make_error(
        "E0502",
        "no linear ODE found for a shape of model '" + model.decl->name + "'",
        odes[0].first->span));
    out.plan = std::move(plan);
    return out;
  }
  return apply_solver_plan(*model.decl, *odes[0].first, plan, ctx);
}

TransformedFile transform_file(const ModelFile& file, const Analysis& analysis,
                               const TransformOptions& options) {
  TransformedFile out;
  out.file.path = file.path;
  out.file.imports = file.imports;
  for (const auto& decl : file.decls) {
    const ModelScope* scope = analysis.table.model_of(&decl);
    if (decl.is_component || scope == nullptr) {
      out.file.decls.push_back(decl);
      continue;
    }
    TransformedModel t = transform_model(*scope, analysis.types, options);
    out.file.decls.push_back(std::move(t.model));
    out.reports.push_back(std::move(t.report));
  }
  return out;
}

std::string transform_and_emit_inspectable(const ModelDecl& transformed) {
  return pretty_print(transformed);
}

Diagnostics recheck_transformed(const std::vector<ModelFile>& files) {
  Diagnostics out;
  std::vector<ModelFile> parsed;
  ParseOptions options;
  options.allow_reserved_names = true;
  for (const auto& f : files) {
    ParseResult r = parse_file(pretty_print(f), f.path, options);
    out.insert(out.end(), r.errors.begin(), r.errors.end());
    parsed.push_back(std::move(r.model));
  }
  if (has_errors(out)) return out;
  Analysis a = analyze(parsed);
  return a.diagnostics;
}

}  // namespace nestml

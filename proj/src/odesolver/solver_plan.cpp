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

#include "nestml/odesolver/solver_plan.hpp"

#include <algorithm>
#include <cctype>

namespace nestml {

SolverContext make_solver_context(const ModelScope& model,
                                  const TypeInfo& types) {
  SolverContext ctx;
  ctx.types = &types;
  for (const auto& [name, sym] : model.scope->symbols()) {
    ctx.taken_names.insert(name);
    switch (sym.kind) {
      case SymbolKind::parameter:
      case SymbolKind::internal:
        ctx.constants.insert(name);
        ctx.variable_types[name] = sym.type;
        break;
      case SymbolKind::alias:
        if (sym.decl != nullptr && sym.decl->init != nullptr) {
          ctx.aliases[name] = sym.decl->init;
        }
        ctx.variable_types[name] = sym.type;
        break;
      case SymbolKind::state:
        ctx.variable_types[name] = sym.type;
        break;
      default:
        break;
    }
  }
  if (model.decl->input) {
    for (const auto& line : *model.decl->input) {
      if (line.kind == BufferKind::spike) ctx.spike_buffers.push_back(line.buffer);
    }
  }
  auto collect_units = [&](const std::optional<std::vector<Declaration>>& b) {
    if (!b) return;
    for (const auto& d : *b) {
      std::string atom;
      auto flush = [&] {
        if (!atom.empty() && !std::isdigit(static_cast<unsigned char>(atom[0])) &&
            std::find(ctx.unit_atoms.begin(), ctx.unit_atoms.end(), atom) ==
                ctx.unit_atoms.end()) {
          ctx.unit_atoms.push_back(atom);
        }
        atom.clear();
      };
      for (char c : d.type.text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
          atom += c;
        } else {
          flush();
        }
      }
      flush();
    }
  };
  collect_units(model.decl->state);
  collect_units(model.decl->parameter);
  collect_units(model.decl->internal);
  if (std::find(ctx.unit_atoms.begin(), ctx.unit_atoms.end(), "ms") ==
      ctx.unit_atoms.end()) {
    ctx.unit_atoms.push_back("ms");
  }
  const Symbol* h = model.scope->find_local("h");
  if (h != nullptr && h->kind == SymbolKind::internal && h->decl != nullptr &&
      h->decl->init != nullptr) {
    const Expr& init = *h->decl->init;
    ctx.h_is_resolution = init.kind == Expr::Kind::call &&
                          init.qualifier.empty() &&
                          init.name == "resolution" && init.args.empty();
  }
  return ctx;
}

std::string type_text(const TypeSpec& type, const SolverContext& ctx) {
  if (type.kind != TypeSpec::Kind::unit) return to_string(type);
  return pretty_unit(type.unit, ctx.unit_atoms);
}

std::string solver_code(SolverError::Kind kind) {
  switch (kind) {
    case SolverError::Kind::not_linear_constant: return "W0501";
    case SolverError::Kind::not_linear_kernel: return "W0502";
    case SolverError::Kind::symbolic_failure: return "W0503";
    case SolverError::Kind::singular_sample: return "W0504";
    case SolverError::Kind::ambiguous_binding: return "E0501";
  }
  return "W0509";
}

namespace {

Diagnostic diagnostic_of(const SolverError& e) {
  std::string code = solver_code(e.kind());
  return code[0] == 'E' ? make_error(code, e.what(), e.span())
                        : make_warning(code, e.what(), e.span());
}

SymPtr slot_value(const StateSlot& s) {
  return s.role == StateSlot::Role::constant ? s.drive : sym_symbol(s.name);
}

void add_spike_increments(const LinearSystem& sys, SolverPlan& plan) {
  for (const auto& [buffer, incs] : sys.inputs) {
    auto& out = plan.spike_increments[buffer];
    for (const auto& [slot, coeff] : incs) {
      out.push_back({sys.slots[slot].name, coeff, sys.slots[slot].type, {}});
    }
  }
}

std::string entry_name(size_t i, size_t j, size_t n) {
  return n >= 10 ? "P" + std::to_string(i + 1) + "_" + std::to_string(j + 1)
                 : "P" + std::to_string(i + 1) + std::to_string(j + 1);
}

TypeSpec ratio_type(const TypeSpec& num, const TypeSpec& den) {
  return TypeSpec::of_unit(unit_divide(num.as_unit(), den.as_unit()));
}

void build_exact(const LinearSystem& sys, const SolverContext& ctx,
                 SolverPlan& plan) {
  const size_t n = sys.size();
  const auto& a = sys.a;
  bool h_taken = ctx.taken_names.count("h") > 0;
  plan.h = !h_taken || ctx.h_is_resolution ? "h" : "__h";
  SymPtr h = sym_symbol(plan.h);

  // Which entries are declared.
  PropagatorMatrix shape = symbolic_expm_triangular(a, plan.h);
  std::vector<std::vector<bool>> declared(n, std::vector<bool>(n, false));
  bool any = false;
  bool clash = false;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      bool d = i == j ? !is_zero(a[i][i]) : !is_zero(shape.entries[i][j]);
      declared[i][j] = d;
      any = any || d;
      if (d && ctx.taken_names.count(entry_name(i, j, n)) > 0) clash = true;
    }
  }
  const std::string prefix = clash ? "__" : "";
  auto name = [&](size_t i, size_t j) { return prefix + entry_name(i, j, n); };

  // Diagonal values, reusing an earlier name for an equal rate.
  std::vector<SymPtr> diag(n, sym_const(1.0));
  std::vector<SymPtr> diag_decl(n);
  for (size_t i = 0; i < n; ++i) {
    if (!declared[i][i]) continue;
    diag[i] = sym_symbol(name(i, i));
    diag_decl[i] = sym_exp(a[i][i] * h);
    for (size_t k = 0; k < i; ++k) {
      if (declared[k][k] && sym_equal(a[k][k], a[i][i])) {
        diag[i] = sym_symbol(name(k, k));
        diag_decl[i] = sym_symbol(name(k, k));
        break;
      }
    }
  }
  PropagatorMatrix named = symbolic_expm_triangular(a, plan.h, &diag);
  plan.propagator = shape;

  if (any && !(h_taken && ctx.h_is_resolution)) {
    ExprPtr call = make_call("resolution", {});
    plan.internal_decls.push_back(
        {plan.h, sym_atom(call, {}), TypeSpec::of_unit(parse_unit("ms")), {}});
  }
  std::vector<std::vector<SymPtr>> ref(n, std::vector<SymPtr>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      ref[i][j] = declared[i][j] ? sym_symbol(name(i, j))
                                 : (i == j ? sym_const(1.0) : sym_const(0.0));
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (declared[i][i]) {
      plan.internal_decls.push_back({name(i, i), diag_decl[i],
                                     TypeSpec::real(), {}});
    }
    for (size_t j = 0; j < n; ++j) {
      if (j == i || !declared[i][j]) continue;
      plan.internal_decls.push_back(
          {name(i, j), named.entries[i][j],
           ratio_type(sys.slots[i].type, sys.slots[j].type), {}});
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (sys.slots[i].role == StateSlot::Role::constant) continue;
    SymPtr value = sym_const(0.0);
    for (size_t j = 0; j < n; ++j) {
      if (is_zero(ref[i][j])) continue;
      value = value + ref[i][j] * slot_value(sys.slots[j]);
    }
    plan.updates.push_back({sys.slots[i].name, value, sys.slots[i].type, {}});
  }
}

void build_numeric(const OdeBlock& block, const SolverContext& ctx,
                   SolverPlan& plan) {
  plan.mode = SolverPlan::Mode::numeric;
  LinearSystem chains;
  try {
    chains = build_kernel_chains(block, ctx);
  } catch (const SolverError&) {
    // Already reported by the exact attempt.
    plan.kernels_resolved = false;
  }
  plan.slots = chains.slots;
  for (size_t i = 0; i < chains.size(); ++i) {
    SymPtr d = chains.a[i][i] * sym_symbol(chains.slots[i].name);
    if (i > 0 && !is_zero(chains.a[i][i - 1])) {
      d = d + sym_symbol(chains.slots[i - 1].name);
    }
    TypeSpec t = TypeSpec::of_unit(
        unit_divide(chains.slots[i].type.as_unit(), parse_unit("ms")));
    plan.rhs.push_back({chains.slots[i].name, d, t, {}});
  }
  for (const auto& eq : block.equations) {
    StateSlot s;
    s.name = eq.state_var;
    auto it = ctx.variable_types.find(eq.state_var);
    s.type = it != ctx.variable_types.end() ? it->second : TypeSpec::real();
    s.span = eq.span;
    plan.slots.push_back(s);
    SymPtr d;
    try {
      d = from_expr(eq.rhs, ctx.types, ctx.aliases);
    } catch (const SymbolicError&) {
    }
    TypeSpec t =
        TypeSpec::of_unit(unit_divide(s.type.as_unit(), parse_unit("ms")));
    plan.rhs.push_back({eq.state_var, d, t, eq.rhs});
  }
  add_spike_increments(chains, plan);
}

}  // namespace

SolverPlan make_solver_plan(const OdeBlock& block, const SolverContext& ctx) {
  SolverPlan plan;
  try {
    LinearSystem sys = build_linear_system(block, ctx);
    build_exact(sys, ctx, plan);
    plan.slots = sys.slots;
    add_spike_increments(sys, plan);
    plan.system = std::move(sys);
    return plan;
  } catch (const SolverError& e) {
    plan = SolverPlan{};
    plan.diagnostics.push_back(diagnostic_of(e));
  } catch (const std::exception& e) {
    plan = SolverPlan{};
    plan.diagnostics.push_back(make_warning("W0503", e.what(), {}));
  }
  try {
    build_numeric(block, ctx, plan);
  } catch (const std::exception& e) {
    plan.kernels_resolved = false;
    plan.diagnostics.push_back(make_warning("W0509", e.what(), {}));
  }
  return plan;
}

SolverPlan make_numeric_plan(const OdeBlock& block, const SolverContext& ctx) {
  SolverPlan plan;
  try {
    build_numeric(block, ctx, plan);
  } catch (const std::exception& e) {
    plan.kernels_resolved = false;
    plan.diagnostics.push_back(make_warning("W0509", e.what(), {}));
  }
  return plan;
}

}  // namespace nestml

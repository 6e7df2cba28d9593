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

#ifndef NESTML_ODESOLVER_SOLVER_PLAN_HPP
#define NESTML_ODESOLVER_SOLVER_PLAN_HPP

#include <map>
#include <string>
#include <vector>

#include "nestml/odesolver/linear_system.hpp"
#include "nestml/semantics/expr_typer.hpp"
#include "nestml/syntax/diagnostic.hpp"

namespace nestml {

SolverContext make_solver_context(const ModelScope& model,
                                  const TypeInfo& types);

struct NamedSym {
  std::string name;
  SymPtr expr;
  TypeSpec type;
  // Numeric plans: the equation's right-hand side as written, if any.
  ExprPtr source;
};

struct SolverPlan {
  enum class Mode { exact, numeric };

  Mode mode = Mode::exact;
  // Kernel chains found; false means a shape could not be turned into an
  // ODE and the block cannot be integrated at all.
  bool kernels_resolved = true;
  // State slots, including the kernel slots the transform must declare.
  std::vector<StateSlot> slots;
  std::string h;
  // Exact: `h` (when injected) and the nonzero propagator entries, in
  // declaration order.
  std::vector<NamedSym> internal_decls;
  // Exact: new value of each evolving slot over pre-update values.
  std::vector<NamedSym> updates;
  // Numeric: d/dt of each evolving slot, for fixed-step RK4.
  std::vector<NamedSym> rhs;
  // buffer -> (slot, increment per unit spike weight)
  std::map<std::string, std::vector<NamedSym>> spike_increments;
  Diagnostics diagnostics;

  // Exact: the system and its propagator with explicit exponentials.
  LinearSystem system;
  PropagatorMatrix propagator;
};

// Never throws. Failures give a numeric plan with W05xx warnings (E0501
// for an ambiguous kernel binding).
SolverPlan make_solver_plan(const OdeBlock& block, const SolverContext& ctx);

// Numeric plan regardless of linearity: fixed-step RK4 over the block.
SolverPlan make_numeric_plan(const OdeBlock& block, const SolverContext& ctx);

// Type as a declaration would spell it, preferring the model's units.
std::string type_text(const TypeSpec& type, const SolverContext& ctx);

// Diagnostic code of a solver failure.
std::string solver_code(SolverError::Kind kind);

}  // namespace nestml

#endif  // NESTML_ODESOLVER_SOLVER_PLAN_HPP

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

#ifndef NESTML_ODESOLVER_LINEAR_SYSTEM_HPP
#define NESTML_ODESOLVER_LINEAR_SYSTEM_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nestml/odesolver/kernel.hpp"
#include "nestml/odesolver/symbolic.hpp"
#include "nestml/units/type_spec.hpp"

namespace nestml {

struct TypeInfo;

// What the solver needs to know about the model around an ODE block.
struct SolverContext {
  const TypeInfo* types = nullptr;
  // Alias name -> defining expression, inlined into right-hand sides.
  std::map<std::string, ExprPtr> aliases;
  // Parameters and internals: allowed in matrix entries.
  std::set<std::string> constants;
  // Spike input buffers in declaration order.
  std::vector<std::string> spike_buffers;
  // Declared types of model variables.
  std::map<std::string, TypeSpec> variable_types;
  // Every name declared in the model.
  std::set<std::string> taken_names;
  // True when the model already declares `h` as `resolution()`.
  bool h_is_resolution = false;
  // Unit atoms of declared types, in declaration order, for printing.
  std::vector<std::string> unit_atoms;
  std::string time = "t";
};

struct StateSlot {
  enum class Role { kernel, equation, constant };

  std::string name;
  Role role = Role::equation;
  TypeSpec type;
  // kernel slots: owning shape and the derivative order the slot tracks
  std::string shape;
  int derivative = 0;
  // constant slots: the drive expression, re-evaluated every step
  SymPtr drive;
  SourceSpan span;
};

// dx/dt = A x over `slots`. Kernel chains come first, then equations in
// dependency order, then one constant slot per equation with a drive. Each
// chain is triangular: slot j satisfies x_j' = rate_j x_j + x_{j-1}, and its
// last slot is the kernel value. A is lower triangular except for the
// columns of constant slots, whose rows are zero.
struct LinearSystem {
  std::vector<StateSlot> slots;
  std::vector<std::vector<SymPtr>> a;
  // buffer -> (slot index, increment per unit spike weight)
  std::map<std::string, std::vector<std::pair<size_t, SymPtr>>> inputs;
  // shape name -> inferred kernel ODE
  std::map<std::string, KernelOde> kernels;

  size_t size() const { return slots.size(); }
  int index_of(const std::string& name) const;
};

// Kernel chains of all shapes plus the buffer binding, without equations.
// Throws SolverError (not_linear_kernel, singular_sample, ambiguous_binding).
LinearSystem build_kernel_chains(const OdeBlock& block,
                                 const SolverContext& ctx);

// Full system. Throws SolverError; not_linear_constant when an equation is
// not affine in the ODE variables with constant coefficients.
LinearSystem build_linear_system(const OdeBlock& block,
                                 const SolverContext& ctx);

struct PropagatorMatrix {
  std::string h;
  std::vector<std::vector<SymPtr>> entries;
};

// exp(A h) for a matrix whose off-diagonal structure is acyclic. Entries are
// sums over paths of products of A entries times divided differences of
// exp(. h) over the path's diagonal. `diagonal`, when given, supplies the
// value used for exp(A_ii h) (for example a name bound to it). Throws
// SolverError(symbolic_failure) when two diagonal entries differ
// structurally but agree numerically.
PropagatorMatrix symbolic_expm_triangular(
    const std::vector<std::vector<SymPtr>>& a, const std::string& h,
    const std::vector<SymPtr>* diagonal = nullptr);

}  // namespace nestml

#endif  // NESTML_ODESOLVER_LINEAR_SYSTEM_HPP

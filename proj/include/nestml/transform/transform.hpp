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

#ifndef NESTML_TRANSFORM_TRANSFORM_HPP
#define NESTML_TRANSFORM_TRANSFORM_HPP

#include <string>
#include <vector>

#include "nestml/odesolver/solver_plan.hpp"
#include "nestml/semantics/context_conditions.hpp"

namespace nestml {

struct TransformReport {
  enum class Mode { exact, numeric, none };

  std::string model;
  Mode mode = Mode::none;
  std::vector<std::string> injected_decls;
  std::vector<SourceSpan> replaced_spans;
  // Solver warnings, plus errors when the block could not be lowered:
  // E0501 ambiguous binding, E0502 kernel without a linear ODE, E0503 more
  // than one ODE block.
  Diagnostics diagnostics;
};

const char* to_string(TransformReport::Mode mode);

struct TransformedModel {
  ModelDecl model;
  TransformReport report;
  SolverPlan plan;
};

// Rewrites the model's ODE block into imperative statements following
// `plan`, which must have been built from `block` with `ctx`.
TransformedModel apply_solver_plan(const ModelDecl& model, const Stmt& ode_stmt,
                                   const SolverPlan& plan,
                                   const SolverContext& ctx);

struct TransformOptions {
  // Use the RK4 path even when an exact propagator exists.
  bool force_numeric = false;
};

// Finds the ODE block of a checked model, plans it and applies the plan.
// A model without an ODE block is returned unchanged with mode none.
TransformedModel transform_model(const ModelScope& model, const TypeInfo& types,
                                 const TransformOptions& options = {});

struct TransformedFile {
  ModelFile file;
  std::vector<TransformReport> reports;  // one per neuron
};

TransformedFile transform_file(const ModelFile& file, const Analysis& analysis,
                               const TransformOptions& options = {});

// Pretty-printed transformed model, the `<model>.solved.nestml` text.
std::string transform_and_emit_inspectable(const ModelDecl& transformed);

// Parses printed transformed files (generated names allowed) and runs
// the context conditions on them.
Diagnostics recheck_transformed(const std::vector<ModelFile>& files);

}  // namespace nestml

#endif  // NESTML_TRANSFORM_TRANSFORM_HPP

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

#ifndef NESTML_SEMANTICS_CONTEXT_CONDITIONS_HPP
#define NESTML_SEMANTICS_CONTEXT_CONDITIONS_HPP

#include <vector>

#include "nestml/semantics/expr_typer.hpp"
#include "nestml/semantics/symbol_table.hpp"

namespace nestml {

// Types every expression and evaluates CC-01..CC-10:
//   E0401 declare-before-use        E0406 cross-component call
//   E0402 assignment compatibility  E0407 local shadows a model variable
//   E0403 dynamics write target     E0408 output block / emitSpike
//   E0404 alias form and setter     E0409 ODE state and shape names
//   E0405 guards                    E0410 buffer access
// plus typing errors E03xx and W0310. All findings are reported, sorted.
// When `types` is given it receives the types and scale conversions.
Diagnostics check_context_conditions(const std::vector<ModelFile>& files,
                                     const SymbolTable& table,
                                     TypeInfo* types = nullptr);

// Symbol table plus checks over a set of parsed files. The files must
// outlive the result.
struct Analysis {
  SymbolTable table;
  TypeInfo types;
  Diagnostics diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

Analysis analyze(const std::vector<ModelFile>& files);

}  // namespace nestml

#endif  // NESTML_SEMANTICS_CONTEXT_CONDITIONS_HPP

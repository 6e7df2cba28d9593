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


#ifndef NESTML_CODEGEN_CODEGEN_HPP
#define NESTML_CODEGEN_CODEGEN_HPP

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nestml/semantics/context_conditions.hpp"

namespace nestml {

inline constexpr const char* kToolVersion = "0.1.0";

struct GeneratedArtifact {
  enum class Kind {
    header,
    implementation,
    module_bootstrap,
    build_script,
    inspectable_model
  };

  std::string relative_path;  // `<module>/<file>`
  std::string contents;
  Kind kind = Kind::header;
};

// Invalid input reached the generator (for example a remaining ODE block).
class CodegenError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Header and implementation per model, then the module file and the build
// script. `models` must be transformed and checked; `types` comes from the
// same analysis.
std::vector<GeneratedArtifact> generate(
    const std::vector<const ModelScope*>& models, const TypeInfo& types,
    const std::string& module_name);

// `<module>/<name>.solved.nestml`.
GeneratedArtifact inspectable_artifact(const ModelDecl& transformed,
                                       const std::string& module_name);

// C++ text of an expression inside `model`, fully parenthesized, with unit
// conversions as literal factors. `locals` are names bound in the body.
std::string lower_expr(const ExprPtr& e, const ModelScope& model,
                       const TypeInfo& types,
                       const std::set<std::string>& locals = {});

struct LocReport {
  int model_loc = 0;
  int generated_loc = 0;
  double ratio = 0.0;
};

// Non-blank, non-comment lines of the model source and of the generated
// C++ and script artifacts.
LocReport loc_report(const std::string& model_source,
                     const std::vector<GeneratedArtifact>& artifacts);

}  // namespace nestml

#endif  // NESTML_CODEGEN_CODEGEN_HPP

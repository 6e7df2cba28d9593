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


#ifndef NESTML_CLI_PIPELINE_HPP
#define NESTML_CLI_PIPELINE_HPP

#include <memory>
#include <string>
#include <vector>

#include "nestml/transform/transform.hpp"

namespace nestml {

struct SourceFile {
  std::string path;
  std::string text;
};

// One compilation unit. Analyses point into the file vectors, so a
// Compilation is never moved once built.
struct Compilation {
  enum class Stage { parse, check, transform, done };

  std::vector<ModelFile> files;
  Analysis analysis;
  // Transformed files, re-parsed from their printed form and re-checked.
  std::vector<ModelFile> solved;
  Analysis solved_analysis;
  std::vector<TransformReport> reports;
  // Everything reported so far, sorted.
  Diagnostics diagnostics;
  // First stage that reported an error, or done.
  Stage failed = Stage::done;

  bool ok() const { return failed == Stage::done; }
  // Transformed neuron by name, or nullptr.
  const ModelScope* solved_model(const std::string& name) const;
  std::vector<const ModelScope*> solved_neurons() const;
  const TransformReport* report(const std::string& name) const;
};

// Runs the pipeline through `until`, stopping at the first stage with
// errors.
std::unique_ptr<Compilation> compile(
    const std::vector<SourceFile>& sources,
    Compilation::Stage until = Compilation::Stage::done,
    const TransformOptions& options = {});

// Reads files from disk; throws std::runtime_error when one is unreadable.
std::vector<SourceFile> read_sources(const std::vector<std::string>& paths);

}  // namespace nestml

#endif  // NESTML_CLI_PIPELINE_HPP

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


#include "nestml/cli/pipeline.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nestml/syntax/parser.hpp"
#include "nestml/syntax/pretty_printer.hpp"

namespace nestml {

const ModelScope* Compilation::solved_model(const std::string& name) const {
  for (const ModelScope* m : solved_analysis.table.models()) {
    if (m->decl->name == name && !m->decl->is_component) return m;
  }
  return nullptr;
}

std::vector<const ModelScope*> Compilation::solved_neurons() const {
  std::vector<const ModelScope*> out;
  for (const auto& f : solved) {
    for (const auto& d : f.decls) {
      const ModelScope* m = solved_analysis.table.model_of(&d);
      if (m != nullptr && !d.is_component) out.push_back(m);
    }
  }
  return out;
}

const TransformReport* Compilation::report(const std::string& name) const {
  for (const auto& r : reports) {
    if (r.model == name) return &r;
  }
  return nullptr;
}

std::unique_ptr<Compilation> compile(const std::vector<SourceFile>& sources,
                                     Compilation::Stage until,
                                     const TransformOptions& options) {
  using Stage = Compilation::Stage;
  auto c = std::make_unique<Compilation>();
  auto finish = [&](Stage failed) {
    sort_diagnostics(c->diagnostics);
    c->failed = failed;
    return std::move(c);
  };
  auto append = [&](const Diagnostics& ds) {
    c->diagnostics.insert(c->diagnostics.end(), ds.begin(), ds.end());
  };

  for (const auto& s : sources) {
    ParseResult r = parse_file(s.text, s.path);
    append(r.errors);
    c->files.push_back(std::move(r.model));
  }
  if (has_errors(c->diagnostics)) return finish(Stage::parse);
  if (until == Stage::parse) return finish(Stage::done);

  c->analysis = analyze(c->files);
  append(c->analysis.diagnostics);
  if (has_errors(c->diagnostics)) return finish(Stage::check);
  if (until == Stage::check) return finish(Stage::done);

  std::vector<ModelFile> transformed;
  for (const auto& f : c->files) {
    TransformedFile t = transform_file(f, c->analysis, options);
    for (auto& r : t.reports) {
      append(r.diagnostics);
      c->reports.push_back(std::move(r));
    }
    transformed.push_back(std::move(t.file));
  }
  if (has_errors(c->diagnostics)) return finish(Stage::transform);

  ParseOptions generated;
  generated.allow_reserved_names = true;
  Diagnostics recheck;
  for (const auto& f : transformed) {
    ParseResult r = parse_file(pretty_print(f), f.path, generated);
    recheck.insert(recheck.end(), r.errors.begin(), r.errors.end());
    c->solved.push_back(std::move(r.model));
  }
  if (!has_errors(recheck)) {
    c->solved_analysis = analyze(c->solved);
    recheck = c->solved_analysis.diagnostics;
  }
  // Warnings repeat those of the source; only errors are news here.
  for (const auto& d : recheck) {
    if (d.severity != Severity::error) continue;
    Diagnostic e = d;
    e.message = "transformed model fails re-check: " + e.message;
    c->diagnostics.push_back(e);
  }
  if (has_errors(c->diagnostics)) return finish(Stage::transform);
  return finish(Stage::done);
}

std::vector<SourceFile> read_sources(const std::vector<std::string>& paths) {
  std::vector<SourceFile> out;
  for (const auto& p : paths) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p);
    std::ostringstream ss;
    ss << in.rdbuf();
    out.push_back({p, ss.str()});
  }
  return out;
}

}  // namespace nestml

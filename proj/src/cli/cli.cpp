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


#include "nestml/cli/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "nestml/cli/pipeline.hpp"
#include "nestml/codegen/codegen.hpp"
#include "nestml/runtime/runtime.hpp"

namespace nestml {
namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string mode;
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string module = "nestml";
  std::string neuron;
  double duration_ms = 100.0;
  double resolution_ms = 0.1;
  std::string stimulus;
  std::vector<std::string> probes;
  std::vector<std::string> sets;
  bool check_guards = false;
  bool require_exact = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputFile {
  std::string relative_path;
  std::string contents;
};

// All files land in a private directory under `dir`, then each is renamed
// into place; a failure before the renames leaves `dir` untouched.
void write_atomically(const fs::path& dir, const std::vector<OutputFile>& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create " + dir.string() + ": " + ec.message());
  const fs::path staging = dir / (".nestmlc-" + std::to_string(::getpid()));
  fs::remove_all(staging, ec);
  try {
    for (const auto& f : files) {
      fs::path p = staging / f.relative_path;
      fs::create_directories(p.parent_path());
      std::ofstream os(p, std::ios::binary);
      os << f.contents;
      os.close();
      if (!os) throw OutputError("cannot write " + p.string());
    }
    for (const auto& f : files) {
      fs::create_directories((dir / f.relative_path).parent_path());
    }
    for (const auto& f : files) {
      fs::rename(staging / f.relative_path, dir / f.relative_path);
    }
  } catch (const fs::filesystem_error& e) {
    fs::remove_all(staging, ec);
    throw OutputError(e.what());
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
  fs::remove_all(staging, ec);
}

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw UsageError("invalid " + what + " '" + text + "'");
  }
  return v;
}

std::map<std::string, double> parse_sets(const std::vector<std::string>& sets) {
  std::map<std::string, double> out;
  for (const auto& s : sets) {
    size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--set expects PARAM=VALUE, got '" + s + "'");
    }
    out[s.substr(0, eq)] = parse_number(s.substr(eq + 1), "value for " + s.substr(0, eq));
  }
  return out;
}

void print(const Diagnostics& diags, std::ostream& err) {
  for (const auto& d : diags) err << format_diagnostic(d) << "\n";
}

int stage_exit(Compilation::Stage failed) {
  switch (failed) {
    case Compilation::Stage::parse: return kExitSyntax;
    case Compilation::Stage::check: return kExitSemantic;
    case Compilation::Stage::transform: return kExitSolver;
    case Compilation::Stage::done: return kExitOk;
  }
  return kExitOk;
}

// E0504 for each listed neuron that fell back to the numeric solver.
bool reject_numeric(const Compilation& c, const std::vector<const ModelScope*>& neurons,
                    std::ostream& err) {
  bool rejected = false;
  for (const ModelScope* m : neurons) {
    const TransformReport* r = c.report(m->decl->name);
    if (r == nullptr || r->mode != TransformReport::Mode::numeric) continue;
    SourceSpan span = r->replaced_spans.empty() ? m->decl->span : r->replaced_spans.front();
    err << format_diagnostic(make_error(
               "E0504",
               "'" + m->decl->name +
                   "' has no exact solution and --require-exact is set",
               span))
        << "\n";
    rejected = true;
  }
  return rejected;
}

int run_generate(const RunConfig& cfg, const Compilation& c, std::ostream& err) {
  auto neurons = c.solved_neurons();
  if (cfg.require_exact && reject_numeric(c, neurons, err)) return kExitSolver;
  std::vector<OutputFile> files;
  try {
    for (auto& a : generate(neurons, c.solved_analysis.types, cfg.module)) {
      files.push_back({a.relative_path, std::move(a.contents)});
    }
  } catch (const CodegenError& e) {
    err << "error: code generation failed: " << e.what() << "\n";
    return kExitSolver;
  }
  for (const ModelScope* m : neurons) {
    auto a = inspectable_artifact(*m->decl, cfg.module);
    files.push_back({a.relative_path, std::move(a.contents)});
  }
  write_atomically(cfg.out_dir, files);
  return kExitOk;
}

int run_simulate(const RunConfig& cfg, const Compilation& c, std::ostream& out,
                 std::ostream& err) {
  auto neurons = c.solved_neurons();
  const ModelScope* model = nullptr;
  if (cfg.neuron.empty()) {
    if (neurons.size() != 1) {
      throw UsageError("simulate needs --neuron when the input has " +
                       std::to_string(neurons.size()) + " neurons");
    }
    model = neurons.front();
  } else {
    model = c.solved_model(cfg.neuron);
    if (model == nullptr) throw UsageError("no neuron named '" + cfg.neuron + "'");
  }
  if (cfg.require_exact && reject_numeric(c, {model}, err)) return kExitSolver;

  SimulationConfig sim;
  sim.duration_ms = cfg.duration_ms;
  sim.resolution_ms = cfg.resolution_ms;
  sim.guard_checks = cfg.check_guards;
  sim.overrides = parse_sets(cfg.sets);

  StimulusProgram stimulus;
  if (!cfg.stimulus.empty()) {
    std::ifstream in(cfg.stimulus, std::ios::binary);
    if (!in) throw UsageError("cannot read stimulus file " + cfg.stimulus);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    stimulus = StimulusProgram::from_json(text);
  }
  std::vector<std::string> probes = cfg.probes;
  if (probes.empty() && model->decl->state) {
    for (const auto& d : *model->decl->state) {
      for (const auto& n : d.names) probes.push_back(n);
    }
  }

  Trace trace = run(*model, c.solved_analysis.types, sim, stimulus, probes);
  for (const auto& note : trace.notes) {
    if (note.rfind("log_info: ", 0) == 0) {
      err << note.substr(10) << "\n";
    } else {
      err << "note: " << note << "\n";
    }
  }
  if (cfg.out_dir.empty()) {
    out << trace.to_csv();
  } else {
    const std::string& name = model->decl->name;
    write_atomically(cfg.out_dir, {{name + ".trace.csv", trace.to_csv()},
                                   {name + ".spikes.csv", trace.spikes_csv()}});
  }
  return kExitOk;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using Stage = Compilation::Stage;
  std::vector<SourceFile> sources;
  try {
    sources = read_sources(cfg.inputs);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  Stage until = Stage::done;
  if (cfg.mode == "parse") until = Stage::parse;
  if (cfg.mode == "check" || cfg.mode == "contextConditions") until = Stage::check;
  if (cfg.mode == "generate" && cfg.out_dir.empty()) {
    throw UsageError("generate requires --out");
  }
  if (!(cfg.duration_ms > 0.0) || !(cfg.resolution_ms > 0.0)) {
    throw UsageError("--duration and --resolution must be positive");
  }

  auto c = compile(sources, until);
  print(c->diagnostics, err);
  if (!c->ok()) return stage_exit(c->failed);
  if (cfg.mode == "generate") return run_generate(cfg, *c, err);
  if (cfg.mode == "simulate") return run_simulate(cfg, *c, out, err);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"NESTML model compiler", "nestmlc"};
  app.add_option("mode", cfg.mode, "parse, check (contextConditions), generate or simulate")
      ->required()
      ->check(CLI::IsMember({"parse", "check", "contextConditions", "generate", "simulate"}));
  app.add_option("files", cfg.inputs, "Model files, compiled together")->required();
  app.add_option("--out", cfg.out_dir, "Output directory");
  app.add_option("--module", cfg.module, "Module name for generated code");
  app.add_option("--neuron", cfg.neuron, "Neuron to simulate");
  app.add_option("--duration", cfg.duration_ms, "Simulated time in ms");
  app.add_option("--resolution", cfg.resolution_ms, "Step size in ms");
  app.add_option("--stimulus", cfg.stimulus, "Stimulus JSON file");
  app.add_option("--probe", cfg.probes, "Variable to record (repeatable)")
      ->allow_extra_args(false);
  app.add_option("--set", cfg.sets, "Parameter override PARAM=VALUE (repeatable)")
      ->allow_extra_args(false);
  app.add_flag("--check-guards", cfg.check_guards, "Check state guards after every step");
  app.add_flag("--require-exact", cfg.require_exact,
               "Fail when an ODE block needs the numeric solver");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run 'nestmlc --help' for usage\n";
    return kExitUsage;
  }

  try {
    return dispatch(cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RuntimeError& e) {
    err << (e.span().file.empty()
                ? std::string()
                : e.span().file + ":" + std::to_string(e.span().line) + ":" +
                      std::to_string(e.span().column) + ": ")
        << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const OutputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace nestml

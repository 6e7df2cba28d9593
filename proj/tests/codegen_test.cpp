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


#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <regex>

#include "nestml/cli/pipeline.hpp"
#include "nestml/codegen/codegen.hpp"
#include "nestml/syntax/parser.hpp"
#include "nestml/syntax/pretty_printer.hpp"
#include "lowering_oracle.hpp"
#include "test_support.hpp"

namespace nestml {
namespace {

using testing::arithmetic;
using testing::data_path;
using testing::eval_dsl;
using testing::read_data;
using testing::read_file;
using testing::to_dsl;

std::unique_ptr<Compilation> build(const std::vector<std::string>& fixtures) {
  std::vector<SourceFile> sources;
  for (const auto& f : fixtures) sources.push_back({f, read_data(f)});
  auto c = compile(sources);
  for (const auto& d : c->diagnostics) {
    EXPECT_NE(d.severity, Severity::error) << format_diagnostic(d);
  }
  EXPECT_TRUE(c->ok());
  return c;
}

std::vector<GeneratedArtifact> artifacts(const Compilation& c,
                                         const std::string& module) {
  auto out = generate(c.solved_neurons(), c.solved_analysis.types, module);
  for (const ModelScope* m : c.solved_neurons()) {
    out.push_back(inspectable_artifact(*m->decl, module));
  }
  return out;
}

void check_golden(const std::vector<GeneratedArtifact>& arts) {
  const bool update = std::getenv("NESTML_UPDATE_GOLDEN") != nullptr;
  for (const auto& a : arts) {
    std::string path = data_path("golden/" + a.relative_path);
    if (update) {
      std::filesystem::create_directories(
          std::filesystem::path(path).parent_path());
      std::ofstream(path, std::ios::binary) << a.contents;
      continue;
    }
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    EXPECT_EQ(a.contents, read_file(path)) << a.relative_path;
  }
}

TEST(Codegen, GoldenIaf) {
  auto c = build({"fixtures/iaf_neuron.nestml"});
  check_golden(artifacts(*c, "iaf"));
}

TEST(Codegen, GoldenIafOde) {
  auto c = build({"fixtures/iaf_neuron_ode.nestml"});
  check_golden(artifacts(*c, "iaf_ode"));
}

TEST(Codegen, GoldenComponents) {
  auto c = build({"fixtures/iaf_psp.nestml", "fixtures/psp_helpers.nestml"});
  check_golden(artifacts(*c, "iaf_psp"));
}

TEST(Codegen, IafOdeArtifacts) {
  auto c = build({"fixtures/iaf_neuron_ode.nestml"});
  auto arts = generate(c->solved_neurons(), c->solved_analysis.types, "m");
  ASSERT_EQ(arts.size(), 4u);
  EXPECT_EQ(arts[0].relative_path, "m/iaf_neuron_ode.h");
  EXPECT_EQ(arts[0].kind, GeneratedArtifact::Kind::header);
  EXPECT_EQ(arts[1].relative_path, "m/iaf_neuron_ode.cpp");
  EXPECT_EQ(arts[1].kind, GeneratedArtifact::Kind::implementation);
  EXPECT_EQ(arts[2].relative_path, "m/mmodule.cpp");
  EXPECT_EQ(arts[2].kind, GeneratedArtifact::Kind::module_bootstrap);
  EXPECT_EQ(arts[3].relative_path, "m/bootstrap.sh.in");
  EXPECT_EQ(arts[3].kind, GeneratedArtifact::Kind::build_script);
  EXPECT_NE(arts[1].contents.find("V_.P11 = std::exp(((-V_.h) / P_.tau_in));"),
            std::string::npos);
  GeneratedArtifact solved =
      inspectable_artifact(*c->solved_model("iaf_neuron_ode")->decl, "m");
  EXPECT_EQ(solved.relative_path, "m/iaf_neuron_ode.solved.nestml");
  EXPECT_NE(solved.contents.find("P11 real = exp(-h / tau_in)"), std::string::npos);
  EXPECT_EQ(solved.contents.find("ODE"), std::string::npos);
}

TEST(Codegen, EmptyModelList) {
  TypeInfo types;
  auto arts = generate({}, types, "empty");
  ASSERT_EQ(arts.size(), 2u);
  EXPECT_EQ(arts[0].relative_path, "empty/emptymodule.cpp");
  EXPECT_EQ(arts[1].relative_path, "empty/bootstrap.sh.in");
}

TEST(Codegen, TwoModelsRegisteredInOrder) {
  auto c = build({"fixtures/iaf_neuron_ode.nestml", "fixtures/iaf_neuron.nestml"});
  auto arts = generate(c->solved_neurons(), c->solved_analysis.types, "two");
  ASSERT_EQ(arts.size(), 6u);
  const std::string& mod = arts[4].contents;
  size_t a = mod.find("registry.add<iaf_neuron_ode>(\"iaf_neuron_ode\");");
  size_t b = mod.find("registry.add<iaf_neuron>(\"iaf_neuron\");");
  ASSERT_NE(a, std::string::npos);
  ASSERT_NE(b, std::string::npos);
  EXPECT_LT(a, b);
  std::set<std::string> paths;
  for (const auto& art : arts) paths.insert(art.relative_path);
  EXPECT_EQ(paths.size(), arts.size());
}

TEST(Codegen, Deterministic) {
  auto a = build({"fixtures/iaf_neuron_ode.nestml", "fixtures/iaf_neuron.nestml"});
  auto b = build({"fixtures/iaf_neuron_ode.nestml", "fixtures/iaf_neuron.nestml"});
  auto x = artifacts(*a, "d");
  auto y = artifacts(*b, "d");
  ASSERT_EQ(x.size(), y.size());
  for (size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(x[i].relative_path, y[i].relative_path);
    EXPECT_EQ(x[i].contents, y[i].contents);
  }
}

TEST(Codegen, RemainingOdeIsAToolError) {
  auto c = build({"fixtures/iaf_neuron_ode.nestml"});
  // The untransformed model still has its ODE block.
  const ModelScope* raw = c->analysis.table.model("iaf_neuron_ode");
  EXPECT_THROW(generate({raw}, c->analysis.types, "m"), CodegenError);
}

struct Case {
  ExprPtr source;
  ExprPtr lowered;
};

void check_lowering(const Compilation& c, const std::vector<ExprPtr>& exprs,
                    const ModelScope& m, std::mt19937& rng, int* checked) {
  std::vector<Case> cases;
  ParseOptions options;
  options.allow_reserved_names = true;
  for (const auto& e : exprs) {
    if (!arithmetic(e, m)) continue;
    std::string text = to_dsl(lower_expr(e, m, c.solved_analysis.types));
    auto p = parse_expression(text, "", options);
    ASSERT_TRUE(p.ok()) << text;
    cases.push_back({e, p.expr});
  }
  std::uniform_real_distribution<double> u(0.5, 3.0);
  for (int point = 0; point < 100; ++point) {
    std::map<std::string, double> env;
    for (const auto& [name, sym] : m.scope->symbols()) env[name] = u(rng);
    env["E"] = std::exp(1.0);
    env["__resolution"] = u(rng) / 10;
    for (const auto& k : cases) {
      double want = eval_dsl(k.source, env, &c.solved_analysis.types);
      double got = eval_dsl(k.lowered, env, nullptr);
      if (!std::isfinite(want)) continue;
      EXPECT_NEAR(got, want, 1e-12 * std::max(1.0, std::abs(want)))
          << pretty_print(k.source);
      ++*checked;
    }
  }
}

std::vector<ExprPtr> model_exprs(const ModelDecl& d) {
  std::vector<ExprPtr> out;
  auto decls = [&](const std::optional<std::vector<Declaration>>& b) {
    if (!b) return;
    for (const auto& x : *b) {
      if (x.init) out.push_back(x.init);
    }
  };
  decls(d.parameter);
  decls(d.internal);
  decls(d.state);
  return out;
}

TEST(Codegen, LoweringMatchesInterpreterOnFixtures) {
  std::mt19937 rng(20261016);
  int checked = 0;
  for (const char* f : {"fixtures/iaf_neuron.nestml", "fixtures/iaf_neuron_ode.nestml"}) {
    auto c = build({f});
    for (const ModelScope* m : c->solved_neurons()) {
      check_lowering(*c, model_exprs(*m->decl), *m, rng, &checked);
    }
  }
  EXPECT_GT(checked, 1000);
}

// Random expressions over parameters of mixed scales.
std::string random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 7);
  const char* vars[] = {"a", "b", "c", "d"};
  if (depth == 0) {
    int k = pick(rng);
    if (k < 4) return vars[k];
    return std::to_string(k - 2) + ".5";
  }
  std::string l = random_expr(rng, depth - 1);
  std::string r = random_expr(rng, depth - 1);
  switch (pick(rng)) {
    case 0: return "(" + l + " + " + r + ")";
    case 1: return "(" + l + " - " + r + ")";
    case 2: return l + " * " + r;
    case 3: return l + " / " + r;
    case 4: return "-" + l;
    case 5: return "exp(" + l + " / 10)";
    case 6: return l + " ** 2";
    default: return "ln(" + l + " * " + l + " + 1)";
  }
}

TEST(Codegen, LoweringMatchesInterpreterOnRandomExpressions) {
  std::mt19937 rng(7);
  std::string src =
      "neuron n:\n  parameter:\n    a real = 1\n    b real = 2\n    c real = 3\n"
      "    d real = 4\n    p mV = 1\n    q V = 0.002\n  end\n  internal:\n";
  for (int i = 0; i < 40; ++i) {
    src += "    x" + std::to_string(i) + " real = " + random_expr(rng, 3) + "\n";
  }
  src += "    u mV = p + q\n    v mV = p * 2 - q / 3\n    k real = q / p\n  end\nend\n";
  auto c = compile({{"r.nestml", src}});
  ASSERT_TRUE(c->ok()) << (c->diagnostics.empty() ? "" : format_diagnostic(c->diagnostics[0]));
  const ModelScope* m = c->solved_model("n");
  int checked = 0;
  check_lowering(*c, model_exprs(*m->decl), *m, rng, &checked);
  EXPECT_GT(checked, 100 * 40);
  EXPECT_NE(lower_expr(m->decl->internal->at(40).init, *m, c->solved_analysis.types)
                .find("1e3"),
            std::string::npos);
}

TEST(Codegen, NoFreeIdentifiers) {
  auto c = build({"fixtures/iaf_neuron.nestml", "fixtures/iaf_neuron_ode.nestml"});
  for (const ModelScope* m : c->solved_neurons()) {
    auto arts = generate({m}, c->solved_analysis.types, "m");
    const std::string& cpp = arts[1].contents;
    std::regex member(R"(\b([SPVB])_\.(\w+))");
    for (std::sregex_iterator it(cpp.begin(), cpp.end(), member), end; it != end; ++it) {
      std::string sec = (*it)[1];
      std::string name = (*it)[2];
      const Symbol* s = m->scope->find_local(name);
      ASSERT_NE(s, nullptr) << name;
      SymbolKind want = sec == "S" ? SymbolKind::state
                        : sec == "P" ? SymbolKind::parameter
                        : sec == "V" ? SymbolKind::internal
                                     : SymbolKind::buffer;
      EXPECT_EQ(s->kind, want) << name;
    }
    std::regex shim(R"(\bnestml_shim::(\w+))");
    std::set<std::string> allowed = {"Node", "RingBuffer", "GuardViolation",
                                     "UnknownBuffer", "E", "resolution", "steps", "Dictionary", "update_value",
                                     "min_delay_steps", "send_spike", "log_info"};
    for (std::sregex_iterator it(cpp.begin(), cpp.end(), shim), end; it != end; ++it) {
      EXPECT_EQ(allowed.count((*it)[1]), 1u) << (*it)[1];
    }
  }
}

TEST(Codegen, LocReport) {
  auto c = build({"fixtures/iaf_neuron.nestml"});
  auto arts = artifacts(*c, "iaf");
  LocReport r = loc_report(read_data("fixtures/iaf_neuron.nestml"), arts);
  EXPECT_EQ(r.model_loc, 60);
  EXPECT_GE(r.ratio, 5.0) << r.generated_loc << "/" << r.model_loc;
  std::cout << "loc ratio " << r.generated_loc << "/" << r.model_loc << " = "
            << r.ratio << " (reference figure: 20)\n";

  auto empty = compile({{"e.nestml", "neuron e:\nend\n"}});
  ASSERT_TRUE(empty->ok());
  LocReport e = loc_report("neuron e:\nend\n",
                           generate(empty->solved_neurons(),
                                    empty->solved_analysis.types, "e"));
  EXPECT_TRUE(std::isfinite(e.ratio));
  EXPECT_GT(e.ratio, 1.0);
}

TEST(Codegen, LocGrowsWithState) {
  std::string one = "neuron n:\n  state:\n    x mV\n  end\nend\n";
  std::string two = "neuron n:\n  state:\n    x mV\n    y mV\n  end\nend\n";
  auto a = compile({{"a.nestml", one}});
  auto b = compile({{"b.nestml", two}});
  LocReport ra = loc_report(one, generate(a->solved_neurons(), a->solved_analysis.types, "m"));
  LocReport rb = loc_report(two, generate(b->solved_neurons(), b->solved_analysis.types, "m"));
  EXPECT_GT(rb.generated_loc, ra.generated_loc);
}

}  // namespace
}  // namespace nestml

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

#include <memory>

#include "nestml/syntax/parser.hpp"
#include "nestml/syntax/pretty_printer.hpp"
#include "nestml/transform/transform.hpp"
#include "test_support.hpp"

namespace nestml {
namespace {

using testing::read_data;

struct Loaded {
  std::vector<ModelFile> files;
  Analysis analysis;
};

std::unique_ptr<Loaded> load(const std::vector<std::string>& sources) {
  auto out = std::make_unique<Loaded>();
  for (size_t i = 0; i < sources.size(); ++i) {
    auto r = parse_file(sources[i], "m" + std::to_string(i) + ".nestml");
    EXPECT_TRUE(r.ok()) << (r.errors.empty() ? "" : format_diagnostic(r.errors[0]));
    out->files.push_back(std::move(r.model));
  }
  out->analysis = analyze(out->files);
  for (const auto& d : out->analysis.diagnostics) {
    EXPECT_NE(d.severity, Severity::error) << format_diagnostic(d);
  }
  return out;
}

TransformedFile transform(const Loaded& l, size_t file = 0) {
  return transform_file(l.files[file], l.analysis);
}

std::string errors_of(const Diagnostics& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (d.severity == Severity::error) out += format_diagnostic(d) + "\n";
  }
  return out;
}

bool has_code(const Diagnostics& ds, const std::string& code) {
  for (const auto& d : ds) {
    if (d.code == code) return true;
  }
  return false;
}

TEST(Transform, IafOdeExact) {
  auto l = load({read_data("fixtures/iaf_neuron_ode.nestml")});
  TransformedFile t = transform(*l);
  ASSERT_EQ(t.reports.size(), 1u);
  EXPECT_EQ(t.reports[0].mode, TransformReport::Mode::exact);
  std::string text = pretty_print(t.file);
  EXPECT_EQ(text.find("ODE"), std::string::npos);
  EXPECT_NE(text.find("P11 real = exp(-h / tau_in)"), std::string::npos);
  EXPECT_EQ(errors_of(recheck_transformed({t.file})), "");
}

TEST(Transform, IafOdeStatements) {
  auto l = load({read_data("fixtures/iaf_neuron_ode.nestml")});
  std::string text = pretty_print(transform(*l).file);
  for (const char* line :
       {"    I_shape__d1 pA/ms = 0\n", "    I_shape pA = 0\n",
        "    P22 real = P11\n", "    P21 ms = P11 * h\n",
        "    P34 ms = (1 - P33) * Tau\n",
        "      I_shape__d1 = I_shape__d1 * P11\n",
        "      I_shape__d1 += spikeBuffer.getSum(t) * E * w / tau_in\n"}) {
    EXPECT_NE(text.find(line), std::string::npos) << line;
  }
  // Each slot is written after every update that reads it.
  size_t v = text.find("      V_m = ");
  size_t y = text.find("      I_shape = ");
  size_t d = text.find("      I_shape__d1 = ");
  EXPECT_LT(v, y);
  EXPECT_LT(y, d);
  // h already means resolution(), so no second declaration.
  EXPECT_EQ(text.find("__h"), std::string::npos);
}

TEST(Transform, ReportListsInjections) {
  auto l = load({read_data("fixtures/iaf_neuron_ode.nestml")});
  TransformReport r = transform(*l).reports[0];
  EXPECT_EQ(r.model, "iaf_neuron_ode");
  std::vector<std::string> want = {"I_shape__d1", "I_shape", "P11", "P22",
                                   "P21",         "P33",     "P31", "P32",
                                   "P34"};
  EXPECT_EQ(r.injected_decls, want);
  ASSERT_EQ(r.replaced_spans.size(), 1u);
  EXPECT_EQ(r.replaced_spans[0].line, 32);
  EXPECT_EQ(errors_of(r.diagnostics), "");
}

TEST(Transform, ImperativeModelsUnchanged) {
  auto imperative = load({read_data("fixtures/iaf_neuron.nestml")});
  TransformedFile a = transform(*imperative);
  EXPECT_EQ(a.reports[0].mode, TransformReport::Mode::none);
  EXPECT_TRUE(equal(a.file, imperative->files[0]));
  EXPECT_EQ(pretty_print(a.file), pretty_print(imperative->files[0]));

  auto psp = load({read_data("fixtures/iaf_psp.nestml"),
                   read_data("fixtures/psp_helpers.nestml")});
  for (size_t i = 0; i < 2; ++i) {
    TransformedFile t = transform(*psp, i);
    EXPECT_EQ(pretty_print(t.file), pretty_print(psp->files[i]));
    for (const auto& r : t.reports) EXPECT_EQ(r.mode, TransformReport::Mode::none);
  }
}

std::unique_ptr<Loaded> reparse(const ModelFile& file) {
  ParseOptions options;
  options.allow_reserved_names = true;
  auto r = parse_file(pretty_print(file), file.path, options);
  EXPECT_TRUE(r.ok());
  auto out = std::make_unique<Loaded>();
  out->files.push_back(std::move(r.model));
  out->analysis = analyze(out->files);
  EXPECT_EQ(errors_of(out->analysis.diagnostics), "");
  return out;
}

TEST(Transform, Idempotent) {
  auto l = load({read_data("fixtures/iaf_neuron_ode.nestml")});
  ModelFile once = transform(*l).file;
  auto again = reparse(once);
  TransformedFile twice = transform(*again);
  EXPECT_EQ(twice.reports[0].mode, TransformReport::Mode::none);
  EXPECT_EQ(pretty_print(twice.file), pretty_print(once));
}

const char* kNumeric = R"(neuron n:
  state:
    V mV = 10 mV
    alias V_rel mV = V - E_L
  end
  parameter:
    tau ms = 10
    E_L mV = 0
  end
  input:
    spikes <- spike
  end
  dynamics timestep(t ms):
    ODE:
      g == exp(-t / tau)
      d/dt V == -V_rel**2 / (tau * 1 mV) + g * 1 (mV/ms)
    end
  end
end
)";

TEST(Transform, NumericFallback) {
  auto l = load({kNumeric});
  TransformedFile t = transform(*l);
  const TransformReport& r = t.reports[0];
  EXPECT_EQ(r.mode, TransformReport::Mode::numeric);
  EXPECT_TRUE(has_code(r.diagnostics, "W0501"));
  EXPECT_EQ(errors_of(r.diagnostics), "");
  std::string text = pretty_print(t.file);
  for (const char* part :
       {"    g real = 0\n", "    h ms = resolution()\n",
        "  function integrate_rk4(t ms):\n", "    integrate_rk4(t)\n",
        "    g += spikes.getSum(t)\n",
        "__k1_V mV/ms = -(V - E_L) ** 2 / (tau * 1 mV) + g * 1 (mV/ms)",
        "__k2_g 1/ms = -(g + h / 2 * __k1_g) / tau",
        "__k4_V mV/ms = -((V + h * __k3_V) - E_L) ** 2",
        "V = V + h / 6 * (__k1_V + 2 * __k2_V + 2 * __k3_V + __k4_V)"}) {
    EXPECT_NE(text.find(part), std::string::npos) << part << "\n" << text;
  }
  EXPECT_EQ(errors_of(recheck_transformed({t.file})), "");
}

TEST(Transform, NumericNamesAvoidClashes) {
  std::string src = kNumeric;
  src.replace(src.find("    E_L mV = 0\n"), 15,
              "    E_L mV = 0\n    h real = 1\n");
  src.replace(src.find("  dynamics"), 0,
              "  function integrate_rk4(x real) real:\n    return x\n  end\n");
  auto l = load({src});
  TransformedFile t = transform(*l);
  std::string text = pretty_print(t.file);
  EXPECT_NE(text.find("    __h ms = resolution()\n"), std::string::npos);
  EXPECT_NE(text.find("    __integrate_rk4(t)\n"), std::string::npos);
  EXPECT_NE(text.find("V = V + __h / 6"), std::string::npos);
  EXPECT_EQ(errors_of(recheck_transformed({t.file})), "");
}

TEST(Transform, AliasWritesUseSetter) {
  auto l = load({R"(neuron n:
  state:
    V mV
    alias V_rel mV = V - E_L
  end
  parameter:
    E_L mV = -70
    tau ms = 10
  end
  function set_V_rel(v mV):
    V = v + E_L
  end
  dynamics timestep(t ms):
    ODE:
      d/dt V == -V_rel / tau
    end
    if V_rel > 10 mV:
      V_rel = 0 mV
    end
    V_rel += 1 mV
  end
end
)"});
  TransformedFile t = transform(*l);
  EXPECT_EQ(t.reports[0].mode, TransformReport::Mode::exact);
  std::string text = pretty_print(t.file);
  EXPECT_NE(text.find("      set_V_rel(0 mV)\n"), std::string::npos) << text;
  EXPECT_NE(text.find("    set_V_rel(V_rel + 1 mV)\n"), std::string::npos);
  EXPECT_NE(text.find("    V = v + E_L\n"), std::string::npos);
  EXPECT_EQ(errors_of(recheck_transformed({t.file})), "");
}

TEST(Transform, Errors) {
  auto two = load({R"(neuron n:
  state:
    V mV
    r integer
  end
  parameter:
    tau ms = 10
  end
  dynamics timestep(t ms):
    if r == 0:
      ODE:
        d/dt V == -V / tau
      end
    else:
      ODE:
        d/dt V == -2 * V / tau
      end
    end
  end
end
)"});
  TransformedFile a = transform(*two);
  EXPECT_TRUE(has_code(a.reports[0].diagnostics, "E0503"));
  EXPECT_EQ(a.reports[0].mode, TransformReport::Mode::none);
  EXPECT_TRUE(equal(a.file, two->files[0]));

  std::string unresolved = kNumeric;
  unresolved.replace(unresolved.find("exp(-t / tau)"), 13, "1 / (1 + t / tau)");
  auto b = load({unresolved});
  TransformedFile tb = transform(*b);
  EXPECT_TRUE(has_code(tb.reports[0].diagnostics, "E0502"));
  EXPECT_TRUE(has_code(tb.reports[0].diagnostics, "W0502"));

  std::string ambiguous = kNumeric;
  ambiguous.replace(ambiguous.find("spikes <- spike"), 15,
                    "spikes <- spike\n    other <- spike");
  auto c = load({ambiguous});
  TransformedFile tc = transform(*c);
  EXPECT_TRUE(has_code(tc.reports[0].diagnostics, "E0501"));
  EXPECT_EQ(tc.reports[0].mode, TransformReport::Mode::none);
}

}  // namespace
}  // namespace nestml

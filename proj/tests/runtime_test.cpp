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


#include "nestml/runtime/runtime.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "nestml/cli/pipeline.hpp"
#include "test_support.hpp"

namespace nestml {
namespace {

using testing::read_data;

std::unique_ptr<Compilation> build(std::vector<SourceFile> sources,
                                   bool force_numeric = false) {
  TransformOptions options;
  options.force_numeric = force_numeric;
  auto c = compile(sources, Compilation::Stage::done, options);
  std::string messages;
  for (const auto& d : c->diagnostics) messages += format_diagnostic(d) + "\n";
  EXPECT_TRUE(c->ok()) << messages;
  return c;
}

std::unique_ptr<Compilation> build_text(const std::string& text,
                                        bool force_numeric = false) {
  return build({{"model.nestml", text}}, force_numeric);
}

std::unique_ptr<Compilation> iaf() {
  return build({{"iaf_neuron.nestml", read_data("fixtures/iaf_neuron.nestml")}});
}

std::unique_ptr<Compilation> iaf_ode(bool force_numeric = false) {
  return build(
      {{"iaf_neuron_ode.nestml", read_data("fixtures/iaf_neuron_ode.nestml")}},
      force_numeric);
}

Trace simulate(const Compilation& c, const std::string& neuron,
               const SimulationConfig& config, const StimulusProgram& stimulus,
               const std::vector<std::string>& probes) {
  const ModelScope* m = c.solved_model(neuron);
  EXPECT_NE(m, nullptr);
  return run(*m, c.solved_analysis.types, config, stimulus, probes);
}

RuntimeError::Kind error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const RuntimeError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no RuntimeError";
  return RuntimeError::Kind::evaluation;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

const char* kLeaky = R"(neuron leaky:
  state:
    V mV = 10
  end
  parameter:
    tau ms = 10
    I pA = 0
    C pF = 100
  end
  dynamics timestep(t ms):
    ODE:
      d/dt V == -V / tau + I / C
    end
  end
end
)";

TEST(RingBuffer, AddGetAdvance) {
  RingBuffer b(3);
  b.add(0, 1.0);
  b.add(0, 2.0);
  b.add(2, 5.0);
  EXPECT_EQ(b.get(), 3.0);
  EXPECT_EQ(b.get(2), 5.0);
  b.advance();
  EXPECT_EQ(b.get(), 0.0);
  EXPECT_EQ(b.get(1), 5.0);
  b.advance();
  EXPECT_EQ(b.get(), 5.0);
  b.advance();
  EXPECT_EQ(b.get(), 0.0);
  EXPECT_THROW(b.add(3, 1.0), RuntimeError);
}

TEST(Runtime, SnapRoundsHalfUp) {
  EXPECT_EQ(snap_to_step(1.0, 0.1), 10);
  EXPECT_EQ(snap_to_step(1.04, 0.1), 10);
  EXPECT_EQ(snap_to_step(1.05, 0.1), 11);
  EXPECT_EQ(snap_to_step(0.0, 0.1), 0);
}

TEST(Runtime, IafInstantiation) {
  auto c = iaf();
  SimulationConfig config;
  NeuronInstance n = instantiate(*c->solved_model("iaf_neuron"),
                                 c->solved_analysis.types, config);
  EXPECT_EQ(n.value("C_m"), 250.0);
  EXPECT_NEAR(n.value("P11"), 0.951229424500714, 1e-15);
  EXPECT_EQ(n.value("P22"), n.value("P11"));
  EXPECT_EQ(n.value("RefractoryCounts"), 20.0);
  EXPECT_EQ(n.value("V_rel"), -70.0);
  EXPECT_TRUE(n.has_variable("V_rel"));
  EXPECT_FALSE(n.has_variable("nope"));
}

TEST(Runtime, ParameterGuardRejectsOverride) {
  auto c = iaf();
  SimulationConfig config;
  config.overrides["C_m"] = -1.0;
  EXPECT_EQ(error_kind([&] {
              instantiate(*c->solved_model("iaf_neuron"),
                          c->solved_analysis.types, config);
            }),
            RuntimeError::Kind::guard_violation);
  config.overrides = {{"V_m", 1.0}};
  EXPECT_EQ(error_kind([&] {
              instantiate(*c->solved_model("iaf_neuron"),
                          c->solved_analysis.types, config);
            }),
            RuntimeError::Kind::invalid_input);
}

TEST(Runtime, StateGuardCheckedAfterStep) {
  auto c = iaf();
  SimulationConfig config;
  config.guard_checks = true;
  NeuronInstance n = instantiate(*c->solved_model("iaf_neuron"),
                                 c->solved_analysis.types, config);
  n.set_state("V_m", -200.0);
  EXPECT_EQ(error_kind([&] { n.step(0); }), RuntimeError::Kind::guard_violation);

  config.guard_checks = false;
  NeuronInstance quiet = instantiate(*c->solved_model("iaf_neuron"),
                                     c->solved_analysis.types, config);
  quiet.set_state("V_m", -200.0);
  EXPECT_NO_THROW(quiet.step(0));
}

TEST(Runtime, RefractoryCountsDown) {
  auto c = iaf();
  NeuronInstance n = instantiate(*c->solved_model("iaf_neuron"),
                                 c->solved_analysis.types, {});
  n.set_state("r", 3);
  n.step(0);
  EXPECT_EQ(n.value("r"), 2.0);
}

TEST(Runtime, SameStepCurrentsAdd) {
  auto c = iaf();
  StimulusProgram s;
  s.currents.push_back({"currentBuffer", 1.0, 0.0, 0.5, false});
  s.currents.push_back({"currentBuffer", 1.0, 0.0, 1.5, false});
  SimulationConfig config;
  config.duration_ms = 2.0;
  Trace t = simulate(*c, "iaf_neuron", config, s, {"y0"});
  auto y0 = t.column("y0");
  ASSERT_EQ(y0.size(), 21u);
  EXPECT_EQ(y0[11], 2.0);
  EXPECT_EQ(y0[10], 0.0);
  EXPECT_EQ(y0[12], 0.0);
}

TEST(Runtime, CurrentRangeIsHalfOpen) {
  auto c = iaf();
  StimulusProgram s;
  s.currents.push_back({"currentBuffer", 1.0, 1.5, 3.0, true});
  SimulationConfig config;
  config.duration_ms = 2.0;
  auto y0 = simulate(*c, "iaf_neuron", config, s, {"y0"}).column("y0");
  for (size_t i = 0; i < y0.size(); ++i) {
    EXPECT_EQ(y0[i], i >= 11 && i <= 15 ? 3.0 : 0.0) << i;
  }
}

TEST(Runtime, SpikeResetsThroughAliasSetter) {
  auto c = iaf();
  SimulationConfig config;
  config.duration_ms = 100.0;
  config.overrides["I_e"] = 1000.0;
  Trace t = simulate(*c, "iaf_neuron", config, {}, {"V_m", "V_rel", "r"});
  ASSERT_FALSE(t.spike_times_ms.empty());
  long k = std::lround(t.spike_times_ms[0] / 0.1);
  EXPECT_EQ(t.column("V_m")[k], 0.0);
  EXPECT_EQ(t.column("V_rel")[k], -70.0);
  EXPECT_EQ(t.column("r")[k], 20.0);
  // Each interspike interval covers the refractory period.
  for (size_t i = 1; i < t.spike_times_ms.size(); ++i) {
    EXPECT_GT(t.spike_times_ms[i] - t.spike_times_ms[i - 1], 2.0);
  }
}

TEST(Runtime, LeakyDecayMatchesClosedForm) {
  auto c = build_text(kLeaky);
  SimulationConfig config;
  config.duration_ms = 10.0;
  auto v = simulate(*c, "leaky", config, {}, {"V"}).column("V");
  ASSERT_EQ(v.size(), 101u);
  const double expected = 3.678794411714423;  // 10 e^-1
  EXPECT_NEAR(v.back(), expected, 1e-12 * expected);
}

TEST(Runtime, ConstantDriveMatchesClosedForm) {
  // iaf_neuron_ode from rest with tau 10 ms, C_m 250 pF, I_e 1000 pA: V -> 40 mV.
  auto c = iaf_ode();
  SimulationConfig config;
  config.overrides = {{"I_e", 1000.0}, {"Theta", 1e9}};
  auto v = simulate(*c, "iaf_neuron_ode", config, {}, {"V_m"}).column("V_m");
  ASSERT_EQ(v.size(), 1001u);
  EXPECT_NEAR(v.back(), 40.0 * (1.0 - std::exp(-10.0)), 1e-6);
  EXPECT_NEAR(v[50], 40.0 * (1.0 - std::exp(-0.5)), 1e-6);

  auto leaky = build_text(kLeaky);
  config.overrides = {{"I", 400.0}};
  auto w = simulate(*leaky, "leaky", config, {}, {"V"}).column("V");
  // V(0) = 10 relaxes to 40: V(t) = 40 - 30 e^(-t/10)
  EXPECT_NEAR(w.back(), 40.0 - 30.0 * std::exp(-10.0), 1e-6);
}

TEST(Runtime, EmptyDynamicsHoldsState) {
  auto c = build_text(R"(neuron still:
  state:
    x real = 3
  end
end
)");
  SimulationConfig config;
  config.duration_ms = 1.0;
  auto x = simulate(*c, "still", config, {}, {"x"}).column("x");
  ASSERT_EQ(x.size(), 11u);
  for (double v : x) EXPECT_EQ(v, 3.0);
}

TEST(Runtime, AlphaPeakAfterSpike) {
  auto c = iaf_ode();
  StimulusProgram s;
  s.spikes.push_back({"spikeBuffer", 10.0, 1.0});
  SimulationConfig config;
  config.duration_ms = 30.0;
  auto i = simulate(*c, "iaf_neuron_ode", config, s, {"I_shape"}).column("I_shape");
  size_t peak = 0;
  for (size_t k = 0; k < i.size(); ++k) {
    if (i[k] > i[peak]) peak = k;
  }
  // Jump at the end of the delivery step, peak one time constant later.
  EXPECT_NEAR(peak * 0.1, 12.1, 1e-9);
  EXPECT_NEAR(i[peak], 1.0, 0.01);
  EXPECT_EQ(i[100], 0.0);
}

// iaf_neuron_ode response on an h grid, sampled every `aligned` ms. Each
// spike is moved so its jump lands where it would at resolution `aligned`.
Trace iaf_ode_response(const Compilation& c, double h, double aligned,
                       const std::vector<std::pair<double, double>>& spikes,
                       double duration = 30.0) {
  StimulusProgram s;
  for (const auto& [time, weight] : spikes) {
    s.spikes.push_back({"spikeBuffer", time + aligned - h, weight});
  }
  SimulationConfig config;
  config.resolution_ms = h;
  config.duration_ms = duration;
  config.sample_every = static_cast<int>(std::lround(aligned / h));
  config.overrides = {{"w", 100.0}, {"Theta", 1e9}};
  return simulate(c, "iaf_neuron_ode", config, s, {"V_m"});
}

TEST(Runtime, ExactMatchesFineRk4) {
  auto exact = iaf_ode();
  auto numeric = iaf_ode(true);
  ASSERT_EQ(numeric->report("iaf_neuron_ode")->mode, TransformReport::Mode::numeric);
  auto spikes = std::vector<std::pair<double, double>>{{1.0, 1.0}, {4.0, 2.0}, {40.0, 3.0}};
  auto a = iaf_ode_response(*exact, 0.1, 0.1, spikes, 100.0).column("V_m");
  auto b = iaf_ode_response(*numeric, 1e-4, 0.1, spikes, 100.0).column("V_m");
  ASSERT_EQ(a.size(), 1001u);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_GT(max_abs(a), 0.1);
  for (size_t k = 0; k < a.size(); ++k) {
    EXPECT_LE(std::abs(a[k] - b[k]), 1e-6) << k;
  }
}

TEST(Runtime, ExactInvariantUnderHalvedResolution) {
  auto c = iaf_ode();
  auto spikes = std::vector<std::pair<double, double>>{{1.0, 1.0}, {3.0, -0.5}};
  auto a = iaf_ode_response(*c, 0.1, 0.1, spikes).column("V_m");
  auto b = iaf_ode_response(*c, 0.05, 0.1, spikes).column("V_m");
  ASSERT_EQ(a.size(), b.size());
  double scale = max_abs(a);
  for (size_t k = 0; k < a.size(); ++k) {
    EXPECT_LE(std::abs(a[k] - b[k]), 1e-10 * scale) << k;
  }

  auto leaky = build_text(kLeaky);
  SimulationConfig config;
  config.overrides = {{"I", 250.0}};
  auto coarse = simulate(*leaky, "leaky", config, {}, {"V"}).column("V");
  config.resolution_ms = 0.05;
  config.sample_every = 2;
  auto fine = simulate(*leaky, "leaky", config, {}, {"V"}).column("V");
  ASSERT_EQ(coarse.size(), fine.size());
  for (size_t k = 0; k < coarse.size(); ++k) {
    EXPECT_LE(std::abs(coarse[k] - fine[k]), 1e-10 * max_abs(coarse)) << k;
  }
}

TEST(Runtime, Superposition) {
  auto c = iaf_ode();
  auto one = iaf_ode_response(*c, 0.1, 0.1, {{1.0, 1.0}}).column("V_m");
  auto two = iaf_ode_response(*c, 0.1, 0.1, {{2.5, 3.0}}).column("V_m");
  auto both = iaf_ode_response(*c, 0.1, 0.1, {{1.0, 1.0}, {2.5, 3.0}}).column("V_m");
  double scale = max_abs(both);
  ASSERT_GT(scale, 0.0);
  for (size_t k = 0; k < both.size(); ++k) {
    EXPECT_LE(std::abs(both[k] - one[k] - two[k]), 1e-10 * scale) << k;
  }
}

TEST(Runtime, Deterministic) {
  auto c = iaf();
  StimulusProgram s;
  s.spikes.push_back({"spikeBuffer", 5.0, 300.0});
  s.currents.push_back({"currentBuffer", 10.0, 60.0, 500.0, true});
  SimulationConfig config;
  Trace a = simulate(*c, "iaf_neuron", config, s, {"V_m", "y2"});
  Trace b = simulate(*c, "iaf_neuron", config, s, {"V_m", "y2"});
  EXPECT_EQ(a.to_csv(), b.to_csv());
  EXPECT_EQ(a.spikes_csv(), b.spikes_csv());
  EXPECT_FALSE(a.spike_times_ms.empty());
}

TEST(Runtime, ComponentMatchesInlinedNeuron) {
  auto plain = iaf();
  auto split = build({{"iaf_psp.nestml", read_data("fixtures/iaf_psp.nestml")},
                      {"psp_helpers.nestml", read_data("fixtures/psp_helpers.nestml")}});
  StimulusProgram s;
  s.spikes.push_back({"spikeBuffer", 2.0, 200.0});
  SimulationConfig config;
  config.duration_ms = 20.0;
  config.overrides = {{"I_e", 100.0}};
  auto a = simulate(*plain, "iaf_neuron", config, s, {"V_m"}).column("V_m");
  config.overrides = {{"PSP.I_e", 100.0}};
  auto b = simulate(*split, "iaf_neuron_psp", config, s, {"PSP.V_m", "PSP.V_rel"});
  EXPECT_EQ(max_abs(a), max_abs(b.column("PSP.V_m")));
  auto bv = b.column("PSP.V_m");
  for (size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], bv[k], 1e-12) << k;
  EXPECT_EQ(b.column("PSP.V_rel")[0], -70.0);
}

TEST(Runtime, TraceShapeAndCsv) {
  auto c = iaf();
  SimulationConfig config;
  config.duration_ms = 100.0;
  Trace t = simulate(*c, "iaf_neuron", config, {}, {"V_m"});
  EXPECT_EQ(t.rows.size(), 1001u);
  std::string csv = t.to_csv();
  EXPECT_EQ(csv.substr(0, 17), "time_ms,V_m\n0,0\n0");
  EXPECT_NE(csv.find("\n100,"), std::string::npos);
  EXPECT_NE(csv.find("\n0.3,"), std::string::npos);
  config.sample_every = 10;
  EXPECT_EQ(simulate(*c, "iaf_neuron", config, {}, {"V_m"}).rows.size(), 101u);
}

TEST(Runtime, OffGridStimulusIsNoted) {
  auto c = iaf();
  StimulusProgram s;
  s.spikes.push_back({"spikeBuffer", 1.04, 1.0});
  SimulationConfig config;
  config.duration_ms = 2.0;
  Trace t = simulate(*c, "iaf_neuron", config, s, {"y1"});
  ASSERT_EQ(t.notes.size(), 1u);
  EXPECT_NE(t.notes[0].find("snapped to 1 ms"), std::string::npos);
  EXPECT_EQ(t.column("y1")[10], 0.0);
  EXPECT_GT(t.column("y1")[11], 0.0);
}

TEST(Runtime, InvalidInputs) {
  auto c = iaf();
  auto run_with = [&](StimulusProgram s, std::vector<std::string> probes) {
    return [&c, s, probes] {
      simulate(*c, "iaf_neuron", {}, s, probes);
    };
  };
  StimulusProgram wrong_kind;
  wrong_kind.spikes.push_back({"currentBuffer", 1.0, 1.0});
  EXPECT_EQ(error_kind(run_with(wrong_kind, {})), RuntimeError::Kind::invalid_input);
  StimulusProgram negative;
  negative.spikes.push_back({"spikeBuffer", -1.0, 1.0});
  EXPECT_EQ(error_kind(run_with(negative, {})), RuntimeError::Kind::invalid_input);
  EXPECT_EQ(error_kind(run_with({}, {"missing"})), RuntimeError::Kind::invalid_input);
}

TEST(Runtime, SignFilteredBuffers) {
  auto c = build_text(R"(neuron sided:
  state:
    ex, inh real
  end
  input:
    up <- excitatory spike
    down <- inhibitory spike
  end
  dynamics timestep(t ms):
    ex += up.getSum(t)
    inh += down.getSum(t)
  end
end
)");
  NeuronInstance n = instantiate(*c->solved_model("sided"), c->solved_analysis.types, {});
  n.deliver("up", 2.0);
  n.deliver("up", -5.0);
  n.deliver("down", 3.0);
  n.deliver("down", -1.0);
  n.step(0);
  EXPECT_EQ(n.value("ex"), 2.0);
  EXPECT_EQ(n.value("inh"), -1.0);
  EXPECT_THROW(n.deliver("nope", 1.0), RuntimeError);
}

TEST(Runtime, EvaluationErrors) {
  auto c = build_text(R"(neuron broken:
  state:
    x real = 1
  end
  parameter:
    d real = 0
  end
  dynamics timestep(t ms):
    x = ln(d) + 1 / d
  end
end
)");
  NeuronInstance n = instantiate(*c->solved_model("broken"), c->solved_analysis.types, {});
  EXPECT_EQ(error_kind([&] { n.step(0); }), RuntimeError::Kind::evaluation);
}

TEST(Runtime, MinDelayUnsupported) {
  auto c = build_text(R"(neuron slow:
  state:
    x real = 1
  end
  dynamics minDelay(t ms):
    x = x + 1
  end
end
)");
  EXPECT_EQ(error_kind([&] {
              instantiate(*c->solved_model("slow"), c->solved_analysis.types, {});
            }),
            RuntimeError::Kind::unsupported);
}

TEST(Runtime, FunctionsLocalsAndLog) {
  auto c = build_text(R"(neuron calls:
  state:
    x real = 0
    n integer = 0
  end
  function twice(v real) real:
    y real = v * 2
    if y > 10:
      return 10
    end
    return y
  end
  dynamics timestep(t ms):
    n += 1
    x = twice(n)
    if n == 2:
      log_info("second")
    end
  end
end
)");
  NeuronInstance n = instantiate(*c->solved_model("calls"), c->solved_analysis.types, {});
  n.step(0);
  EXPECT_EQ(n.value("x"), 2.0);
  for (long k = 1; k < 8; ++k) n.step(k);
  EXPECT_EQ(n.value("x"), 10.0);
  ASSERT_EQ(n.log().size(), 1u);
  EXPECT_EQ(n.log()[0], "second");
}

TEST(Stimulus, FromJson) {
  auto s = StimulusProgram::from_json(R"({"events": [
    {"kind": "spike", "buffer": "in", "time_ms": 1.5, "weight": 2},
    {"kind": "current", "buffer": "I", "time_ms": 3, "amplitude": 0.5},
    {"kind": "current", "buffer": "I", "from_ms": 1, "to_ms": 4, "amplitude": 7}
  ]})");
  ASSERT_EQ(s.spikes.size(), 1u);
  EXPECT_EQ(s.spikes[0].buffer, "in");
  EXPECT_EQ(s.spikes[0].time_ms, 1.5);
  EXPECT_EQ(s.spikes[0].weight, 2.0);
  ASSERT_EQ(s.currents.size(), 2u);
  EXPECT_FALSE(s.currents[0].range);
  EXPECT_TRUE(s.currents[1].range);
  EXPECT_EQ(s.currents[1].to_ms, 4.0);
  EXPECT_THROW(StimulusProgram::from_json("{"), RuntimeError);
  EXPECT_THROW(StimulusProgram::from_json(R"({"events": [{"kind": "x", "buffer": "b"}]})"),
               RuntimeError);
  EXPECT_THROW(StimulusProgram::from_json(R"({"events": [{"kind": "spike", "buffer": "b"}]})"),
               RuntimeError);
}

}  // namespace
}  // namespace nestml

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


#ifndef NESTML_RUNTIME_RUNTIME_HPP
#define NESTML_RUNTIME_RUNTIME_HPP

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nestml/semantics/context_conditions.hpp"

namespace nestml {

class RuntimeError : public std::runtime_error {
 public:
  enum class Kind { guard_violation, evaluation, unsupported, invalid_input };

  RuntimeError(Kind kind, const std::string& message, SourceSpan span = {})
      : std::runtime_error(message), kind_(kind), span_(std::move(span)) {}

  Kind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }

 private:
  Kind kind_;
  SourceSpan span_;
};

// Accumulators indexed by steps ahead of the current one.
class RingBuffer {
 public:
  explicit RingBuffer(size_t slots = 2) : slots_(slots, 0.0) {}

  // Adds to the slot `delay` steps ahead (0: the current step).
  void add(size_t delay, double value);
  double get(size_t delay = 0) const;
  // Clears the current slot and moves to the next step.
  void advance();
  size_t size() const { return slots_.size(); }

 private:
  std::vector<double> slots_;
  size_t read_ = 0;
};

struct SimulationConfig {
  double resolution_ms = 0.1;
  double duration_ms = 100.0;
  bool guard_checks = false;
  // `name` or `component_alias.name` -> value in the declared scale
  std::map<std::string, double> overrides;
  int sample_every = 1;
};

struct StimulusProgram {
  struct Spike {
    std::string buffer;
    double time_ms = 0.0;
    double weight = 0.0;
  };
  // A single-step event at `from_ms`, or with `range` a constant
  // amplitude on every step in [from_ms, to_ms).
  struct Current {
    std::string buffer;
    double from_ms = 0.0;
    double to_ms = 0.0;
    double amplitude = 0.0;
    bool range = false;
  };

  std::vector<Spike> spikes;
  std::vector<Current> currents;

  // The JSON stimulus document. Throws RuntimeError(invalid_input).
  static StimulusProgram from_json(const std::string& text);
};

struct Trace {
  int sample_every = 1;
  double resolution_ms = 0.1;
  std::vector<std::string> columns;
  std::vector<double> times_ms;
  std::vector<std::vector<double>> rows;
  std::vector<double> spike_times_ms;
  // Stimulus times moved onto the step grid, and log_info output.
  std::vector<std::string> notes;

  // Column by name; throws std::out_of_range.
  std::vector<double> column(const std::string& name) const;
  // `time_ms,<columns>` then one line per row, 17 significant digits.
  std::string to_csv() const;
  // `spike_time_ms` then one line per spike.
  std::string spikes_csv() const;
};

// Executes a checked neuron. Variables hold plain numbers in their declared
// scale; booleans are 0/1.
class NeuronInstance {
 public:
  NeuronInstance(const ModelScope& model, const TypeInfo& types,
                 const SimulationConfig& config);
  ~NeuronInstance();
  NeuronInstance(NeuronInstance&&) noexcept;
  NeuronInstance& operator=(NeuronInstance&&) noexcept;

  // One update step with `t` bound to step * resolution, then buffers
  // advance and state guards are checked if enabled.
  void step(long step_index);

  // Routes a weight into a buffer for the current step (delay 0) or later.
  // Spike buffers drop weights their modifiers exclude. Throws
  // RuntimeError(invalid_input) for an unknown buffer.
  void deliver(const std::string& buffer, double value, size_t delay = 0);

  // State, alias, parameter or internal by name (`alias.name` for
  // component variables).
  double value(const std::string& name) const;
  void set_state(const std::string& name, double value);
  bool has_variable(const std::string& name) const;

  const std::vector<long>& emitted_spikes() const;
  const std::vector<std::string>& log() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Parameters from initializers and overrides, internals once with
// resolution() bound, state from initializers; parameter guards checked.
NeuronInstance instantiate(const ModelScope& model, const TypeInfo& types,
                           const SimulationConfig& config);

// floor(duration / resolution) steps with stimulus delivery and sampling.
Trace run(const ModelScope& model, const TypeInfo& types,
          const SimulationConfig& config, const StimulusProgram& stimulus,
          const std::vector<std::string>& probes);

// Step index of a stimulus time: round half up on the grid.
long snap_to_step(double time_ms, double resolution_ms);

}  // namespace nestml

#endif  // NESTML_RUNTIME_RUNTIME_HPP

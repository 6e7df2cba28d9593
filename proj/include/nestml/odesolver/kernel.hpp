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

#ifndef NESTML_ODESOLVER_KERNEL_HPP
#define NESTML_ODESOLVER_KERNEL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nestml/odesolver/symbolic.hpp"

namespace nestml {

class SolverError : public std::runtime_error {
 public:
  enum class Kind {
    not_linear_kernel,
    singular_sample,
    not_linear_constant,
    symbolic_failure,
    ambiguous_binding,
  };

  SolverError(Kind kind, const std::string& msg, SourceSpan span = {})
      : std::runtime_error(msg), kind_(kind), span_(std::move(span)) {}

  Kind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }

 private:
  Kind kind_;
  SourceSpan span_;
};

// k^(m) = sum_i coefficients[i] * k^(i), with t-free coefficients.
struct KernelOde {
  int order = 0;
  std::vector<SymPtr> coefficients;
  // k(0), k'(0), ..., k^(m-1)(0)
  std::vector<SymPtr> initial_conditions;
  // Roots of the characteristic polynomial with multiplicity, equal roots
  // adjacent. Their elementary symmetric polynomials give the coefficients.
  std::vector<SymPtr> rates;
};

// Finds the smallest order m <= max_order for which the kernel satisfies a
// linear constant-coefficient ODE. The time variable is `time`. Throws
// SolverError (not_linear_kernel or singular_sample).
KernelOde shape_to_ode(const SymPtr& kernel, int max_order = 5,
                       const std::string& time = "t",
                       std::uint32_t seed = 20261016);

// Small dense solve with partial pivoting; false when singular.
bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& x);

}  // namespace nestml

#endif  // NESTML_ODESOLVER_KERNEL_HPP

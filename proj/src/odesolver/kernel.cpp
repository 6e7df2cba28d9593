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

#include "nestml/odesolver/kernel.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <random>

namespace nestml {

bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& x) {
  const size_t n = b.size();
  double norm = 0.0;
  for (const auto& row : a) {
    for (double v : row) norm = std::max(norm, std::fabs(v));
  }
  if (norm == 0.0) return false;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (std::fabs(a[piv][col]) <= 1e-13 * norm) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (size_t r = col + 1; r < n; ++r) {
      double f = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (size_t i = n; i-- > 0;) {
    double s = b[i];
    for (size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return true;
}

namespace {

using Env = std::map<std::string, double>;

constexpr int kDraws = 4;          // one solving draw plus three checks
constexpr int kVerifyTimes = 8;
constexpr int kSampleAttempts = 3;
constexpr double kResidualTol = 1e-9;
constexpr double kRateTol = 1e-6;

void collect_rates(const SymPtr& e, const std::string& time,
                   std::vector<SymPtr>& out) {
  if (e->kind == Sym::Kind::exp) {
    SymPtr r = diff(e->ops[0], time);
    if (!depends_on(r, time)) {
      bool seen = false;
      for (const auto& x : out) seen = seen || sym_equal(x, r);
      if (!seen) out.push_back(r);
    }
  }
  for (const auto& o : e->ops) collect_rates(o, time, out);
}

// Monic polynomial prod (x - r_i), coefficients low to high.
std::vector<double> poly_numeric(const std::vector<double>& roots) {
  std::vector<double> p{1.0};
  for (double r : roots) {
    std::vector<double> q(p.size() + 1, 0.0);
    for (size_t i = 0; i < p.size(); ++i) {
      q[i + 1] += p[i];
      q[i] -= r * p[i];
    }
    p = q;
  }
  return p;
}

std::vector<SymPtr> poly_symbolic(const std::vector<SymPtr>& roots) {
  std::vector<SymPtr> p{sym_const(1.0)};
  for (const auto& r : roots) {
    std::vector<SymPtr> q(p.size() + 1, sym_const(0.0));
    for (size_t i = 0; i < p.size(); ++i) {
      q[i + 1] = q[i + 1] + p[i];
      q[i] = q[i] - r * p[i];
    }
    p = q;
  }
  return p;
}

}  // namespace

KernelOde shape_to_ode(const SymPtr& kernel, int max_order,
                       const std::string& time, std::uint32_t seed) {
  if (contains_atom(kernel)) {
    throw SolverError(SolverError::Kind::not_linear_kernel,
                      "kernel contains a call that is not exp or ln");
  }
  std::set<std::string> params = free_symbols(kernel);
  params.erase(time);
  params.erase("E");

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> param_dist(0.5, 2.5);
  std::uniform_real_distribution<double> time_dist(0.05, 6.0);
  std::vector<Env> draws(kDraws);
  for (auto& env : draws) {
    for (const auto& p : params) env[p] = param_dist(rng);
  }
  std::vector<std::vector<double>> verify_times(kDraws);
  for (auto& ts : verify_times) {
    for (int i = 0; i < kVerifyTimes; ++i) ts.push_back(time_dist(rng));
  }

  std::vector<SymPtr> derivs{kernel};
  auto at = [&](int i, const Env& env, double t) {
    Env e = env;
    e[time] = t;
    return evaluate(derivs[i], e);
  };

  for (int m = 1; m <= max_order; ++m) {
    derivs.push_back(diff(derivs.back(), time));
    std::vector<std::vector<double>> coeffs(kDraws);
    bool verified = true;
    for (int d = 0; d < kDraws && verified; ++d) {
      bool solved = false;
      for (int attempt = 0; attempt < kSampleAttempts && !solved; ++attempt) {
        std::vector<std::vector<double>> a(m, std::vector<double>(m));
        std::vector<double> b(m);
        for (int r = 0; r < m; ++r) {
          double t = 0.5 * (r + 1) + 0.1 * attempt;
          for (int i = 0; i < m; ++i) a[r][i] = at(i, draws[d], t);
          b[r] = at(m, draws[d], t);
        }
        solved = solve_linear(a, b, coeffs[d]);
      }
      if (!solved) {
        // Derivatives dependent at every sample: either the kernel is
        // identically zero or a lower order already failed numerically.
        bool all_zero = true;
        for (int i = 0; i <= m; ++i) {
          all_zero = all_zero && at(i, draws[d], 0.7) == 0.0;
        }
        if (!all_zero) {
          throw SolverError(SolverError::Kind::singular_sample,
                            "sample matrix singular at order " +
                                std::to_string(m));
        }
        coeffs[d].assign(m, 0.0);
      }
      for (double t : verify_times[d]) {
        double lhs = at(m, draws[d], t);
        double rhs = 0.0;
        double mag = std::fabs(lhs);
        for (int i = 0; i < m; ++i) {
          double term = coeffs[d][i] * at(i, draws[d], t);
          rhs += term;
          mag += std::fabs(term);
        }
        if (!std::isfinite(lhs) || !std::isfinite(rhs) ||
            std::fabs(lhs - rhs) > kResidualTol * std::max(mag, 1e-300)) {
          verified = false;
          break;
        }
      }
    }
    if (!verified) continue;

    // Symbolic coefficients from the exponential rates of the kernel.
    std::vector<SymPtr> candidates;
    collect_rates(kernel, time, candidates);
    bool has_zero = false;
    for (const auto& c : candidates) has_zero = has_zero || is_zero(c);
    if (!has_zero) candidates.push_back(sym_const(0.0));

    std::vector<std::vector<double>> cand_values(kDraws);
    for (int d = 0; d < kDraws; ++d) {
      for (const auto& c : candidates) cand_values[d].push_back(evaluate(c, draws[d]));
    }
    auto matches = [&](const std::vector<int>& counts) {
      for (int d = 0; d < kDraws; ++d) {
        std::vector<double> roots;
        for (size_t c = 0; c < counts.size(); ++c) {
          for (int k = 0; k < counts[c]; ++k) roots.push_back(cand_values[d][c]);
        }
        std::vector<double> p = poly_numeric(roots);
        for (int i = 0; i < m; ++i) {
          double want = -coeffs[d][i];
          if (std::fabs(p[i] - want) > kRateTol * std::max(1.0, std::fabs(want))) {
            return false;
          }
        }
      }
      return true;
    };
    std::vector<int> counts(candidates.size(), 0);
    std::vector<int> found;
    std::function<void(size_t, int)> search = [&](size_t idx, int left) {
      if (!found.empty()) return;
      if (idx + 1 == counts.size()) {
        counts[idx] = left;
        if (matches(counts)) found = counts;
        return;
      }
      for (int k = left; k >= 0 && found.empty(); --k) {
        counts[idx] = k;
        search(idx + 1, left - k);
      }
    };
    search(0, m);
    if (found.empty()) {
      throw SolverError(SolverError::Kind::not_linear_kernel,
                        "order-" + std::to_string(m) +
                            " kernel ODE found numerically, but its "
                            "characteristic roots are not exponential rates "
                            "of the kernel");
    }

    KernelOde out;
    out.order = m;
    for (size_t c = 0; c < candidates.size(); ++c) {
      for (int k = 0; k < found[c]; ++k) out.rates.push_back(candidates[c]);
    }
    std::vector<SymPtr> p = poly_symbolic(out.rates);
    for (int i = 0; i < m; ++i) out.coefficients.push_back(-p[i]);
    std::map<std::string, SymPtr> zero{{time, sym_const(0.0)}};
    for (int i = 0; i < m; ++i) {
      out.initial_conditions.push_back(substitute(derivs[i], zero));
    }
    return out;
  }
  throw SolverError(SolverError::Kind::not_linear_kernel,
                    "kernel satisfies no linear constant-coefficient ODE of "
                    "order <= " + std::to_string(max_order));
}

}  // namespace nestml

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

#include "nestml/odesolver/linear_system.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "nestml/semantics/expr_typer.hpp"

namespace nestml {

int LinearSystem::index_of(const std::string& name) const {
  for (size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

using Kind = SolverError::Kind;

UnitType ms_unit() { return parse_unit("ms"); }

TypeSpec per_ms(const TypeSpec& t, int power) {
  return TypeSpec::of_unit(
      unit_divide(t.as_unit(), unit_power(ms_unit(), power)));
}

bool is_constant_expr(const SymPtr& e, const SolverContext& ctx,
                      std::string* offender) {
  if (contains_atom(e)) {
    if (offender != nullptr) *offender = "a function call";
    return false;
  }
  for (const auto& name : free_symbols(e)) {
    if (name != "E" && ctx.constants.count(name) == 0) {
      if (offender != nullptr) *offender = "'" + name + "'";
      return false;
    }
  }
  return true;
}

std::string binding_for(const ShapeEq& sh, const SolverContext& ctx) {
  if (!sh.buffer.empty()) return sh.buffer;
  if (ctx.spike_buffers.size() == 1) return ctx.spike_buffers.front();
  throw SolverError(Kind::ambiguous_binding,
                    "shape '" + sh.name + "' needs `on <buffer>`: the model "
                    "has " + std::to_string(ctx.spike_buffers.size()) +
                        " spike buffers",
                    sh.span);
}

// Coefficients of prod_i (D - roots_i), low to high.
std::vector<SymPtr> expand_roots(const std::vector<SymPtr>& roots) {
  std::vector<SymPtr> p{sym_const(1.0)};
  for (const auto& r : roots) {
    std::vector<SymPtr> q(p.size() + 1, sym_const(0.0));
    for (size_t i = 0; i < p.size(); ++i) {
      q[i + 1] = q[i + 1] + p[i];
      q[i] = q[i] - r * p[i];
    }
    p = std::move(q);
  }
  return p;
}

}  // namespace

LinearSystem build_kernel_chains(const OdeBlock& block,
                                 const SolverContext& ctx) {
  LinearSystem sys;
  struct Chain {
    size_t first;
    std::vector<SymPtr> rates;
  };
  std::vector<Chain> chains;
  for (const auto& sh : block.shapes) {
    std::string buffer = binding_for(sh, ctx);
    SymPtr kernel;
    try {
      kernel = from_expr(sh.kernel, ctx.types, ctx.aliases);
    } catch (const SymbolicError& e) {
      throw SolverError(Kind::not_linear_kernel,
                        "shape '" + sh.name + "': " + e.what(), sh.span);
    }
    for (const auto& name : free_symbols(kernel)) {
      if (name != ctx.time && name != "E" && ctx.constants.count(name) == 0) {
        throw SolverError(Kind::not_linear_kernel,
                          "shape '" + sh.name + "' depends on '" + name +
                              "', which is not a parameter or internal",
                          sh.span);
      }
    }
    KernelOde ode;
    try {
      ode = shape_to_ode(kernel, 5, ctx.time);
    } catch (const SolverError& e) {
      throw SolverError(e.kind(), "shape '" + sh.name + "': " + e.what(),
                        sh.span);
    } catch (const SymbolicError& e) {
      throw SolverError(Kind::not_linear_kernel,
                        "shape '" + sh.name + "': " + e.what(), sh.span);
    }
    TypeSpec ktype = TypeSpec::real();
    if (ctx.types != nullptr) {
      auto it = ctx.types->shape_types.find(&sh);
      if (it != ctx.types->shape_types.end() && it->second.is_numeric()) {
        ktype = it->second;
      }
    }
    const int m = ode.order;
    Chain chain{sys.slots.size(), ode.rates};
    for (int j = 0; j < m; ++j) {
      StateSlot s;
      s.role = StateSlot::Role::kernel;
      s.shape = sh.name;
      s.derivative = m - 1 - j;
      s.name = s.derivative == 0
                   ? sh.name
                   : sh.name + "__d" + std::to_string(s.derivative);
      s.type = per_ms(ktype, s.derivative);
      s.span = sh.span;
      sys.slots.push_back(s);
      // Slot j holds prod_{i>j} (D - rate_i) k; its value at 0 follows from
      // the derivatives of k at 0.
      std::vector<SymPtr> tail(ode.rates.begin() + j + 1, ode.rates.end());
      std::vector<SymPtr> poly = expand_roots(tail);
      SymPtr ic = sym_const(0.0);
      for (size_t r = 0; r < poly.size(); ++r) {
        ic = ic + poly[r] * ode.initial_conditions[r];
      }
      if (!is_zero(ic)) sys.inputs[buffer].push_back({chain.first + j, ic});
    }
    chains.push_back(std::move(chain));
    sys.kernels[sh.name] = std::move(ode);
  }
  const size_t n = sys.slots.size();
  sys.a.assign(n, std::vector<SymPtr>(n, sym_const(0.0)));
  for (const auto& c : chains) {
    for (size_t j = 0; j < c.rates.size(); ++j) {
      sys.a[c.first + j][c.first + j] = c.rates[j];
      if (j > 0) sys.a[c.first + j][c.first + j - 1] = sym_const(1.0);
    }
  }
  return sys;
}

LinearSystem build_linear_system(const OdeBlock& block,
                                 const SolverContext& ctx) {
  LinearSystem sys = build_kernel_chains(block, ctx);
  const size_t nk = sys.slots.size();
  const size_t ne = block.equations.size();

  std::vector<std::string> vars;
  for (const auto& s : sys.slots) {
    if (s.derivative == 0) vars.push_back(s.name);
  }
  for (const auto& eq : block.equations) vars.push_back(eq.state_var);

  struct Row {
    std::map<std::string, SymPtr> coeffs;
    SymPtr offset;
  };
  std::vector<Row> rows(ne);
  for (size_t e = 0; e < ne; ++e) {
    const DiffEq& eq = block.equations[e];
    auto fail = [&](const std::string& why) {
      return SolverError(Kind::not_linear_constant,
                         "d/dt " + eq.state_var + ": " + why, eq.rhs->span);
    };
    SymPtr rhs;
    try {
      rhs = from_expr(eq.rhs, ctx.types, ctx.aliases);
    } catch (const SymbolicError& err) {
      throw fail(err.what());
    }
    std::map<std::string, SymPtr> zero;
    for (const auto& v : vars) {
      SymPtr c;
      try {
        c = diff(rhs, v);
      } catch (const SymbolicError& err) {
        throw fail(err.what());
      }
      std::string offender;
      if (!is_constant_expr(c, ctx, &offender)) {
        throw fail("coefficient of " + v + " depends on " + offender);
      }
      if (!is_zero(c)) rows[e].coeffs[v] = c;
      zero[v] = sym_const(0.0);
    }
    rows[e].offset = substitute(rhs, zero);
    if (depends_on(rows[e].offset, ctx.time)) {
      throw fail("input depends on " + ctx.time);
    }
  }

  // Equations in dependency order (stable); cycles are not triangular.
  std::vector<size_t> order;
  std::vector<bool> placed(ne, false);
  while (order.size() < ne) {
    bool progress = false;
    for (size_t e = 0; e < ne; ++e) {
      if (placed[e]) continue;
      bool ready = true;
      for (size_t o = 0; o < ne; ++o) {
        if (o != e && !placed[o] &&
            rows[e].coeffs.count(block.equations[o].state_var) > 0) {
          ready = false;
        }
      }
      if (ready) {
        placed[e] = true;
        order.push_back(e);
        progress = true;
        break;
      }
    }
    if (!progress) {
      for (size_t e = 0; e < ne; ++e) {
        if (!placed[e]) {
          throw SolverError(Kind::not_linear_constant,
                            "equations for " + block.equations[e].state_var +
                                " and others are mutually coupled",
                            block.equations[e].span);
        }
      }
    }
  }

  for (size_t e : order) {
    const DiffEq& eq = block.equations[e];
    StateSlot s;
    s.name = eq.state_var;
    s.role = StateSlot::Role::equation;
    auto it = ctx.variable_types.find(eq.state_var);
    s.type = it != ctx.variable_types.end() ? it->second : TypeSpec::real();
    s.span = eq.span;
    sys.slots.push_back(s);
  }
  std::vector<std::pair<size_t, size_t>> drives;  // (equation slot, eq)
  for (size_t k = 0; k < ne; ++k) {
    size_t e = order[k];
    if (is_zero(rows[e].offset)) continue;
    const DiffEq& eq = block.equations[e];
    StateSlot s;
    s.name = eq.state_var + "__drive";
    s.role = StateSlot::Role::constant;
    s.type = per_ms(sys.slots[nk + k].type, 1);
    s.drive = rows[e].offset;
    s.span = eq.rhs->span;
    sys.slots.push_back(s);
    drives.push_back({nk + k, sys.slots.size() - 1});
  }

  const size_t n = sys.slots.size();
  std::vector<std::vector<SymPtr>> a(n, std::vector<SymPtr>(n, sym_const(0.0)));
  for (size_t i = 0; i < nk; ++i) {
    for (size_t j = 0; j < nk; ++j) a[i][j] = sys.a[i][j];
  }
  for (size_t k = 0; k < ne; ++k) {
    const Row& row = rows[order[k]];
    for (const auto& [v, c] : row.coeffs) {
      int col = sys.index_of(v);
      a[nk + k][col] = c;
    }
  }
  for (const auto& [eq_slot, const_slot] : drives) {
    a[eq_slot][const_slot] = sym_const(1.0);
  }
  sys.a = std::move(a);
  return sys;
}

namespace {

class PathExpm {
 public:
  PathExpm(const std::vector<std::vector<SymPtr>>& a, const std::string& h,
           const std::vector<SymPtr>* diagonal)
      : a_(a), h_(sym_symbol(h)), diagonal_(diagonal) {}

  SymPtr entry(size_t i, size_t j) {
    if (i == j) return value(i);
    SymPtr total = sym_const(0.0);
    std::vector<size_t> path{j};
    walk(i, path, sym_const(1.0), total);
    return total;
  }

 private:
  SymPtr lambda(size_t i) const { return a_[i][i]; }

  SymPtr value(size_t i) const {
    if (is_zero(lambda(i))) return sym_const(1.0);
    if (diagonal_ != nullptr) return (*diagonal_)[i];
    return sym_exp(lambda(i) * h_);
  }

  void walk(size_t target, std::vector<size_t>& path, const SymPtr& weight,
            SymPtr& total) {
    if (path.size() > a_.size()) {
      throw SolverError(Kind::symbolic_failure,
                        "coupling between slots is cyclic");
    }
    size_t cur = path.back();
    for (size_t next = 0; next < a_.size(); ++next) {
      if (next == cur || is_zero(a_[next][cur])) continue;
      SymPtr w = weight * a_[next][cur];
      path.push_back(next);
      if (next == target) {
        total = total + w * divided_difference(path);
      } else {
        walk(target, path, w, total);
      }
      path.pop_back();
    }
  }

  // Divided difference of x -> exp(x h) over the diagonal of `nodes`.
  SymPtr divided_difference(std::vector<size_t> nodes) {
    std::string memo_key;
    for (size_t n : nodes) memo_key += std::to_string(n) + ",";
    auto it = memo_.find(memo_key);
    if (it != memo_.end()) return it->second;

    SymPtr out;
    auto same = [&](size_t x, size_t y) {
      return sym_equal(lambda(x), lambda(y));
    };
    bool all_equal = true;
    for (size_t n : nodes) all_equal = all_equal && same(n, nodes.front());
    if (all_equal) {
      // Confluent limit: h^p / p! * exp(lambda h).
      const int p = static_cast<int>(nodes.size()) - 1;
      double fact = 1.0;
      for (int k = 2; k <= p; ++k) fact *= k;
      out = sym_pow(h_, sym_const(p)) / sym_const(fact) * value(nodes.front());
    } else {
      if (same(nodes.front(), nodes.back())) {
        std::stable_sort(nodes.begin(), nodes.end(), [&](size_t x, size_t y) {
          return lambda(x)->key < lambda(y)->key;
        });
      }
      size_t first = nodes.front();
      size_t last = nodes.back();
      SymPtr gap = lambda(last) - lambda(first);
      check_separated(gap, first, last);
      std::vector<size_t> head(nodes.begin(), nodes.end() - 1);
      std::vector<size_t> tail(nodes.begin() + 1, nodes.end());
      out = (divided_difference(tail) - divided_difference(head)) / gap;
    }
    memo_[memo_key] = out;
    return out;
  }

  void check_separated(const SymPtr& gap, size_t x, size_t y) {
    std::mt19937 rng(20261016);
    std::uniform_real_distribution<double> dist(0.5, 2.5);
    std::set<std::string> names = free_symbols(gap);
    for (const auto& n : free_symbols(lambda(x))) names.insert(n);
    for (const auto& n : free_symbols(lambda(y))) names.insert(n);
    for (int draw = 0; draw < 3; ++draw) {
      std::map<std::string, double> env;
      for (const auto& n : names) env[n] = dist(rng);
      double g = evaluate(gap, env);
      double scale = std::fabs(evaluate(lambda(x), env)) +
                     std::fabs(evaluate(lambda(y), env));
      if (std::fabs(g) > 1e-9 * scale) return;
    }
    throw SolverError(Kind::symbolic_failure,
                      "cannot decide whether " + to_string(lambda(x)) +
                          " and " + to_string(lambda(y)) + " coincide");
  }

  const std::vector<std::vector<SymPtr>>& a_;
  SymPtr h_;
  const std::vector<SymPtr>* diagonal_;
  std::map<std::string, SymPtr> memo_;
};

}  // namespace

PropagatorMatrix symbolic_expm_triangular(
    const std::vector<std::vector<SymPtr>>& a, const std::string& h,
    const std::vector<SymPtr>* diagonal) {
  PropagatorMatrix p;
  p.h = h;
  const size_t n = a.size();
  PathExpm expm(a, h, diagonal);
  p.entries.assign(n, std::vector<SymPtr>(n, sym_const(0.0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) p.entries[i][j] = expm.entry(i, j);
  }
  return p;
}

}  // namespace nestml

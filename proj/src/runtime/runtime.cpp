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

#include <cmath>
#include <cstdio>
#include <set>

#include "json.hpp"
#include "nestml/syntax/pretty_printer.hpp"

namespace nestml {

void RingBuffer::add(size_t delay, double value) {
  if (delay >= slots_.size()) {
    throw RuntimeError(RuntimeError::Kind::invalid_input,
                       "event delay exceeds the ring buffer");
  }
  slots_[(read_ + delay) % slots_.size()] += value;
}

double RingBuffer::get(size_t delay) const {
  if (delay >= slots_.size()) return 0.0;
  return slots_[(read_ + delay) % slots_.size()];
}

void RingBuffer::advance() {
  slots_[read_] = 0.0;
  read_ = (read_ + 1) % slots_.size();
}

long snap_to_step(double time_ms, double resolution_ms) {
  return static_cast<long>(std::floor(time_ms / resolution_ms + 0.5));
}

namespace {

using Kind = RuntimeError::Kind;

struct Node {
  enum class Op {
    constant, text, local, var, alias, add, sub, mul, div, pow, neg, not_,
    lt, le, eq, ne, ge, gt, and_, or_, exp, ln, min, max, resolution, steps,
    emit_spike, log_info, get_sum, call
  };

  Op op = Op::constant;
  double value = 0.0;
  int index = -1;  // local, slot, alias, buffer or function
  double factor = 1.0;
  std::string text;
  SourceSpan span;
  std::vector<Node> kids;
};

struct CStmt {
  enum class Kind { assign_var, assign_local, eval, if_chain, ret, local };

  Kind kind = Kind::eval;
  AssignOp op = AssignOp::set;
  int index = -1;
  Node value;
  bool has_value = false;
  // if_chain: conditions[i] guards bodies[i]; an else body comes last.
  std::vector<Node> conditions;
  std::vector<std::vector<CStmt>> bodies;
  SourceSpan span;
};

struct Function {
  std::string name;
  int n_locals = 0;
  std::vector<int> params;
  std::vector<CStmt> body;
  SourceSpan span;
};

struct Unit {
  const ModelScope* scope = nullptr;
  std::string prefix;  // "" or "alias."
  std::map<std::string, int> slots;
  std::map<std::string, int> aliases;
  std::map<std::string, int> functions;
  std::map<std::string, int> components;  // neuron only
};

struct BufferInfo {
  std::string name;
  BufferKind kind = BufferKind::spike;
  bool excitatory = false;
  bool inhibitory = false;
  RingBuffer ring;
};

struct Guard {
  std::string name;
  int slot = -1;
  Node check;
  std::string text;
  SourceSpan span;
};

}  // namespace

struct NeuronInstance::Impl {
  const ModelScope* model = nullptr;
  const TypeInfo* types = nullptr;
  SimulationConfig config;

  std::vector<double> vars;
  std::vector<std::string> var_names;
  std::vector<Unit> units;
  std::vector<Node> alias_exprs;
  std::vector<int> alias_state;  // 0 pending, 1 compiling, 2 done
  std::vector<std::pair<int, const Declaration*>> alias_decls;
  std::vector<Function> functions;
  std::vector<const FunctionDecl*> function_decls;
  std::vector<int> function_units;
  std::vector<BufferInfo> buffers;
  std::map<std::string, int> buffer_index;
  std::vector<Guard> parameter_guards;
  std::vector<Guard> state_guards;
  int dynamics = -1;

  std::vector<long> emitted;
  std::vector<std::string> log;
  long current_step = 0;
  int depth = 0;

  // ---- compilation ----

  struct Scope {
    int unit = 0;
    std::map<std::string, int> locals;
    int* n_locals = nullptr;
  };

  [[noreturn]] static void fail(Kind kind, const std::string& message,
                                const SourceSpan& span = {}) {
    throw RuntimeError(kind, message, span);
  }

  int add_unit(const ModelScope* scope, const std::string& prefix) {
    Unit u;
    u.scope = scope;
    u.prefix = prefix;
    auto slots = [&](const std::optional<std::vector<Declaration>>& b) {
      if (!b) return;
      for (const auto& d : *b) {
        for (const auto& n : d.names) {
          if (d.is_alias) {
            u.aliases[n] = static_cast<int>(alias_decls.size());
            alias_decls.emplace_back(static_cast<int>(units.size()), &d);
            alias_exprs.emplace_back();
            alias_state.push_back(0);
            continue;
          }
          u.slots[n] = static_cast<int>(vars.size());
          vars.push_back(0.0);
          var_names.push_back(prefix + n);
        }
      }
    };
    slots(scope->decl->parameter);
    slots(scope->decl->internal);
    slots(scope->decl->state);
    for (const auto& f : scope->decl->functions) {
      u.functions[f.name] = static_cast<int>(functions.size());
      functions.emplace_back();
      function_decls.push_back(&f);
      function_units.push_back(static_cast<int>(units.size()));
    }
    units.push_back(std::move(u));
    return static_cast<int>(units.size()) - 1;
  }

  Node compile(const ExprPtr& e, Scope& sc) {
    Node n = compile_raw(*e, sc);
    n.span = e->span;
    n.factor = types->conversion_factor(e.get());
    return n;
  }

  std::vector<Node> compile_args(const Expr& e, Scope& sc) {
    std::vector<Node> out;
    for (const auto& a : e.args) out.push_back(compile(a, sc));
    return out;
  }

  Node compile_alias(int id) {
    if (alias_state[id] == 2) return alias_exprs[id];
    if (alias_state[id] == 1) fail(Kind::evaluation, "alias defined in terms of itself");
    alias_state[id] = 1;
    Scope sc;
    sc.unit = alias_decls[id].first;
    int none = 0;
    sc.n_locals = &none;
    alias_exprs[id] = compile(alias_decls[id].second->init, sc);
    alias_state[id] = 2;
    return alias_exprs[id];
  }

  Node compile_var(const Expr& e, Scope& sc) {
    Node n;
    const Unit* u = &units[sc.unit];
    if (!e.qualifier.empty()) {
      auto c = units[0].components.find(e.qualifier);
      if (c == units[0].components.end()) {
        fail(Kind::evaluation, "unknown component '" + e.qualifier + "'", e.span);
      }
      u = &units[c->second];
    } else {
      auto l = sc.locals.find(e.name);
      if (l != sc.locals.end()) {
        n.op = Node::Op::local;
        n.index = l->second;
        return n;
      }
    }
    auto s = u->slots.find(e.name);
    if (s != u->slots.end()) {
      n.op = Node::Op::var;
      n.index = s->second;
      return n;
    }
    auto a = u->aliases.find(e.name);
    if (a != u->aliases.end()) {
      n.op = Node::Op::alias;
      n.index = a->second;
      compile_alias(a->second);
      return n;
    }
    if (e.qualifier.empty() && e.name == "E") {
      n.value = std::exp(1.0);
      return n;
    }
    fail(Kind::evaluation, "unknown variable '" + e.qualified_name() + "'", e.span);
  }

  Node compile_call(const Expr& e, Scope& sc) {
    Node n;
    n.kids = compile_args(e, sc);
    if (!e.qualifier.empty()) {
      auto b = buffer_index.find(e.qualifier);
      if (b != buffer_index.end() && e.name == "getSum") {
        n.op = Node::Op::get_sum;
        n.index = b->second;
        return n;
      }
      auto c = units[0].components.find(e.qualifier);
      if (c != units[0].components.end()) {
        auto f = units[c->second].functions.find(e.name);
        if (f != units[c->second].functions.end()) {
          n.op = Node::Op::call;
          n.index = f->second;
          return n;
        }
      }
      fail(Kind::evaluation, "unknown function '" + e.qualified_name() + "'", e.span);
    }
    auto f = units[sc.unit].functions.find(e.name);
    if (f != units[sc.unit].functions.end()) {
      n.op = Node::Op::call;
      n.index = f->second;
      return n;
    }
    static const std::map<std::string, Node::Op> builtins = {
        {"exp", Node::Op::exp},
        {"ln", Node::Op::ln},
        {"min", Node::Op::min},
        {"max", Node::Op::max},
        {"resolution", Node::Op::resolution},
        {"steps", Node::Op::steps},
        {"emitSpike", Node::Op::emit_spike},
        {"log_info", Node::Op::log_info}};
    auto b = builtins.find(e.name);
    if (b == builtins.end()) {
      fail(Kind::evaluation, "unknown function '" + e.name + "'", e.span);
    }
    n.op = b->second;
    return n;
  }

  Node compile_raw(const Expr& e, Scope& sc) {
    Node n;
    switch (e.kind) {
      case Expr::Kind::number:
        n.value = e.value;
        return n;
      case Expr::Kind::string:
        n.op = Node::Op::text;
        n.text = e.text;
        return n;
      case Expr::Kind::boolean:
        n.value = e.bool_value ? 1.0 : 0.0;
        return n;
      case Expr::Kind::var:
        return compile_var(e, sc);
      case Expr::Kind::call:
        return compile_call(e, sc);
      case Expr::Kind::paren:
        return compile(e.lhs, sc);
      case Expr::Kind::unary:
        n.op = e.unary_op == UnaryOp::neg ? Node::Op::neg : Node::Op::not_;
        n.kids.push_back(compile(e.lhs, sc));
        return n;
      case Expr::Kind::binary: {
        static const std::map<BinaryOp, Node::Op> ops = {
            {BinaryOp::add, Node::Op::add}, {BinaryOp::sub, Node::Op::sub},
            {BinaryOp::mul, Node::Op::mul}, {BinaryOp::div, Node::Op::div},
            {BinaryOp::pow, Node::Op::pow}, {BinaryOp::lt, Node::Op::lt},
            {BinaryOp::le, Node::Op::le},   {BinaryOp::eq, Node::Op::eq},
            {BinaryOp::ne, Node::Op::ne},   {BinaryOp::ge, Node::Op::ge},
            {BinaryOp::gt, Node::Op::gt},   {BinaryOp::and_, Node::Op::and_},
            {BinaryOp::or_, Node::Op::or_}};
        n.op = ops.at(e.binary_op);
        n.kids.push_back(compile(e.lhs, sc));
        n.kids.push_back(compile(e.rhs, sc));
        return n;
      }
    }
    fail(Kind::evaluation, "unknown expression", e.span);
  }

  std::vector<CStmt> compile_block(const Block& block, Scope sc) {
    std::vector<CStmt> out;
    for (const auto& s : block) out.push_back(compile_stmt(*s, sc));
    return out;
  }

  CStmt compile_stmt(const Stmt& s, Scope& sc) {
    CStmt c;
    c.span = s.span;
    switch (s.kind) {
      case Stmt::Kind::assign: {
        const Expr& t = *s.target;
        c.op = s.assign_op;
        c.value = compile(s.value, sc);
        c.has_value = true;
        Node target = compile_var(t, sc);
        if (target.op == Node::Op::local) {
          c.kind = CStmt::Kind::assign_local;
          c.index = target.index;
        } else if (target.op == Node::Op::var) {
          c.kind = CStmt::Kind::assign_var;
          c.index = target.index;
        } else if (target.op == Node::Op::alias) {
          // Alias writes go through the setter.
          const Unit& u = units[alias_decls[target.index].first];
          auto f = u.functions.find("set_" + t.name);
          if (f == u.functions.end()) {
            fail(Kind::evaluation, "alias '" + t.name + "' has no setter", s.span);
          }
          Node arg = c.value;
          if (s.assign_op != AssignOp::set) {
            static const std::map<AssignOp, Node::Op> ops = {
                {AssignOp::add, Node::Op::add},
                {AssignOp::sub, Node::Op::sub},
                {AssignOp::mul, Node::Op::mul},
                {AssignOp::div, Node::Op::div}};
            Node combined;
            combined.op = ops.at(s.assign_op);
            combined.span = s.span;
            combined.kids = {target, arg};
            arg = combined;
          }
          Node call;
          call.op = Node::Op::call;
          call.index = f->second;
          call.span = s.span;
          call.kids = {arg};
          c.kind = CStmt::Kind::eval;
          c.value = call;
        } else {
          fail(Kind::evaluation, "cannot assign '" + t.qualified_name() + "'", s.span);
        }
        return c;
      }
      case Stmt::Kind::if_chain:
        c.kind = CStmt::Kind::if_chain;
        for (const auto& b : s.branches) {
          c.conditions.push_back(compile(b.cond, sc));
          c.bodies.push_back(compile_block(b.body, sc));
        }
        if (s.has_else) c.bodies.push_back(compile_block(s.else_body, sc));
        return c;
      case Stmt::Kind::call:
        c.kind = CStmt::Kind::eval;
        c.value = compile(s.value, sc);
        return c;
      case Stmt::Kind::return_:
        c.kind = CStmt::Kind::ret;
        if (s.value) {
          c.value = compile(s.value, sc);
          c.has_value = true;
        }
        return c;
      case Stmt::Kind::local: {
        // One statement per name; all share the initializer.
        c.kind = CStmt::Kind::if_chain;
        c.conditions.clear();
        std::vector<CStmt> decls;
        for (const auto& name : s.decl.names) {
          CStmt d;
          d.kind = CStmt::Kind::local;
          d.span = s.span;
          if (s.decl.init) {
            d.value = compile(s.decl.init, sc);
            d.has_value = true;
          }
          d.index = (*sc.n_locals)++;
          sc.locals[name] = d.index;
          decls.push_back(std::move(d));
        }
        if (decls.size() == 1) return decls[0];
        c.bodies.push_back(std::move(decls));
        return c;
      }
      case Stmt::Kind::ode:
        fail(Kind::unsupported,
             "ODE blocks must be transformed before simulation", s.span);
    }
    return c;
  }

  void compile_function(int id) {
    const FunctionDecl& f = *function_decls[id];
    Function out;
    out.name = f.name;
    out.span = f.span;
    Scope sc;
    sc.unit = function_units[id];
    sc.n_locals = &out.n_locals;
    for (const auto& p : f.params) {
      int idx = out.n_locals++;
      sc.locals[p.name] = idx;
      out.params.push_back(idx);
    }
    out.body = compile_block(f.body, sc);
    functions[id] = std::move(out);
  }

  void compile_guards(int unit) {
    const Unit& u = units[unit];
    auto add = [&](const std::optional<std::vector<Declaration>>& b,
                   std::vector<Guard>& into) {
      if (!b) return;
      for (const auto& d : *b) {
        if (!d.guard) continue;
        Scope sc;
        sc.unit = unit;
        int none = 0;
        sc.n_locals = &none;
        Guard g;
        g.name = u.prefix + d.names.front();
        auto slot = u.slots.find(d.names.front());
        g.slot = slot != u.slots.end() ? slot->second : -1;
        g.check = compile(d.guard, sc);
        g.text = pretty_print(d.guard);
        g.span = d.guard->span;
        into.push_back(std::move(g));
      }
    };
    add(u.scope->decl->parameter, parameter_guards);
    add(u.scope->decl->state, state_guards);
  }

  // ---- evaluation ----

  struct Frame {
    double* locals = nullptr;
  };

  double call(int id, const std::vector<Node>& args, Frame& caller,
              const SourceSpan& span) {
    const Function& f = functions[id];
    if (f.params.size() != args.size()) {
      fail(Kind::evaluation, "wrong argument count for " + f.name, span);
    }
    if (++depth > 256) fail(Kind::evaluation, "call depth exceeded in " + f.name, span);
    std::vector<double> locals(static_cast<size_t>(std::max(1, f.n_locals)), 0.0);
    for (size_t i = 0; i < args.size(); ++i) {
      locals[f.params[i]] = eval(args[i], caller);
    }
    Frame frame{locals.data()};
    double result = 0.0;
    exec(f.body, frame, &result);
    --depth;
    return result;
  }

  double eval(const Node& n, Frame& fr) {
    double v = eval_raw(n, fr);
    return n.factor == 1.0 ? v : v * n.factor;
  }

  static bool truthy(double v) { return v != 0.0; }

  double eval_raw(const Node& n, Frame& fr) {
    using Op = Node::Op;
    switch (n.op) {
      case Op::constant: return n.value;
      case Op::text: return 0.0;
      case Op::local: return fr.locals[n.index];
      case Op::var: return vars[n.index];
      case Op::alias: {
        Frame none;
        return eval(alias_exprs[n.index], none);
      }
      case Op::add: return eval(n.kids[0], fr) + eval(n.kids[1], fr);
      case Op::sub: return eval(n.kids[0], fr) - eval(n.kids[1], fr);
      case Op::mul: return eval(n.kids[0], fr) * eval(n.kids[1], fr);
      case Op::div: {
        double l = eval(n.kids[0], fr);
        double r = eval(n.kids[1], fr);
        if (r == 0.0) fail(Kind::evaluation, "division by zero", n.span);
        return l / r;
      }
      case Op::pow: {
        double v = std::pow(eval(n.kids[0], fr), eval(n.kids[1], fr));
        if (std::isnan(v)) fail(Kind::evaluation, "power outside its domain", n.span);
        return v;
      }
      case Op::neg: return -eval(n.kids[0], fr);
      case Op::not_: return truthy(eval(n.kids[0], fr)) ? 0.0 : 1.0;
      case Op::lt: return eval(n.kids[0], fr) < eval(n.kids[1], fr);
      case Op::le: return eval(n.kids[0], fr) <= eval(n.kids[1], fr);
      case Op::eq: return eval(n.kids[0], fr) == eval(n.kids[1], fr);
      case Op::ne: return eval(n.kids[0], fr) != eval(n.kids[1], fr);
      case Op::ge: return eval(n.kids[0], fr) >= eval(n.kids[1], fr);
      case Op::gt: return eval(n.kids[0], fr) > eval(n.kids[1], fr);
      case Op::and_:
        return truthy(eval(n.kids[0], fr)) && truthy(eval(n.kids[1], fr));
      case Op::or_:
        return truthy(eval(n.kids[0], fr)) || truthy(eval(n.kids[1], fr));
      case Op::exp: return std::exp(eval(n.kids[0], fr));
      case Op::ln: {
        double x = eval(n.kids[0], fr);
        if (x <= 0.0) fail(Kind::evaluation, "ln of a non-positive value", n.span);
        return std::log(x);
      }
      case Op::min: return std::min(eval(n.kids[0], fr), eval(n.kids[1], fr));
      case Op::max: return std::max(eval(n.kids[0], fr), eval(n.kids[1], fr));
      case Op::resolution: return config.resolution_ms;
      case Op::steps:
        return static_cast<double>(
            snap_to_step(eval(n.kids[0], fr), config.resolution_ms));
      case Op::emit_spike:
        if (emitted.empty() || emitted.back() != current_step) {
          emitted.push_back(current_step);
        }
        return 0.0;
      case Op::log_info:
        log.push_back(n.kids[0].op == Op::text ? n.kids[0].text : "");
        return 0.0;
      case Op::get_sum: {
        double t = eval(n.kids[0], fr);
        long step = snap_to_step(t, config.resolution_ms);
        long ahead = step - current_step;
        return ahead < 0 ? 0.0 : buffers[n.index].ring.get(static_cast<size_t>(ahead));
      }
      case Op::call: return call(n.index, n.kids, fr, n.span);
    }
    return 0.0;
  }

  static double apply(AssignOp op, double old, double v) {
    switch (op) {
      case AssignOp::set: return v;
      case AssignOp::add: return old + v;
      case AssignOp::sub: return old - v;
      case AssignOp::mul: return old * v;
      case AssignOp::div:
        return old / v;
    }
    return v;
  }

  // True when a return statement ran.
  bool exec(const std::vector<CStmt>& body, Frame& fr, double* result) {
    for (const auto& s : body) {
      switch (s.kind) {
        case CStmt::Kind::assign_var: {
          double v = eval(s.value, fr);
          if (s.op == AssignOp::div && v == 0.0) {
            fail(Kind::evaluation, "division by zero", s.span);
          }
          vars[s.index] = apply(s.op, vars[s.index], v);
          break;
        }
        case CStmt::Kind::assign_local: {
          double v = eval(s.value, fr);
          if (s.op == AssignOp::div && v == 0.0) {
            fail(Kind::evaluation, "division by zero", s.span);
          }
          fr.locals[s.index] = apply(s.op, fr.locals[s.index], v);
          break;
        }
        case CStmt::Kind::local:
          fr.locals[s.index] = s.has_value ? eval(s.value, fr) : 0.0;
          break;
        case CStmt::Kind::eval:
          eval(s.value, fr);
          break;
        case CStmt::Kind::ret:
          if (s.has_value) *result = eval(s.value, fr);
          return true;
        case CStmt::Kind::if_chain: {
          size_t i = 0;
          for (; i < s.conditions.size(); ++i) {
            if (truthy(eval(s.conditions[i], fr))) break;
          }
          if (i < s.bodies.size() && exec(s.bodies[i], fr, result)) return true;
          break;
        }
      }
    }
    return false;
  }

  void check(const std::vector<Guard>& guards) {
    Frame none;
    for (const auto& g : guards) {
      if (truthy(eval(g.check, none))) continue;
      std::string value = g.slot >= 0 ? format_number(vars[g.slot]) : "?";
      fail(Kind::guard_violation,
           "guard [" + g.text + "] violated: " + g.name + " = " + value, g.span);
    }
  }

  // ---- setup ----

  void initialize_block(int unit, const std::optional<std::vector<Declaration>>& b,
                        bool overridable, std::set<std::string>& used) {
    if (!b) return;
    const Unit& u = units[unit];
    for (const auto& d : *b) {
      if (d.is_alias) continue;
      double init = 0.0;
      if (d.init) {
        Scope sc;
        sc.unit = unit;
        int none = 0;
        sc.n_locals = &none;
        Node n = compile(d.init, sc);
        Frame fr;
        init = eval(n, fr);
      }
      for (const auto& name : d.names) {
        double v = init;
        if (overridable) {
          auto o = config.overrides.find(u.prefix + name);
          if (o != config.overrides.end()) {
            v = o->second;
            used.insert(o->first);
          }
        }
        vars[u.slots.at(name)] = v;
      }
    }
  }

  void setup(const ModelScope& m) {
    if (m.decl->is_component) {
      fail(Kind::invalid_input, "'" + m.decl->name + "' is a component, not a neuron");
    }
    add_unit(&m, "");
    for (const auto& use : m.decl->uses) {
      std::string alias = use.alias.empty() ? use.component : use.alias;
      auto it = m.components.find(alias);
      if (it == m.components.end()) continue;
      int id = add_unit(it->second, alias + ".");
      units[0].components[alias] = id;
    }
    if (m.decl->input) {
      for (const auto& in : *m.decl->input) {
        BufferInfo b;
        b.name = in.buffer;
        b.kind = in.kind;
        b.excitatory = in.excitatory;
        b.inhibitory = in.inhibitory;
        buffer_index[in.buffer] = static_cast<int>(buffers.size());
        buffers.push_back(std::move(b));
      }
    }
    for (size_t i = 0; i < alias_decls.size(); ++i) compile_alias(static_cast<int>(i));
    for (size_t i = 0; i < functions.size(); ++i) compile_function(static_cast<int>(i));
    for (const auto& d : m.decl->dynamics) {
      if (d.kind == DynamicsKind::min_delay) {
        fail(Kind::unsupported,
             "min_delay dynamics are not supported by the reference runtime",
             d.span);
      }
      Function f;
      f.name = "dynamics";
      Scope sc;
      sc.n_locals = &f.n_locals;
      for (const auto& p : d.params) {
        int idx = f.n_locals++;
        sc.locals[p.name] = idx;
        f.params.push_back(idx);
      }
      f.body = compile_block(d.body, sc);
      dynamics = static_cast<int>(functions.size());
      functions.push_back(std::move(f));
    }
    for (size_t u = 0; u < units.size(); ++u) compile_guards(static_cast<int>(u));

    // Components first so the neuron's initializers can read them.
    std::set<std::string> used;
    std::vector<int> order;
    for (size_t u = 1; u < units.size(); ++u) order.push_back(static_cast<int>(u));
    order.push_back(0);
    for (int u : order) {
      const ModelDecl& d = *units[u].scope->decl;
      initialize_block(u, d.parameter, true, used);
    }
    for (const auto& [name, value] : config.overrides) {
      if (used.count(name) == 0) {
        fail(Kind::invalid_input, "override '" + name + "' is not a parameter");
      }
    }
    check(parameter_guards);
    for (int u : order) initialize_block(u, units[u].scope->decl->internal, false, used);
    for (int u : order) initialize_block(u, units[u].scope->decl->state, false, used);
    if (config.guard_checks) check(state_guards);
  }

  bool lookup(const std::string& name, int* slot, int* alias) const {
    const Unit* u = &units[0];
    std::string local = name;
    size_t dot = name.find('.');
    if (dot != std::string::npos) {
      auto c = units[0].components.find(name.substr(0, dot));
      if (c == units[0].components.end()) return false;
      u = &units[c->second];
      local = name.substr(dot + 1);
    }
    auto s = u->slots.find(local);
    if (s != u->slots.end()) {
      *slot = s->second;
      return true;
    }
    auto a = u->aliases.find(local);
    if (a != u->aliases.end()) {
      *alias = a->second;
      return true;
    }
    return false;
  }
};

NeuronInstance::NeuronInstance(const ModelScope& model, const TypeInfo& types,
                               const SimulationConfig& config)
    : impl_(std::make_unique<Impl>()) {
  if (!(config.resolution_ms > 0.0)) {
    throw RuntimeError(Kind::invalid_input, "resolution must be positive");
  }
  impl_->model = &model;
  impl_->types = &types;
  impl_->config = config;
  impl_->setup(model);
}

NeuronInstance::~NeuronInstance() = default;
NeuronInstance::NeuronInstance(NeuronInstance&&) noexcept = default;
NeuronInstance& NeuronInstance::operator=(NeuronInstance&&) noexcept = default;

void NeuronInstance::step(long step_index) {
  Impl& m = *impl_;
  m.current_step = step_index;
  if (m.dynamics >= 0) {
    const Function& f = m.functions[m.dynamics];
    std::vector<double> locals(static_cast<size_t>(std::max(1, f.n_locals)), 0.0);
    for (int p : f.params) {
      locals[p] = static_cast<double>(step_index) * m.config.resolution_ms;
    }
    Impl::Frame fr{locals.data()};
    double ignored = 0.0;
    m.exec(f.body, fr, &ignored);
  }
  for (auto& b : m.buffers) b.ring.advance();
  if (m.config.guard_checks) m.check(m.state_guards);
}

void NeuronInstance::deliver(const std::string& buffer, double value,
                             size_t delay) {
  auto it = impl_->buffer_index.find(buffer);
  if (it == impl_->buffer_index.end()) {
    throw RuntimeError(Kind::invalid_input, "unknown buffer '" + buffer + "'");
  }
  BufferInfo& b = impl_->buffers[it->second];
  if (b.kind == BufferKind::spike && b.excitatory != b.inhibitory) {
    if (b.excitatory && !(value > 0.0)) return;
    if (b.inhibitory && !(value < 0.0)) return;
  }
  b.ring.add(delay, value);
}

double NeuronInstance::value(const std::string& name) const {
  int slot = -1;
  int alias = -1;
  if (!impl_->lookup(name, &slot, &alias)) {
    throw RuntimeError(Kind::invalid_input, "unknown variable '" + name + "'");
  }
  if (slot >= 0) return impl_->vars[slot];
  Impl::Frame none;
  return impl_->eval(impl_->alias_exprs[alias], none);
}

void NeuronInstance::set_state(const std::string& name, double value) {
  int slot = -1;
  int alias = -1;
  if (!impl_->lookup(name, &slot, &alias) || slot < 0) {
    throw RuntimeError(Kind::invalid_input, "cannot set '" + name + "'");
  }
  impl_->vars[slot] = value;
}

bool NeuronInstance::has_variable(const std::string& name) const {
  int slot = -1;
  int alias = -1;
  return impl_->lookup(name, &slot, &alias);
}

const std::vector<long>& NeuronInstance::emitted_spikes() const {
  return impl_->emitted;
}

const std::vector<std::string>& NeuronInstance::log() const {
  return impl_->log;
}

NeuronInstance instantiate(const ModelScope& model, const TypeInfo& types,
                           const SimulationConfig& config) {
  return NeuronInstance(model, types, config);
}

namespace {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_time(double t) {
  return format_number(std::round(t * 1e9) / 1e9);
}

bool off_grid(double time, long step, double h) {
  return std::abs(time - static_cast<double>(step) * h) > 1e-9 * std::max(1.0, time);
}

}  // namespace

Trace run(const ModelScope& model, const TypeInfo& types,
          const SimulationConfig& config, const StimulusProgram& stimulus,
          const std::vector<std::string>& probes) {
  if (!(config.duration_ms > 0.0) || !(config.resolution_ms > 0.0)) {
    throw RuntimeError(Kind::invalid_input,
                       "duration and resolution must be positive");
  }
  if (config.sample_every < 1) {
    throw RuntimeError(Kind::invalid_input, "sample interval must be positive");
  }
  const double h = config.resolution_ms;
  NeuronInstance inst = instantiate(model, types, config);
  for (const auto& p : probes) {
    if (!inst.has_variable(p)) {
      throw RuntimeError(Kind::invalid_input, "unknown probe '" + p + "'");
    }
  }
  const long steps = static_cast<long>(std::floor(config.duration_ms / h + 1e-9));

  Trace trace;
  trace.sample_every = config.sample_every;
  trace.resolution_ms = h;
  trace.columns = probes;

  std::map<long, std::vector<std::pair<std::string, double>>> schedule;
  auto schedule_at = [&](long step, const std::string& buffer, double value) {
    if (step >= 0 && step < steps) schedule[step].emplace_back(buffer, value);
  };
  auto check_time = [&](double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw RuntimeError(Kind::invalid_input, "stimulus time must be >= 0");
    }
  };
  auto check_buffer = [&](const std::string& name, BufferKind kind) {
    bool found = false;
    if (model.decl->input) {
      for (const auto& in : *model.decl->input) {
        if (in.buffer == name && in.kind == kind) found = true;
      }
    }
    if (!found) {
      throw RuntimeError(Kind::invalid_input,
                         std::string("no ") +
                             (kind == BufferKind::spike ? "spike" : "current") +
                             " buffer '" + name + "'");
    }
  };
  for (const auto& s : stimulus.spikes) {
    check_time(s.time_ms);
    check_buffer(s.buffer, BufferKind::spike);
    long step = snap_to_step(s.time_ms, h);
    if (off_grid(s.time_ms, step, h)) {
      trace.notes.push_back("spike at " + format_number(s.time_ms) +
                            " ms snapped to " + format_time(step * h) + " ms");
    }
    schedule_at(step, s.buffer, s.weight);
  }
  for (const auto& c : stimulus.currents) {
    check_time(c.from_ms);
    check_buffer(c.buffer, BufferKind::current);
    long from = snap_to_step(c.from_ms, h);
    long to = from + 1;
    if (c.range) {
      check_time(c.to_ms);
      to = snap_to_step(c.to_ms, h);
      if (off_grid(c.to_ms, to, h)) {
        trace.notes.push_back("current end " + format_number(c.to_ms) +
                              " ms snapped to " + format_time(to * h) + " ms");
      }
    }
    if (off_grid(c.from_ms, from, h)) {
      trace.notes.push_back("current start " + format_number(c.from_ms) +
                            " ms snapped to " + format_time(from * h) + " ms");
    }
    for (long n = from; n < std::min(to, steps); ++n) {
      schedule_at(n, c.buffer, c.amplitude);
    }
  }

  auto sample = [&](long done) {
    trace.times_ms.push_back(static_cast<double>(done) * h);
    std::vector<double> row;
    row.reserve(probes.size());
    for (const auto& p : probes) row.push_back(inst.value(p));
    trace.rows.push_back(std::move(row));
  };
  sample(0);
  for (long n = 0; n < steps; ++n) {
    auto it = schedule.find(n);
    if (it != schedule.end()) {
      for (const auto& [buffer, value] : it->second) inst.deliver(buffer, value);
    }
    inst.step(n);
    if ((n + 1) % config.sample_every == 0) sample(n + 1);
  }
  for (long s : inst.emitted_spikes()) {
    trace.spike_times_ms.push_back(static_cast<double>(s + 1) * h);
  }
  for (const auto& l : inst.log()) trace.notes.push_back("log_info: " + l);
  return trace;
}

std::vector<double> Trace::column(const std::string& name) const {
  for (size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
  }
  throw std::out_of_range("no trace column '" + name + "'");
}

std::string Trace::to_csv() const {
  std::string out = "time_ms";
  for (const auto& c : columns) out += "," + c;
  out += "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    out += format_time(times_ms[i]);
    for (double v : rows[i]) out += "," + format17(v);
    out += "\n";
  }
  return out;
}

std::string Trace::spikes_csv() const {
  std::string out = "spike_time_ms\n";
  for (double t : spike_times_ms) out += format_time(t) + "\n";
  return out;
}

StimulusProgram StimulusProgram::from_json(const std::string& text) {
  using nlohmann::json;
  auto bad = [](const std::string& what) {
    return RuntimeError(Kind::invalid_input, "stimulus: " + what);
  };
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw bad(e.what());
  }
  StimulusProgram out;
  if (!doc.is_object() || !doc.contains("events") || !doc["events"].is_array()) {
    throw bad("expected an object with an \"events\" array");
  }
  auto number = [&](const json& ev, const char* key) {
    if (!ev.contains(key) || !ev[key].is_number()) {
      throw bad(std::string("event needs numeric \"") + key + "\"");
    }
    return ev[key].get<double>();
  };
  for (const auto& ev : doc["events"]) {
    if (!ev.is_object() || !ev.contains("kind") || !ev["kind"].is_string() ||
        !ev.contains("buffer") || !ev["buffer"].is_string()) {
      throw bad("event needs string \"kind\" and \"buffer\"");
    }
    std::string kind = ev["kind"];
    std::string buffer = ev["buffer"];
    if (kind == "spike") {
      out.spikes.push_back({buffer, number(ev, "time_ms"),
                            ev.contains("weight") ? number(ev, "weight") : 1.0});
    } else if (kind == "current") {
      Current c;
      c.buffer = buffer;
      c.amplitude = number(ev, "amplitude");
      if (ev.contains("from_ms") || ev.contains("to_ms")) {
        c.from_ms = number(ev, "from_ms");
        c.to_ms = number(ev, "to_ms");
        c.range = true;
      } else {
        c.from_ms = number(ev, "time_ms");
      }
      out.currents.push_back(c);
    } else {
      throw bad("unknown event kind '" + kind + "'");
    }
  }
  return out;
}

}  // namespace nestml

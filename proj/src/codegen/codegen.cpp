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


#include "nestml/codegen/codegen.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "nestml/syntax/pretty_printer.hpp"

namespace nestml {

namespace {

std::string ctype(const TypeSpec& t) {
  switch (t.kind) {
    case TypeSpec::Kind::integer: return "long";
    case TypeSpec::Kind::boolean: return "bool";
    case TypeSpec::Kind::string: return "std::string";
    case TypeSpec::Kind::void_: return "void";
    default: return "double";
  }
}

std::string unit_comment(const Declaration& d) {
  return "  // " + d.type.text;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

const char* section_of(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::state: return "S_";
    case SymbolKind::parameter: return "P_";
    case SymbolKind::internal: return "V_";
    default: return nullptr;
  }
}

class Lowerer {
 public:
  Lowerer(const ModelScope& model, const TypeInfo& types,
          const std::set<std::string>& locals)
      : model_(model), types_(types), locals_(locals) {}

  std::string expr(const ExprPtr& e) const {
    if (!e) throw CodegenError("missing expression");
    std::string text = raw(*e);
    int k = types_.conversion_exponent(e.get());
    if (k != 0) text = "(" + text + " * 1e" + std::to_string(k) + ")";
    return text;
  }

 private:
  static std::string number(const Expr& e) {
    return e.spelling.empty() ? format_number(e.value) : e.spelling;
  }

  std::string variable(const Expr& e) const {
    if (!e.qualifier.empty()) {
      auto it = model_.components.find(e.qualifier);
      if (it == model_.components.end()) {
        throw CodegenError("unknown component '" + e.qualifier + "'");
      }
      const Symbol* s = it->second->scope->find_local(e.name);
      const char* sec = s != nullptr ? section_of(s->kind) : nullptr;
      if (sec == nullptr) throw CodegenError("unknown '" + e.qualified_name() + "'");
      return e.qualifier + "_." + sec + "." + e.name;
    }
    if (locals_.count(e.name) > 0) return e.name;
    const Symbol* s = model_.scope->lookup(e.name);
    if (s == nullptr) throw CodegenError("unknown symbol '" + e.name + "'");
    if (const char* sec = section_of(s->kind)) return std::string(sec) + "." + e.name;
    if (s->kind == SymbolKind::alias) return "get_" + e.name + "()";
    if (s->kind == SymbolKind::builtin && e.name == "E") return "nestml_shim::E";
    if (s->kind == SymbolKind::local) return e.name;
    throw CodegenError("'" + e.name + "' is not a variable");
  }

  std::string args(const Expr& e) const {
    std::string out;
    for (size_t i = 0; i < e.args.size(); ++i) {
      if (i > 0) out += ", ";
      out += expr(e.args[i]);
    }
    return out;
  }

  std::string call(const Expr& e) const {
    if (!e.qualifier.empty()) {
      const Symbol* q = model_.scope->lookup(e.qualifier);
      if (q != nullptr && q->kind == SymbolKind::buffer) {
        return "B_." + e.qualifier + ".get_sum(" + args(e) + ")";
      }
      return e.qualifier + "_." + e.name + "(" + args(e) + ")";
    }
    const Symbol* s = model_.scope->lookup(e.name);
    if (s != nullptr && s->kind == SymbolKind::builtin) {
      static const std::map<std::string, std::string> builtins = {
          {"exp", "std::exp"},
          {"ln", "std::log"},
          {"min", "std::min"},
          {"max", "std::max"},
          {"resolution", "nestml_shim::resolution"},
          {"steps", "nestml_shim::steps"},
          {"log_info", "nestml_shim::log_info"}};
      if (e.name == "emitSpike") return "nestml_shim::send_spike(*this, step_)";
      auto it = builtins.find(e.name);
      if (it == builtins.end()) throw CodegenError("unknown builtin " + e.name);
      return it->second + "(" + args(e) + ")";
    }
    return e.name + "(" + args(e) + ")";
  }

  std::string binary(const Expr& e) const {
    std::string l = expr(e.lhs);
    std::string r = expr(e.rhs);
    switch (e.binary_op) {
      case BinaryOp::pow: return "std::pow(" + l + ", " + r + ")";
      case BinaryOp::div:
        if (e.lhs->kind == Expr::Kind::number &&
            types_.conversion_exponent(e.lhs.get()) == 0 &&
            l.find_first_of(".eE") == std::string::npos) {
          l += ".0";
        } else if (types_.type(e.lhs.get()).kind == TypeSpec::Kind::integer) {
          l = "static_cast<double>(" + l + ")";
        }
        return "(" + l + " / " + r + ")";
      case BinaryOp::and_: return "(" + l + " && " + r + ")";
      case BinaryOp::or_: return "(" + l + " || " + r + ")";
      default: return "(" + l + " " + to_string(e.binary_op) + " " + r + ")";
    }
  }

  std::string raw(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::number: return number(e);
      case Expr::Kind::string: return quoted(e.text);
      case Expr::Kind::boolean: return e.bool_value ? "true" : "false";
      case Expr::Kind::var: return variable(e);
      case Expr::Kind::call: return call(e);
      case Expr::Kind::unary:
        return e.unary_op == UnaryOp::neg ? "(-" + expr(e.lhs) + ")"
                                          : "(!" + expr(e.lhs) + ")";
      case Expr::Kind::binary: return binary(e);
      case Expr::Kind::paren: return expr(e.lhs);
    }
    throw CodegenError("unknown expression kind");
  }

  const ModelScope& model_;
  const TypeInfo& types_;
  const std::set<std::string>& locals_;
};

class Writer {
 public:
  void line(const std::string& text = "") {
    if (text.empty()) {
      out_ << "\n";
      return;
    }
    out_ << std::string(indent_ * 2, ' ') << text << "\n";
  }
  void open(const std::string& text) {
    line(text);
    ++indent_;
  }
  void close(const std::string& text = "}") {
    --indent_;
    line(text);
  }
  // `} else {` style lines between two indented blocks.
  void reopen(const std::string& text) {
    --indent_;
    line(text);
    ++indent_;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  int indent_ = 0;
};

template <typename F>
void for_each_decl(const std::optional<std::vector<Declaration>>& block, F&& f) {
  if (!block) return;
  for (const auto& d : *block) {
    for (const auto& n : d.names) f(d, n);
  }
}

const char* assign_text(AssignOp op) {
  switch (op) {
    case AssignOp::set: return " = ";
    case AssignOp::add: return " += ";
    case AssignOp::sub: return " -= ";
    case AssignOp::mul: return " *= ";
    case AssignOp::div: return " /= ";
  }
  return " = ";
}

// Emits one model (neuron or used component) as a C++ class.
class ModelEmitter {
 public:
  ModelEmitter(const ModelScope& model, const TypeInfo& types,
               std::string class_name, std::string owner)
      : m_(model), types_(types), cls_(std::move(class_name)),
        owner_(std::move(owner)) {}

  void header(Writer& w) const {
    const ModelDecl& d = *m_.decl;
    w.open("class " + cls_ + (d.is_component ? " {" : " : public nestml_shim::Node {"));
    w.reopen("public:");
    for (const ModelScope* comp : used_components()) {
      ModelEmitter(*comp, types_, comp->decl->name, qualified()).header(w);
      w.line();
    }
    w.line(cls_ + "();");
    w.line();
    w.line("void calibrate();");
    w.line("void check_guards() const;");
    if (!d.is_component) {
      for (const auto& dyn : d.dynamics) {
        w.line(std::string("void ") + update_name(dyn) + "(long step);");
      }
      w.line("void handle_spike(const std::string& buffer, double weight, long step);");
      w.line("void handle_current(const std::string& buffer, double amplitude, long step);");
      w.line("void init_buffers();");
    }
    w.line("void get_status(nestml_shim::Dictionary& d) const;");
    w.line("void set_status(const nestml_shim::Dictionary& d);");
    if (!d.is_component) {
      w.line("static const std::vector<std::string>& recordables();");
    }
    w.line();
    accessor_decls(w, d.state, "state");
    accessor_decls(w, d.parameter, "parameters");
    bool any_alias = false;
    for_each_decl(d.state, [&](const Declaration& decl, const std::string& n) {
      if (!decl.is_alias) return;
      if (!any_alias) w.line("// aliases");
      any_alias = true;
      w.line("double get_" + n + "() const;");
    });
    if (any_alias) w.line();
    if (!d.functions.empty()) {
      w.line("// functions");
      for (const auto& f : d.functions) w.line(signature(f, "") + ";");
      w.line();
    }
    record(w, "Parameters_", d.parameter);
    record(w, "State_", d.state);
    record(w, "Internals_", d.internal);
    if (!d.is_component) {
      w.open("struct Buffers_ {");
      if (d.input) {
        for (const auto& in : *d.input) {
          w.line("nestml_shim::RingBuffer " + in.buffer + ";");
        }
      }
      w.close("};");
      w.line();
    }
    w.line("Parameters_ P_;");
    w.line("State_ S_;");
    w.line("Internals_ V_;");
    if (!d.is_component) {
      w.line("Buffers_ B_;");
      w.line("long step_ = 0;");
    }
    for (const auto& use : m_.decl->uses) {
      w.line(use.component + " " + (use.alias.empty() ? use.component : use.alias) + "_;");
    }
    w.close("};");
  }

  void implementation(Writer& w) const {
    const ModelDecl& d = *m_.decl;
    for (const ModelScope* comp : used_components()) {
      ModelEmitter(*comp, types_, comp->decl->name, qualified()).implementation(w);
    }
    const std::string q = qualified() + "::";

    w.open(q + cls_ + "() {");
    for_each_decl(d.parameter, [&](const Declaration& decl, const std::string& n) {
      w.line("P_." + n + " = " + init(decl) + ";");
    });
    w.line("calibrate();");
    for_each_decl(d.state, [&](const Declaration& decl, const std::string& n) {
      if (!decl.is_alias) w.line("S_." + n + " = " + init(decl) + ";");
    });
    w.line("check_guards();");
    w.close();
    w.line();

    w.open("void " + q + "calibrate() {");
    for_each_decl(d.internal, [&](const Declaration& decl, const std::string& n) {
      w.line("V_." + n + " = " + init(decl) + ";");
    });
    w.close();
    w.line();

    w.open("void " + q + "check_guards() const {");
    auto guards = [&](const std::optional<std::vector<Declaration>>& block) {
      for_each_decl(block, [&](const Declaration& decl, const std::string& n) {
        if (!decl.guard) return;
        w.open("if (!" + lower(decl.guard) + ") {");
        w.line("throw nestml_shim::GuardViolation(" + quoted(n) + ", " +
               quoted(pretty_print(decl.guard)) + ");");
        w.close();
      });
    };
    guards(d.parameter);
    guards(d.state);
    w.close();
    w.line();

    accessor_defs(w, d.state);
    accessor_defs(w, d.parameter);
    for_each_decl(d.state, [&](const Declaration& decl, const std::string& n) {
      if (!decl.is_alias) return;
      w.open("double " + q + "get_" + n + "() const {");
      w.line("return " + lower(decl.init) + ";");
      w.close();
      w.line();
    });

    for (const auto& f : d.functions) {
      std::set<std::string> locals;
      for (const auto& p : f.params) locals.insert(p.name);
      w.open(signature(f, q) + " {");
      body(w, f.body, locals);
      w.close();
      w.line();
    }

    status(w, q);

    if (d.is_component) return;
    w.open("void " + q + "init_buffers() {");
    if (d.input) {
      for (const auto& in : *d.input) w.line("B_." + in.buffer + ".clear();");
    }
    w.close();
    w.line();

    w.open("const std::vector<std::string>& " + q + "recordables() {");
    w.open("static const std::vector<std::string> names = {");
    for_each_decl(d.state, [&](const Declaration&, const std::string& n) {
      w.line(quoted(n) + ",");
    });
    w.close("};");
    w.line("return names;");
    w.close();
    w.line();

    for (const auto& dyn : d.dynamics) {
      std::set<std::string> locals;
      w.open("void " + q + update_name(dyn) + "(long step) {");
      if (dyn.kind == DynamicsKind::min_delay) {
        w.line("// Runs once per min-delay interval.");
        w.line("if (step % nestml_shim::min_delay_steps() != 0) return;");
      }
      w.line("step_ = step;");
      for (const auto& p : dyn.params) {
        w.line("const double " + p.name + " = step * nestml_shim::resolution();");
        locals.insert(p.name);
      }
      body(w, dyn.body, locals);
      w.close();
      w.line();
    }
    handler(w, q, "handle_spike", "weight", BufferKind::spike);
    w.line();
    handler(w, q, "handle_current", "amplitude", BufferKind::current);
  }

 private:
  // Distinct components in `use` order.
  std::vector<const ModelScope*> used_components() const {
    std::vector<const ModelScope*> out;
    for (const auto& use : m_.decl->uses) {
      auto it = m_.components.find(use.alias.empty() ? use.component : use.alias);
      if (it == m_.components.end()) continue;
      if (std::find(out.begin(), out.end(), it->second) == out.end()) {
        out.push_back(it->second);
      }
    }
    return out;
  }

  std::string qualified() const {
    return owner_.empty() ? cls_ : owner_ + "::" + cls_;
  }

  static const char* update_name(const DynamicsDecl& dyn) {
    return dyn.kind == DynamicsKind::timestep ? "update" : "update_min_delay";
  }

  std::string lower(const ExprPtr& e,
                    const std::set<std::string>& locals = {}) const {
    return Lowerer(m_, types_, locals).expr(e);
  }

  std::string init(const Declaration& d) const {
    if (d.init) return lower(d.init);
    const Symbol* s = m_.scope->find_local(d.names.front());
    bool integral = s != nullptr && s->type.kind == TypeSpec::Kind::integer;
    if (s != nullptr && s->type.kind == TypeSpec::Kind::boolean) return "false";
    return integral ? "0" : "0.0";
  }

  std::string type_of(const std::string& name) const {
    const Symbol* s = m_.scope->find_local(name);
    return s != nullptr ? ctype(s->type) : "double";
  }

  std::string signature(const FunctionDecl& f, const std::string& q) const {
    std::string ret = "void";
    if (f.return_type) {
      auto t = resolve_type_ref(*f.return_type);
      ret = t ? ctype(*t) : "double";
    }
    std::string out = ret + " " + q + f.name + "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i > 0) out += ", ";
      auto t = resolve_type_ref(f.params[i].type);
      out += (t ? ctype(*t) : "double") + " " + f.params[i].name;
    }
    return out + ")";
  }

  bool has_function(const std::string& name) const {
    for (const auto& f : m_.decl->functions) {
      if (f.name == name) return true;
    }
    return false;
  }

  void accessor_decls(Writer& w, const std::optional<std::vector<Declaration>>& b,
                      const std::string& title) const {
    bool any = false;
    for_each_decl(b, [&](const Declaration& d, const std::string& n) {
      if (d.is_alias) return;
      if (!any) w.line("// " + title);
      any = true;
      std::string t = type_of(n);
      w.line(t + " get_" + n + "() const;");
      if (!has_function("set_" + n)) w.line("void set_" + n + "(" + t + " value);");
    });
    if (any) w.line();
  }

  void accessor_defs(Writer& w, const std::optional<std::vector<Declaration>>& b) const {
    const std::string q = qualified() + "::";
    for_each_decl(b, [&](const Declaration& d, const std::string& n) {
      if (d.is_alias) return;
      const Symbol* s = m_.scope->find_local(n);
      std::string sec = s != nullptr && section_of(s->kind) ? section_of(s->kind) : "S_";
      std::string t = type_of(n);
      w.open(t + " " + q + "get_" + n + "() const {");
      w.line("return " + sec + "." + n + ";");
      w.close();
      w.line();
      if (has_function("set_" + n)) return;
      w.open("void " + q + "set_" + n + "(" + t + " value) {");
      w.line(sec + "." + n + " = value;");
      if (d.guard) w.line("check_guards();");
      w.close();
      w.line();
    });
  }

  // Name-keyed access to parameters, state and aliases.
  void status(Writer& w, const std::string& q) const {
    const ModelDecl& d = *m_.decl;
    w.open("void " + q + "get_status(nestml_shim::Dictionary& d) const {");
    auto get = [&](const Declaration&, const std::string& n) {
      w.line("d[" + quoted(n) + "] = get_" + n + "();");
    };
    for_each_decl(d.parameter, get);
    for_each_decl(d.state, get);
    w.close();
    w.line();
    w.open("void " + q + "set_status(const nestml_shim::Dictionary& d) {");
    w.line("Parameters_ p = P_;");
    w.line("State_ s = S_;");
    auto set = [&](const char* rec, const Declaration& decl, const std::string& n) {
      if (decl.is_alias) return;
      w.line(std::string("nestml_shim::update_value(d, ") + quoted(n) + ", " + rec +
             "." + n + ");");
    };
    for_each_decl(d.parameter, [&](const Declaration& decl, const std::string& n) {
      set("p", decl, n);
    });
    for_each_decl(d.state, [&](const Declaration& decl, const std::string& n) {
      set("s", decl, n);
    });
    w.line("std::swap(P_, p);");
    w.line("std::swap(S_, s);");
    w.open("try {");
    w.line("check_guards();");
    w.reopen("} catch (...) {");
    w.line("std::swap(P_, p);");
    w.line("std::swap(S_, s);");
    w.line("throw;");
    w.close();
    w.line("calibrate();");
    w.close();
    w.line();
  }

  void record(Writer& w, const std::string& name,
              const std::optional<std::vector<Declaration>>& b) const {
    w.open("struct " + name + " {");
    for_each_decl(b, [&](const Declaration& d, const std::string& n) {
      if (d.is_alias) return;
      w.line(type_of(n) + " " + n + ";" + unit_comment(d));
    });
    w.close("};");
    w.line();
  }

  void handler(Writer& w, const std::string& q, const std::string& name,
               const std::string& value, BufferKind kind) const {
    w.open("void " + q + name + "(const std::string& buffer, double " + value +
           ", long step) {");
    if (m_.decl->input) {
      for (const auto& in : *m_.decl->input) {
        if (in.kind != kind) continue;
        w.open("if (buffer == " + quoted(in.buffer) + ") {");
        std::string add = "B_." + in.buffer + ".add(step, " + value + ");";
        if (in.excitatory == in.inhibitory) {
          w.line(add);
        } else {
          w.line(std::string("if (") + value + (in.excitatory ? " > 0" : " < 0") +
                 ") " + add);
        }
        w.line("return;");
        w.close();
      }
    }
    w.line("throw nestml_shim::UnknownBuffer(buffer);");
    w.close();
  }

  void body(Writer& w, const Block& block, std::set<std::string> locals) const {
    for (const auto& s : block) stmt(w, *s, locals);
  }

  void stmt(Writer& w, const Stmt& s, std::set<std::string>& locals) const {
    Lowerer lw(m_, types_, locals);
    switch (s.kind) {
      case Stmt::Kind::assign: {
        const Expr& t = *s.target;
        std::string value = lw.expr(s.value);
        if (t.qualifier.empty() && locals.count(t.name) == 0) {
          const Symbol* sym = m_.scope->lookup(t.name);
          if (sym != nullptr && sym->kind == SymbolKind::alias) {
            if (s.assign_op != AssignOp::set) {
              std::string op = assign_text(s.assign_op);
              value = "(get_" + t.name + "() " + op.substr(1, 1) + " " + value + ")";
            }
            w.line("set_" + t.name + "(" + value + ");");
            return;
          }
        }
        w.line(lw.expr(s.target) + assign_text(s.assign_op) + value + ";");
        return;
      }
      case Stmt::Kind::if_chain:
        for (size_t i = 0; i < s.branches.size(); ++i) {
          std::string head = (i == 0 ? "if (" : "} else if (") +
                             lw.expr(s.branches[i].cond) + ") {";
          if (i == 0) {
            w.open(head);
          } else {
            w.reopen(head);
          }
          body(w, s.branches[i].body, locals);
        }
        if (s.has_else) {
          w.reopen("} else {");
          body(w, s.else_body, locals);
        }
        w.close();
        return;
      case Stmt::Kind::call:
        w.line(lw.expr(s.value) + ";");
        return;
      case Stmt::Kind::return_:
        w.line(s.value ? "return " + lw.expr(s.value) + ";" : "return;");
        return;
      case Stmt::Kind::local:
        for (const auto& n : s.decl.names) {
          auto t = resolve_type_ref(s.decl.type);
          std::string ty = t ? ctype(*t) : "double";
          std::string init = s.decl.init ? lw.expr(s.decl.init)
                                         : (ty == "long" ? "0" : "0.0");
          w.line(ty + " " + n + " = " + init + ";");
        }
        for (const auto& n : s.decl.names) locals.insert(n);
        return;
      case Stmt::Kind::ode:
        throw CodegenError("model '" + m_.decl->name +
                           "' still contains an ODE block");
    }
  }

  const ModelScope& m_;
  const TypeInfo& types_;
  std::string cls_;
  std::string owner_;
};

std::string banner(const std::string& file, const std::string& what) {
  return "// " + file + ": generated by nestmlc " + kToolVersion + " from " +
         what + ". Do not edit.\n";
}

const char* kShimNote =
    "//\n"
    "// Uses the runtime shim declared in the module file:\n"
    "//   nestml_shim::{Node, RingBuffer, GuardViolation, UnknownBuffer, E,\n"
    "//   Dictionary, update_value, resolution, steps, min_delay_steps,\n"
    "//   send_spike, log_info}\n"
    "// and std::{exp, log, pow, min, max}.\n";

std::string guard_macro(const std::string& module, const std::string& name) {
  std::string out;
  for (char c : module + "_" + name + "_H") {
    out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

void write_shim(Writer& w) {
  w.open("namespace nestml_shim {");
  w.line();
  w.line("inline constexpr double E = 2.718281828459045;");
  w.line();
  w.open("class Node {");
  w.reopen("public:");
  w.line("virtual ~Node() = default;");
  w.close("};");
  w.line();
  w.open("class RingBuffer {");
  w.reopen("public:");
  w.line("void add(long step, double value);");
  w.line("double get_sum(double t) const;");
  w.line("void advance();");
  w.line("void clear();");
  w.close("};");
  w.line();
  w.open("struct GuardViolation : std::runtime_error {");
  w.line("GuardViolation(const std::string& name, const std::string& guard);");
  w.close("};");
  w.line();
  w.open("struct UnknownBuffer : std::runtime_error {");
  w.line("explicit UnknownBuffer(const std::string& buffer);");
  w.close("};");
  w.line();
  w.line("using Dictionary = std::map<std::string, double>;");
  w.line("void update_value(const Dictionary& d, const std::string& key, double& value);");
  w.line("void update_value(const Dictionary& d, const std::string& key, long& value);");
  w.line();
  w.line("double resolution();");
  w.line("long steps(double ms);");
  w.line("long min_delay_steps();");
  w.line("void send_spike(const Node& node, long step);");
  w.line("void log_info(const std::string& message);");
  w.line();
  w.open("class Registry {");
  w.reopen("public:");
  w.line("template <typename Model>");
  w.line("void add(const std::string& name);");
  w.close("};");
  w.line();
  w.close("}  // namespace nestml_shim");
}

}  // namespace

std::string lower_expr(const ExprPtr& e, const ModelScope& model,
                       const TypeInfo& types, const std::set<std::string>& locals) {
  return Lowerer(model, types, locals).expr(e);
}

std::vector<GeneratedArtifact> generate(
    const std::vector<const ModelScope*>& models, const TypeInfo& types,
    const std::string& module_name) {
  std::vector<GeneratedArtifact> out;
  std::set<std::string> paths;
  auto add = [&](const std::string& file, std::string contents,
                 GeneratedArtifact::Kind kind) {
    std::string path = module_name + "/" + file;
    if (!paths.insert(path).second) {
      throw CodegenError("duplicate artifact path " + path);
    }
    out.push_back({path, std::move(contents), kind});
  };

  for (const ModelScope* m : models) {
    const std::string& name = m->decl->name;
    ModelEmitter emitter(*m, types, name, "");
    Writer h;
    std::string macro = guard_macro(module_name, name);
    h.line("#ifndef " + macro);
    h.line("#define " + macro);
    h.line();
    h.line("#include <string>");
    h.line("#include <vector>");
    h.line();
    emitter.header(h);
    h.line();
    h.line("#endif  // " + macro);
    add(name + ".h",
        banner(name + ".h", "neuron " + name) + kShimNote + "\n" + h.str(),
        GeneratedArtifact::Kind::header);

    Writer c;
    c.line("#include \"" + name + ".h\"");
    c.line();
    c.line("#include <algorithm>");
    c.line("#include <cmath>");
    c.line("#include <string>");
    c.line("#include <utility>");
    c.line();
    emitter.implementation(c);
    add(name + ".cpp",
        banner(name + ".cpp", "neuron " + name) + kShimNote + "\n" + c.str(),
        GeneratedArtifact::Kind::implementation);
  }

  Writer mod;
  mod.line("#include <map>");
  mod.line("#include <stdexcept>");
  mod.line("#include <string>");
  mod.line();
  write_shim(mod);
  mod.line();
  for (const ModelScope* m : models) {
    mod.line("#include \"" + m->decl->name + ".h\"");
  }
  if (!models.empty()) mod.line();
  mod.open("void register_" + module_name + "(nestml_shim::Registry& registry) {");
  for (const ModelScope* m : models) {
    mod.line("registry.add<" + m->decl->name + ">(" + quoted(m->decl->name) + ");");
  }
  mod.close();
  std::string module_file = module_name + "module.cpp";
  add(module_file,
      banner(module_file, "module " + module_name) + "\n" + mod.str(),
      GeneratedArtifact::Kind::module_bootstrap);

  std::string sources = module_file;
  for (const ModelScope* m : models) sources += " " + m->decl->name + ".cpp";
  std::string script =
      "#!/bin/sh\n"
      "# bootstrap.sh.in: generated by nestmlc " + std::string(kToolVersion) +
      " for module " + module_name + ".\n"
      "# Build stub: compiles the module against a simulator providing the\n"
      "# nestml_shim API. @SIMULATOR_INCLUDE@ and @CXX@ are filled in by the\n"
      "# installing build system.\n"
      "set -e\n"
      "MODULE=" + module_name + "\n"
      "SOURCES=\"" + sources + "\"\n"
      "@CXX@ -std=c++17 -O2 -fPIC -shared -I@SIMULATOR_INCLUDE@ $SOURCES \\\n"
      "  -o \"lib${MODULE}.so\"\n"
      "echo \"built lib${MODULE}.so\"\n";
  add("bootstrap.sh.in", script, GeneratedArtifact::Kind::build_script);
  return out;
}

GeneratedArtifact inspectable_artifact(const ModelDecl& transformed,
                                       const std::string& module_name) {
  return {module_name + "/" + transformed.name + ".solved.nestml",
          pretty_print(transformed), GeneratedArtifact::Kind::inspectable_model};
}

namespace {

int count_lines(const std::string& text, const std::string& comment) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line.compare(first, comment.size(), comment) == 0) continue;
    ++n;
  }
  return n;
}

}  // namespace

LocReport loc_report(const std::string& model_source,
                     const std::vector<GeneratedArtifact>& artifacts) {
  LocReport r;
  r.model_loc = count_lines(model_source, "#");
  for (const auto& a : artifacts) {
    switch (a.kind) {
      case GeneratedArtifact::Kind::build_script:
        r.generated_loc += count_lines(a.contents, "#");
        break;
      case GeneratedArtifact::Kind::inspectable_model:
        break;
      default:
        r.generated_loc += count_lines(a.contents, "//");
        break;
    }
  }
  r.ratio = r.model_loc > 0 ? static_cast<double>(r.generated_loc) / r.model_loc
                            : static_cast<double>(r.generated_loc);
  return r;
}

}  // namespace nestml

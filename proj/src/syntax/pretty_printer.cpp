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

#include "nestml/syntax/pretty_printer.hpp"

#include <sstream>

namespace nestml {

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::unary:
      return e.unary_op == UnaryOp::neg ? 7 : 3;
    case Expr::Kind::binary:
      switch (e.binary_op) {
        case BinaryOp::or_: return 1;
        case BinaryOp::and_: return 2;
        case BinaryOp::add: case BinaryOp::sub: return 5;
        case BinaryOp::mul: case BinaryOp::div: return 6;
        case BinaryOp::pow: return 8;
        default: return 4;
      }
    case Expr::Kind::number:
      return e.spelling.empty() || e.spelling[0] != '-' ? 9 : 7;
    default:
      return 9;
  }
}

namespace {

void print_expr(std::ostream& os, const Expr& e);

void print_operand(std::ostream& os, const Expr& e, bool paren) {
  if (paren) os << '(';
  print_expr(os, e);
  if (paren) os << ')';
}

void print_expr(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::number:
      os << e.spelling;
      if (!e.unit.empty()) os << ' ' << e.unit;
      return;
    case Expr::Kind::string: {
      os << '"';
      for (char c : e.text) {
        if (c == '"' || c == '\\') os << '\\';
        if (c == '\n') {
          os << "\\n";
          continue;
        }
        os << c;
      }
      os << '"';
      return;
    }
    case Expr::Kind::boolean:
      os << (e.bool_value ? "true" : "false");
      return;
    case Expr::Kind::var:
      os << e.qualified_name();
      return;
    case Expr::Kind::call:
      os << e.qualified_name() << '(';
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, *e.args[i]);
      }
      os << ')';
      return;
    case Expr::Kind::paren:
      os << '(';
      print_expr(os, *e.lhs);
      os << ')';
      return;
    case Expr::Kind::unary:
      if (e.unary_op == UnaryOp::neg) {
        os << '-';
        print_operand(os, *e.lhs, precedence(*e.lhs) < 7);
      } else {
        os << "not ";
        print_operand(os, *e.lhs, precedence(*e.lhs) < 3);
      }
      return;
    case Expr::Kind::binary: {
      int p = precedence(e);
      if (e.binary_op == BinaryOp::pow) {
        print_operand(os, *e.lhs, precedence(*e.lhs) <= p);
        os << " ** ";
        print_operand(os, *e.rhs, precedence(*e.rhs) < 7);
        return;
      }
      print_operand(os, *e.lhs, precedence(*e.lhs) < p);
      os << ' ' << to_string(e.binary_op) << ' ';
      print_operand(os, *e.rhs, precedence(*e.rhs) <= p);
      return;
    }
  }
}

class Printer {
 public:
  std::string str() const { return os_.str(); }

  void file(const ModelFile& mf) {
    for (const auto& imp : mf.imports) os_ << "import " << imp.name << '\n';
    bool first = mf.imports.empty();
    for (const auto& d : mf.decls) {
      if (!first) os_ << '\n';
      first = false;
      model(d);
    }
  }

  void model(const ModelDecl& m) {
    doc(m.doc);
    line() << (m.is_component ? "component " : "neuron ") << m.name << ":\n";
    ++indent_;
    for (const auto& u : m.uses) {
      line() << "use " << u.component;
      if (!u.alias.empty()) os_ << " as " << u.alias;
      os_ << '\n';
    }
    decl_block("state", m.state);
    decl_block("parameter", m.parameter);
    decl_block("internal", m.internal);
    if (m.input) {
      line() << "input:\n";
      ++indent_;
      for (const auto& l : *m.input) {
        line() << l.buffer << " <-";
        if (l.inhibitory) os_ << " inhibitory";
        if (l.excitatory) os_ << " excitatory";
        os_ << (l.kind == BufferKind::spike ? " spike" : " current") << '\n';
      }
      --indent_;
      line() << "end\n";
    }
    for (const auto& o : m.outputs)
      line() << "output: "
             << (o.kind == BufferKind::spike ? "spike" : "current") << '\n';
    for (const auto& f : m.functions) {
      doc(f.doc);
      line() << "function " << f.name << '(';
      params(f.params);
      os_ << ')';
      if (f.return_type) os_ << ' ' << f.return_type->text;
      os_ << ":\n";
      body(f.body);
      line() << "end\n";
    }
    for (const auto& d : m.dynamics) {
      doc(d.doc);
      line() << "dynamics "
             << (d.kind == DynamicsKind::timestep ? "timestep" : "minDelay");
      if (!d.params.empty()) {
        os_ << '(';
        params(d.params);
        os_ << ')';
      }
      os_ << ":\n";
      body(d.body);
      line() << "end\n";
    }
    --indent_;
    line() << "end\n";
  }

  void declaration(const Declaration& d) {
    if (d.is_alias) os_ << "alias ";
    for (size_t i = 0; i < d.names.size(); ++i) {
      if (i) os_ << ", ";
      os_ << d.names[i];
    }
    os_ << ' ' << d.type.text;
    if (d.init) {
      os_ << " = ";
      print_expr(os_, *d.init);
    }
    if (d.guard) {
      os_ << " [";
      print_expr(os_, *d.guard);
      os_ << ']';
    }
  }

 private:
  std::ostream& line() {
    for (int i = 0; i < indent_; ++i) os_ << "  ";
    return os_;
  }

  void doc(const std::optional<std::string>& text) {
    if (!text) return;
    std::istringstream in(*text);
    std::string l;
    bool any = false;
    while (std::getline(in, l)) {
      any = true;
      line() << '#';
      if (!l.empty()) os_ << ' ' << l;
      os_ << '\n';
    }
    if (!any) line() << "#\n";
  }

  void params(const std::vector<Param>& ps) {
    for (size_t i = 0; i < ps.size(); ++i) {
      if (i) os_ << ", ";
      os_ << ps[i].name << ' ' << ps[i].type.text;
    }
  }

  void decl_block(const char* name,
                  const std::optional<std::vector<Declaration>>& decls) {
    if (!decls) return;
    line() << name << ":\n";
    ++indent_;
    for (const auto& d : *decls) {
      doc(d.doc);
      line();
      declaration(d);
      os_ << '\n';
    }
    --indent_;
    line() << "end\n";
  }

  void body(const Block& b) {
    ++indent_;
    for (const auto& s : b) statement(*s);
    --indent_;
  }

  void statement(const Stmt& s) {
    doc(s.doc);
    switch (s.kind) {
      case Stmt::Kind::assign:
        line();
        print_expr(os_, *s.target);
        os_ << ' ' << to_string(s.assign_op) << ' ';
        print_expr(os_, *s.value);
        os_ << '\n';
        return;
      case Stmt::Kind::call:
        line();
        print_expr(os_, *s.value);
        os_ << '\n';
        return;
      case Stmt::Kind::return_:
        line() << "return";
        if (s.value) {
          os_ << ' ';
          print_expr(os_, *s.value);
        }
        os_ << '\n';
        return;
      case Stmt::Kind::local:
        line();
        declaration(s.decl);
        os_ << '\n';
        return;
      case Stmt::Kind::if_chain:
        for (size_t i = 0; i < s.branches.size(); ++i) {
          line() << (i == 0 ? "if " : "elif ");
          print_expr(os_, *s.branches[i].cond);
          os_ << ":\n";
          body(s.branches[i].body);
        }
        if (s.has_else) {
          line() << "else:\n";
          body(s.else_body);
        }
        line() << "end\n";
        return;
      case Stmt::Kind::ode:
        line() << "ODE:\n";
        ++indent_;
        for (const auto& sh : s.ode.shapes) {
          doc(sh.doc);
          line() << sh.name << " == ";
          print_expr(os_, *sh.kernel);
          if (!sh.buffer.empty()) os_ << " on " << sh.buffer;
          os_ << '\n';
        }
        for (const auto& eq : s.ode.equations) {
          doc(eq.doc);
          line() << "d/dt " << eq.state_var << " == ";
          print_expr(os_, *eq.rhs);
          os_ << '\n';
        }
        --indent_;
        line() << "end\n";
        return;
    }
  }

  std::ostringstream os_;
  int indent_ = 0;
};

}  // namespace

std::string pretty_print(const ModelFile& model) {
  Printer p;
  p.file(model);
  return p.str();
}

std::string pretty_print(const ModelDecl& decl) {
  Printer p;
  p.model(decl);
  return p.str();
}

std::string pretty_print(const ExprPtr& expr) {
  if (!expr) return "";
  std::ostringstream os;
  print_expr(os, *expr);
  return os.str();
}

std::string pretty_print(const Declaration& decl) {
  Printer p;
  p.declaration(decl);
  return p.str();
}

}  // namespace nestml

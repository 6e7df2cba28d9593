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

#include "nestml/syntax/parser.hpp"

#include <utility>

#include "nestml/syntax/lexer.hpp"

namespace nestml {

namespace {

struct Bail {};

bool is_block_keyword(const Token& t) {
  if (t.kind != Tok::keyword) return false;
  return t.text == "use" || t.text == "state" || t.text == "parameter" ||
         t.text == "internal" || t.text == "input" || t.text == "output" ||
         t.text == "function" || t.text == "dynamics";
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::ident:
    case Tok::keyword:
    case Tok::number:
      return "'" + t.text + "'";
    case Tok::string:
      return "string literal";
    default:
      return std::string(token_name(t.kind));
  }
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::string& file,
         const ParseOptions& options)
      : toks_(std::move(tokens)), file_(file), options_(options) {
    SourceSpan end_span{file, 1, 1};
    if (!toks_.empty()) {
      end_span = toks_.back().span;
      end_span.column += static_cast<int>(
          toks_.back().kind == Tok::string ? toks_.back().text.size() + 2
                                           : toks_.back().text.size());
    }
    Token nl;
    nl.kind = Tok::newline;
    nl.span = end_span;
    toks_.push_back(nl);
    Token eof;
    eof.kind = Tok::eof;
    eof.span = end_span;
    toks_.push_back(eof);
  }

  Diagnostics& errors() { return errors_; }

  ModelFile file() {
    ModelFile mf;
    mf.path = file_;
    skip_separators();
    while (!at(Tok::eof)) {
      size_t start = pos_;
      try {
        if (at_kw("import")) {
          Import imp;
          imp.span = cur().span;
          advance();
          imp.name = ident("component name");
          terminator();
          mf.imports.push_back(std::move(imp));
        } else if (at_kw("neuron") || at_kw("component")) {
          mf.decls.push_back(model_decl());
        } else {
          fail("expected 'neuron', 'component' or 'import', found " +
               describe(cur()));
        }
      } catch (const Bail&) {
        recover(start);
      }
      skip_separators();
    }
    return mf;
  }

  ExprPtr expression_only() {
    skip_newlines();
    ExprPtr e = expr();
    skip_separators();
    if (!at(Tok::eof)) fail("unexpected " + describe(cur()) + " after expression");
    return e;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t k = 1) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok kind) const { return cur().kind == kind; }
  bool at_kw(std::string_view word) const {
    return cur().kind == Tok::keyword && cur().text == word;
  }
  bool at_ident(std::string_view word) const {
    return cur().kind == Tok::ident && cur().text == word;
  }
  void advance() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) {
    errors_.push_back(make_error("E0101", message, cur().span));
    throw Bail{};
  }

  void expect(Tok kind, const char* context = nullptr) {
    if (!at(kind)) {
      std::string msg = "expected " + std::string(token_name(kind));
      if (context) msg += std::string(" ") + context;
      fail(msg + ", found " + describe(cur()));
    }
    advance();
  }

  void expect_kw(std::string_view word) {
    if (!at_kw(word))
      fail("expected '" + std::string(word) + "', found " + describe(cur()));
    advance();
  }

  std::string ident(const char* what) {
    if (!at(Tok::ident)) fail(std::string("expected ") + what + ", found " + describe(cur()));
    std::string name = cur().text;
    if (!options_.allow_reserved_names &&
        name.find("__") != std::string::npos) {
      errors_.push_back(make_error(
          "E0103", "identifier '" + name + "' uses the reserved '__' namespace",
          cur().span));
    }
    advance();
    return name;
  }

  std::optional<std::string> doc_here() const {
    if (cur().has_doc) return cur().doc;
    return std::nullopt;
  }

  void skip_newlines() {
    while (at(Tok::newline)) advance();
  }

  void skip_separators() {
    while (at(Tok::newline) || at(Tok::semicolon)) advance();
  }

  bool at_block_close() const {
    return at_kw("end") || at_kw("elif") || at_kw("else") || at(Tok::eof);
  }

  void terminator() {
    if (at(Tok::newline) || at(Tok::semicolon)) {
      skip_separators();
      return;
    }
    if (at_block_close()) return;
    fail("expected end of statement, found " + describe(cur()));
  }

  // Skips the rest of the line that failed; if that line opened a block,
  // skips through its matching `end` as well.
  void recover(size_t start) {
    size_t line_end = start;
    while (line_end < toks_.size() && toks_[line_end].kind != Tok::newline &&
           toks_[line_end].kind != Tok::eof)
      ++line_end;
    bool opens = false;
    for (size_t i = start; i < line_end; ++i) {
      if (toks_[i].kind == Tok::colon &&
          (i + 1 == line_end ||
           (toks_[i + 1].kind == Tok::keyword && toks_[i + 1].text == "end")))
        opens = true;
    }
    if (pos_ < line_end) pos_ = line_end;
    if (!opens || pos_ > line_end) return;
    int depth = 1;
    while (!at(Tok::eof)) {
      if (at(Tok::colon) && peek().kind == Tok::newline) ++depth;
      if (at_kw("end")) {
        --depth;
        if (depth == 0) {
          advance();
          return;
        }
      }
      advance();
    }
  }

  ModelDecl model_decl() {
    ModelDecl m;
    m.doc = doc_here();
    m.span = cur().span;
    m.is_component = at_kw("component");
    advance();
    m.name = ident(m.is_component ? "component name" : "neuron name");
    expect(Tok::colon);
    while (true) {
      skip_separators();
      if (at_kw("end")) {
        advance();
        break;
      }
      if (at(Tok::eof)) fail("expected 'end' to close '" + m.name + "'");
      size_t start = pos_;
      try {
        body_item(m);
      } catch (const Bail&) {
        recover(start);
      }
    }
    terminator();
    return m;
  }

  void body_item(ModelDecl& m) {
    const Token& t = cur();
    if (!is_block_keyword(t))
      fail("expected a block keyword or 'end', found " + describe(t));
    SourceSpan span = t.span;
    std::string kw = t.text;
    if (m.is_component &&
        (kw == "input" || kw == "output" || kw == "dynamics")) {
      errors_.push_back(make_error(
          "E0101", "a component may not contain '" + kw + "' blocks", span));
    }
    if (kw == "use") {
      advance();
      UseDecl u;
      u.span = span;
      u.component = ident("component name");
      if (at_kw("as")) {
        advance();
        u.alias = ident("alias name");
      }
      terminator();
      m.uses.push_back(std::move(u));
      return;
    }
    if (kw == "state" || kw == "parameter" || kw == "internal") {
      advance();
      expect(Tok::colon);
      auto decls = declaration_block();
      auto& slot = kw == "state"       ? m.state
                   : kw == "parameter" ? m.parameter
                                       : m.internal;
      if (slot) {
        errors_.push_back(
            make_error("E0101", "duplicate '" + kw + "' block", span));
        for (auto& d : decls) slot->push_back(std::move(d));
      } else {
        slot = std::move(decls);
      }
      terminator();
      return;
    }
    if (kw == "input") {
      advance();
      expect(Tok::colon);
      auto lines = input_block();
      if (m.input) {
        errors_.push_back(make_error("E0101", "duplicate 'input' block", span));
        for (auto& l : lines) m.input->push_back(std::move(l));
      } else if (!m.is_component) {
        m.input = std::move(lines);
      }
      terminator();
      return;
    }
    if (kw == "output") {
      advance();
      expect(Tok::colon);
      OutputDecl o;
      o.span = span;
      if (at_kw("spike")) {
        o.kind = BufferKind::spike;
      } else if (at_kw("current")) {
        o.kind = BufferKind::current;
      } else {
        fail("expected 'spike' or 'current', found " + describe(cur()));
      }
      advance();
      terminator();
      if (!m.is_component) m.outputs.push_back(o);
      return;
    }
    if (kw == "function") {
      FunctionDecl f;
      f.doc = doc_here();
      f.span = span;
      advance();
      f.name = ident("function name");
      f.params = param_list();
      if (!at(Tok::colon)) f.return_type = type_ref();
      expect(Tok::colon);
      f.body = statement_block();
      expect_kw("end");
      terminator();
      m.functions.push_back(std::move(f));
      return;
    }
    // dynamics
    DynamicsDecl d;
    d.doc = doc_here();
    d.span = span;
    advance();
    if (at_kw("timestep")) {
      d.kind = DynamicsKind::timestep;
    } else if (at_kw("minDelay")) {
      d.kind = DynamicsKind::min_delay;
    } else {
      fail("expected 'timestep' or 'minDelay', found " + describe(cur()));
    }
    advance();
    if (at(Tok::lparen)) d.params = param_list();
    expect(Tok::colon);
    d.body = statement_block();
    expect_kw("end");
    terminator();
    if (!m.is_component) m.dynamics.push_back(std::move(d));
  }

  std::vector<Param> param_list() {
    std::vector<Param> params;
    expect(Tok::lparen);
    if (!at(Tok::rparen)) {
      while (true) {
        Param p;
        p.span = cur().span;
        p.name = ident("parameter name");
        p.type = type_ref();
        params.push_back(std::move(p));
        if (!at(Tok::comma)) break;
        advance();
      }
    }
    expect(Tok::rparen);
    return params;
  }

  std::vector<Declaration> declaration_block() {
    std::vector<Declaration> decls;
    while (true) {
      skip_separators();
      if (at_kw("end")) {
        advance();
        return decls;
      }
      if (at(Tok::eof) || (is_block_keyword(cur()) && !at_kw("use")))
        fail("expected 'end', found " + describe(cur()));
      size_t start = pos_;
      try {
        decls.push_back(declaration(true));
      } catch (const Bail&) {
        recover(start);
      }
    }
  }

  Declaration declaration(bool allow_alias) {
    Declaration d;
    d.doc = doc_here();
    d.span = cur().span;
    if (at_kw("alias")) {
      if (!allow_alias) fail("'alias' is not allowed here");
      d.is_alias = true;
      advance();
    }
    d.names.push_back(ident("variable name"));
    while (at(Tok::comma)) {
      advance();
      d.names.push_back(ident("variable name"));
    }
    d.type = type_ref();
    if (at(Tok::assign)) {
      advance();
      d.init = expr();
    }
    if (at(Tok::lbracket)) {
      advance();
      d.guard = expr();
      expect(Tok::rbracket);
    }
    terminator();
    return d;
  }

  TypeRef type_ref() {
    TypeRef t;
    t.span = cur().span;
    t.text = type_product();
    return t;
  }

  std::string type_product() {
    std::string text = type_factor();
    while (at(Tok::star) || at(Tok::slash)) {
      text += cur().text;
      advance();
      text += type_factor();
    }
    return text;
  }

  std::string type_factor() {
    std::string text;
    if (at(Tok::ident)) {
      text = cur().text;
      advance();
    } else if (at(Tok::number)) {
      if (cur().text != "1") fail("only the literal 1 may appear in a unit");
      text = "1";
      advance();
    } else if (at(Tok::lparen)) {
      advance();
      text = "(" + type_product() + ")";
      expect(Tok::rparen);
    } else {
      fail("expected a type or unit, found " + describe(cur()));
    }
    if (at(Tok::power)) {
      advance();
      text += "**";
      if (at(Tok::minus)) {
        text += "-";
        advance();
      }
      if (!at(Tok::number)) fail("expected an integer exponent in unit");
      text += cur().text;
      advance();
    }
    return text;
  }

  std::vector<InputLine> input_block() {
    std::vector<InputLine> lines;
    while (true) {
      skip_separators();
      if (at_kw("end")) {
        advance();
        return lines;
      }
      if (at(Tok::eof)) fail("expected 'end', found " + describe(cur()));
      size_t start = pos_;
      try {
        InputLine l;
        l.span = cur().span;
        l.buffer = ident("buffer name");
        expect(Tok::arrow);
        bool has_kind = false;
        while (true) {
          // Modifier lists may continue on the following line.
          if (at(Tok::newline)) {
            size_t k = pos_;
            while (toks_[k].kind == Tok::newline) ++k;
            const Token& n = toks_[k];
            bool continues = n.kind == Tok::keyword &&
                             (n.text == "inhibitory" || n.text == "excitatory" ||
                              n.text == "spike" || n.text == "current");
            if (!continues || has_kind) break;
            pos_ = k;
          }
          if (at_kw("inhibitory")) {
            l.inhibitory = true;
          } else if (at_kw("excitatory")) {
            l.excitatory = true;
          } else if (at_kw("spike") || at_kw("current")) {
            if (has_kind) fail("input kind given twice");
            l.kind = at_kw("spike") ? BufferKind::spike : BufferKind::current;
            has_kind = true;
          } else {
            break;
          }
          advance();
        }
        if (!has_kind) fail("expected 'spike' or 'current', found " + describe(cur()));
        if (l.kind == BufferKind::current && (l.inhibitory || l.excitatory)) {
          errors_.push_back(make_error(
              "E0101", "inhibitory/excitatory apply only to spike inputs",
              l.span));
        }
        terminator();
        lines.push_back(std::move(l));
      } catch (const Bail&) {
        recover(start);
      }
    }
  }

  Block statement_block() {
    Block body;
    while (true) {
      skip_separators();
      if (at_block_close()) return body;
      size_t start = pos_;
      try {
        body.push_back(statement());
      } catch (const Bail&) {
        recover(start);
      }
    }
  }

  StmtPtr statement() {
    auto s = std::make_shared<Stmt>();
    s->doc = doc_here();
    s->span = cur().span;
    if (at_kw("if")) {
      s->kind = Stmt::Kind::if_chain;
      advance();
      IfBranch b;
      b.span = s->span;
      b.cond = expr();
      expect(Tok::colon);
      b.body = statement_block();
      s->branches.push_back(std::move(b));
      while (at_kw("elif")) {
        IfBranch e;
        e.span = cur().span;
        advance();
        e.cond = expr();
        expect(Tok::colon);
        e.body = statement_block();
        s->branches.push_back(std::move(e));
      }
      if (at_kw("else")) {
        advance();
        expect(Tok::colon);
        s->has_else = true;
        s->else_body = statement_block();
      }
      expect_kw("end");
      terminator();
      return s;
    }
    if (at_kw("return")) {
      s->kind = Stmt::Kind::return_;
      advance();
      if (!at(Tok::newline) && !at(Tok::semicolon) && !at_block_close())
        s->value = expr();
      terminator();
      return s;
    }
    if (at_kw("ODE")) {
      s->kind = Stmt::Kind::ode;
      advance();
      expect(Tok::colon);
      s->ode = ode_body();
      terminator();
      return s;
    }
    if (!at(Tok::ident))
      fail("expected a statement, found " + describe(cur()));
    const Token& next = peek();
    if (next.kind == Tok::ident || next.kind == Tok::comma ||
        (next.kind == Tok::number && next.text == "1")) {
      s->kind = Stmt::Kind::local;
      s->decl = declaration(false);
      s->decl.doc.reset();
      return s;
    }
    ExprPtr target = postfix();
    if (target->kind == Expr::Kind::call) {
      s->kind = Stmt::Kind::call;
      s->value = target;
      terminator();
      return s;
    }
    AssignOp op;
    switch (cur().kind) {
      case Tok::assign: op = AssignOp::set; break;
      case Tok::plus_assign: op = AssignOp::add; break;
      case Tok::minus_assign: op = AssignOp::sub; break;
      case Tok::star_assign: op = AssignOp::mul; break;
      case Tok::slash_assign: op = AssignOp::div; break;
      default:
        fail("expected an assignment or call, found " + describe(cur()));
    }
    advance();
    s->kind = Stmt::Kind::assign;
    s->target = target;
    s->assign_op = op;
    s->value = expr();
    terminator();
    return s;
  }

  OdeBlock ode_body() {
    OdeBlock ode;
    while (true) {
      skip_separators();
      if (at_kw("end")) {
        advance();
        return ode;
      }
      if (at(Tok::eof)) fail("expected 'end' to close 'ODE'");
      size_t start = pos_;
      try {
        auto doc = doc_here();
        SourceSpan span = cur().span;
        if (at_ident("d") && peek().kind == Tok::slash &&
            peek(2).kind == Tok::ident && peek(2).text == "dt") {
          advance();
          advance();
          advance();
          DiffEq eq;
          eq.doc = doc;
          eq.span = span;
          eq.state_var = ident("state variable");
          expect(Tok::eq, "in differential equation");
          eq.rhs = expr();
          terminator();
          ode.equations.push_back(std::move(eq));
        } else {
          ShapeEq sh;
          sh.doc = doc;
          sh.span = span;
          sh.name = ident("shape name or 'd/dt'");
          expect(Tok::eq, "in shape definition");
          sh.kernel = expr();
          if (at_ident("on")) {
            advance();
            sh.buffer = ident("buffer name");
          }
          terminator();
          ode.shapes.push_back(std::move(sh));
        }
      } catch (const Bail&) {
        recover(start);
      }
    }
  }

  // Expressions, loosest to tightest.
  ExprPtr expr() { return or_expr(); }

  ExprPtr or_expr() {
    ExprPtr lhs = and_expr();
    while (at_kw("or")) {
      SourceSpan span = cur().span;
      advance();
      lhs = make_binary(BinaryOp::or_, lhs, and_expr(), span);
    }
    return lhs;
  }

  ExprPtr and_expr() {
    ExprPtr lhs = not_expr();
    while (at_kw("and")) {
      SourceSpan span = cur().span;
      advance();
      lhs = make_binary(BinaryOp::and_, lhs, not_expr(), span);
    }
    return lhs;
  }

  ExprPtr not_expr() {
    if (at_kw("not")) {
      SourceSpan span = cur().span;
      advance();
      return make_unary(UnaryOp::not_, not_expr(), span);
    }
    return comparison();
  }

  ExprPtr comparison() {
    ExprPtr lhs = additive();
    while (true) {
      BinaryOp op;
      switch (cur().kind) {
        case Tok::lt: op = BinaryOp::lt; break;
        case Tok::le: op = BinaryOp::le; break;
        case Tok::eq: op = BinaryOp::eq; break;
        case Tok::ne: op = BinaryOp::ne; break;
        case Tok::ge: op = BinaryOp::ge; break;
        case Tok::gt: op = BinaryOp::gt; break;
        default: return lhs;
      }
      SourceSpan span = cur().span;
      advance();
      lhs = make_binary(op, lhs, additive(), span);
    }
  }

  ExprPtr additive() {
    ExprPtr lhs = multiplicative();
    while (at(Tok::plus) || at(Tok::minus)) {
      BinaryOp op = at(Tok::plus) ? BinaryOp::add : BinaryOp::sub;
      SourceSpan span = cur().span;
      advance();
      lhs = make_binary(op, lhs, multiplicative(), span);
    }
    return lhs;
  }

  ExprPtr multiplicative() {
    ExprPtr lhs = unary();
    while (at(Tok::star) || at(Tok::slash)) {
      BinaryOp op = at(Tok::star) ? BinaryOp::mul : BinaryOp::div;
      SourceSpan span = cur().span;
      advance();
      lhs = make_binary(op, lhs, unary(), span);
    }
    return lhs;
  }

  ExprPtr unary() {
    if (at(Tok::minus)) {
      SourceSpan span = cur().span;
      advance();
      return make_unary(UnaryOp::neg, unary(), span);
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = postfix();
    if (at(Tok::power)) {
      SourceSpan span = cur().span;
      advance();
      // Right associative; the exponent may carry a sign.
      return make_binary(BinaryOp::pow, base, unary(), span);
    }
    return base;
  }

  ExprPtr postfix() {
    SourceSpan span = cur().span;
    if (at(Tok::number)) {
      std::string spelling = cur().text;
      advance();
      std::string unit;
      if (at(Tok::ident) && cur().text != "on") {
        unit = cur().text;
        advance();
      } else if (at(Tok::lparen) &&
                 (peek().kind == Tok::ident || peek().kind == Tok::number)) {
        size_t save = pos_;
        size_t errs = errors_.size();
        try {
          advance();
          unit = "(" + type_product() + ")";
          expect(Tok::rparen);
        } catch (const Bail&) {
          pos_ = save;
          errors_.resize(errs);
          unit.clear();
        }
      }
      return make_number_spelled(spelling, span, unit);
    }
    if (at(Tok::string)) {
      std::string text = cur().text;
      advance();
      return make_string(text, span);
    }
    if (at_kw("true") || at_kw("false")) {
      bool v = at_kw("true");
      advance();
      return make_bool(v, span);
    }
    if (at(Tok::lparen)) {
      advance();
      skip_newlines();
      ExprPtr inner = expr();
      expect(Tok::rparen);
      return make_paren(inner, span);
    }
    if (at(Tok::ident)) {
      std::string name = ident("identifier");
      std::string qualifier;
      if (at(Tok::dot)) {
        advance();
        qualifier = name;
        name = ident("member name");
      }
      if (at(Tok::lparen)) {
        advance();
        std::vector<ExprPtr> args;
        if (!at(Tok::rparen)) {
          while (true) {
            args.push_back(expr());
            if (!at(Tok::comma)) break;
            advance();
          }
        }
        expect(Tok::rparen, "to close argument list");
        return make_call(name, std::move(args), span, qualifier);
      }
      return make_var(name, span, qualifier);
    }
    fail("expected an expression, found " + describe(cur()));
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::string file_;
  ParseOptions options_;
  Diagnostics errors_;
};

}  // namespace

ParseResult parse_file(std::string_view source, const std::string& file,
                       const ParseOptions& options) {
  ParseResult result;
  LexResult lex = tokenize(source, file);
  result.errors = lex.errors;
  Parser p(std::move(lex.tokens), file, options);
  result.model = p.file();
  for (auto& e : p.errors()) result.errors.push_back(std::move(e));
  sort_diagnostics(result.errors);
  return result;
}

ExprParseResult parse_expression(std::string_view source,
                                 const std::string& file,
                                 const ParseOptions& options) {
  ExprParseResult result;
  LexResult lex = tokenize(source, file);
  result.errors = lex.errors;
  Parser p(std::move(lex.tokens), file, options);
  try {
    result.expr = p.expression_only();
  } catch (const Bail&) {
    result.expr = nullptr;
  }
  for (auto& e : p.errors()) result.errors.push_back(std::move(e));
  sort_diagnostics(result.errors);
  return result;
}

}  // namespace nestml

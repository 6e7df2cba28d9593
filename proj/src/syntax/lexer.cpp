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

#include "nestml/syntax/lexer.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace nestml {

namespace {

constexpr std::array<std::string_view, 30> kKeywords = {
    "neuron",     "component", "import",   "use",     "as",
    "state",      "parameter", "internal", "input",   "output",
    "dynamics",   "function",  "alias",    "end",     "if",
    "elif",       "else",      "and",      "or",      "not",
    "return",     "ODE",       "spike",    "current", "inhibitory",
    "excitatory", "timestep",  "minDelay", "true",    "false"};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// A line ending in one of these continues on the next line.
bool continues_after(const Token& t) {
  switch (t.kind) {
    case Tok::plus: case Tok::minus: case Tok::star: case Tok::slash:
    case Tok::power: case Tok::comma: case Tok::assign: case Tok::eq:
    case Tok::ne: case Tok::lt: case Tok::le: case Tok::gt: case Tok::ge:
    case Tok::plus_assign: case Tok::minus_assign: case Tok::star_assign:
    case Tok::slash_assign:
      return true;
    case Tok::keyword:
      return t.text == "and" || t.text == "or" || t.text == "not";
    default:
      return false;
  }
}

// A line starting with one of these continues the previous line.
bool continues_before(const Token& t) {
  switch (t.kind) {
    case Tok::plus: case Tok::minus: case Tok::star: case Tok::slash:
    case Tok::power: case Tok::eq: case Tok::ne: case Tok::lt: case Tok::le:
    case Tok::gt: case Tok::ge:
      return true;
    case Tok::keyword:
      return t.text == "and" || t.text == "or";
    default:
      return false;
  }
}

class Lexer {
 public:
  Lexer(std::string_view src, const std::string& file) : src_(src), file_(file) {}

  LexResult run() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        newline_here();
        advance();
        line_has_code_ = false;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
        advance();
        continue;
      }
      if (c == '#') {
        comment();
        continue;
      }
      if (c == '"') {
        string_literal();
        continue;
      }
      if (is_digit(c) ||
          (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
        number();
        continue;
      }
      if (is_ident_start(c)) {
        identifier();
        continue;
      }
      punct();
    }
    if (!result_.tokens.empty() && result_.tokens.back().kind == Tok::newline)
      result_.tokens.pop_back();
    return std::move(result_);
  }

 private:
  SourceSpan span_here() const { return SourceSpan{file_, line_, col_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void attach_doc(Token& t) {
    if (has_pending_doc_) {
      t.doc = pending_doc_;
      t.has_doc = true;
      pending_doc_.clear();
      has_pending_doc_ = false;
    }
  }

  void emit(Tok kind, std::string text, SourceSpan span) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.span = std::move(span);
    // Leading operator joins this line to the previous one.
    if (!result_.tokens.empty() && result_.tokens.back().kind == Tok::newline &&
        !line_has_code_ && continues_before(t) &&
        result_.tokens.size() >= 2) {
      result_.tokens.pop_back();
    }
    attach_doc(t);
    switch (kind) {
      case Tok::lparen: case Tok::lbracket: ++depth_; break;
      case Tok::rparen: case Tok::rbracket: if (depth_ > 0) --depth_; break;
      default: break;
    }
    line_has_code_ = true;
    result_.tokens.push_back(std::move(t));
  }

  void newline_here() {
    if (result_.tokens.empty()) return;
    const Token& last = result_.tokens.back();
    if (last.kind == Tok::newline) return;
    if (depth_ > 0 || continues_after(last)) return;
    Token t;
    t.kind = Tok::newline;
    t.span = span_here();
    result_.tokens.push_back(std::move(t));
  }

  void comment() {
    size_t start = pos_ + 1;
    while (pos_ < src_.size() && src_[pos_] != '\n') advance();
    if (line_has_code_) return;
    std::string_view body = src_.substr(start, pos_ - start);
    if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
    while (!body.empty() && (body.back() == ' ' || body.back() == '\r'))
      body.remove_suffix(1);
    if (has_pending_doc_) pending_doc_ += '\n';
    pending_doc_ += body;
    has_pending_doc_ = true;
  }

  void string_literal() {
    SourceSpan span = span_here();
    advance();
    std::string value;
    while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
      char c = src_[pos_];
      if (c == '\\' && pos_ + 1 < src_.size()) {
        advance();
        char e = src_[pos_];
        value += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        advance();
        continue;
      }
      value += c;
      advance();
    }
    if (pos_ >= src_.size() || src_[pos_] != '"') {
      result_.errors.push_back(
          make_error("E0102", "unterminated string literal", span));
      return;
    }
    advance();
    emit(Tok::string, std::move(value), span);
  }

  void number() {
    SourceSpan span = span_here();
    size_t start = pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      size_t save = pos_;
      int save_col = col_;
      size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && is_digit(src_[look])) {
        while (pos_ < look) advance();
        while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
      } else {
        pos_ = save;
        col_ = save_col;
      }
    }
    emit(Tok::number, std::string(src_.substr(start, pos_ - start)), span);
  }

  void identifier() {
    SourceSpan span = span_here();
    size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
    std::string word(src_.substr(start, pos_ - start));
    Tok kind = is_keyword(word) ? Tok::keyword : Tok::ident;
    emit(kind, std::move(word), span);
  }

  void punct() {
    SourceSpan span = span_here();
    char c = src_[pos_];
    char n = pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0';
    auto two = [&](Tok kind, const char* text) {
      advance();
      advance();
      emit(kind, text, span);
    };
    auto one = [&](Tok kind) {
      std::string text(1, c);
      advance();
      emit(kind, std::move(text), span);
    };
    switch (c) {
      case '(': one(Tok::lparen); return;
      case ')': one(Tok::rparen); return;
      case '[': one(Tok::lbracket); return;
      case ']': one(Tok::rbracket); return;
      case ',': one(Tok::comma); return;
      case ':': one(Tok::colon); return;
      case ';': one(Tok::semicolon); return;
      case '.': one(Tok::dot); return;
      case '=':
        if (n == '=') return two(Tok::eq, "==");
        return one(Tok::assign);
      case '!':
        if (n == '=') return two(Tok::ne, "!=");
        break;
      case '<':
        if (n == '=') return two(Tok::le, "<=");
        if (n == '-') return two(Tok::arrow, "<-");
        return one(Tok::lt);
      case '>':
        if (n == '=') return two(Tok::ge, ">=");
        return one(Tok::gt);
      case '+':
        if (n == '=') return two(Tok::plus_assign, "+=");
        return one(Tok::plus);
      case '-':
        if (n == '=') return two(Tok::minus_assign, "-=");
        return one(Tok::minus);
      case '*':
        if (n == '*') return two(Tok::power, "**");
        if (n == '=') return two(Tok::star_assign, "*=");
        return one(Tok::star);
      case '/':
        if (n == '=') return two(Tok::slash_assign, "/=");
        return one(Tok::slash);
      default:
        break;
    }
    std::string shown;
    if (static_cast<unsigned char>(c) >= 0x20 &&
        static_cast<unsigned char>(c) < 0x7f) {
      shown = std::string("'") + c + "'";
    } else {
      char buf[8];
      std::snprintf(buf, sizeof buf, "0x%02x", static_cast<unsigned char>(c));
      shown = buf;
    }
    result_.errors.push_back(
        make_error("E0102", "illegal character " + shown, span));
    advance();
    // Skip UTF-8 continuation bytes of the same character.
    while (pos_ < src_.size() &&
           (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) {
      ++pos_;
    }
  }

  std::string_view src_;
  std::string file_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int depth_ = 0;
  bool line_has_code_ = false;
  std::string pending_doc_;
  bool has_pending_doc_ = false;
  LexResult result_;
};

}  // namespace

bool is_keyword(std::string_view word) {
  for (auto k : kKeywords)
    if (k == word) return true;
  return false;
}

std::string_view token_name(Tok kind) {
  switch (kind) {
    case Tok::ident: return "identifier";
    case Tok::keyword: return "keyword";
    case Tok::number: return "number";
    case Tok::string: return "string";
    case Tok::newline: return "newline";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbracket: return "'['";
    case Tok::rbracket: return "']'";
    case Tok::comma: return "','";
    case Tok::colon: return "':'";
    case Tok::semicolon: return "';'";
    case Tok::dot: return "'.'";
    case Tok::assign: return "'='";
    case Tok::plus_assign: return "'+='";
    case Tok::minus_assign: return "'-='";
    case Tok::star_assign: return "'*='";
    case Tok::slash_assign: return "'/='";
    case Tok::eq: return "'=='";
    case Tok::ne: return "'!='";
    case Tok::lt: return "'<'";
    case Tok::le: return "'<='";
    case Tok::gt: return "'>'";
    case Tok::ge: return "'>='";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::star: return "'*'";
    case Tok::slash: return "'/'";
    case Tok::power: return "'**'";
    case Tok::arrow: return "'<-'";
    case Tok::eof: return "end of input";
  }
  return "?";
}

LexResult tokenize(std::string_view source, const std::string& file) {
  return Lexer(source, file).run();
}

}  // namespace nestml

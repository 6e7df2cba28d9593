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

#ifndef NESTML_SYNTAX_DIAGNOSTIC_HPP
#define NESTML_SYNTAX_DIAGNOSTIC_HPP

#include <string>
#include <vector>

namespace nestml {

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;

  bool operator==(const SourceSpan&) const = default;
};

enum class Severity { error, warning };

// Codes are stable; messages are not.
//   E01xx syntax, E02xx symbols, E03xx typing, E04xx context conditions,
//   E05xx/W05xx solver and transform, W03xx typing warnings.
struct Diagnostic {
  std::string code;
  Severity severity = Severity::error;
  std::string message;
  SourceSpan span;

  bool operator==(const Diagnostic&) const = default;
};

using Diagnostics = std::vector<Diagnostic>;

Diagnostic make_error(std::string code, std::string message, SourceSpan span);
Diagnostic make_warning(std::string code, std::string message,
                        SourceSpan span);

bool has_errors(const Diagnostics& diags);

// Stable order by (file, line, column, code, message).
void sort_diagnostics(Diagnostics& diags);

// `file:line:col: error[E0403]: message`
std::string format_diagnostic(const Diagnostic& d);

}  // namespace nestml

#endif  // NESTML_SYNTAX_DIAGNOSTIC_HPP

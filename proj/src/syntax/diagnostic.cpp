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

#include "nestml/syntax/diagnostic.hpp"

#include <algorithm>
#include <tuple>

namespace nestml {

Diagnostic make_error(std::string code, std::string message, SourceSpan span) {
  return Diagnostic{std::move(code), Severity::error, std::move(message),
                    std::move(span)};
}

Diagnostic make_warning(std::string code, std::string message,
                        SourceSpan span) {
  return Diagnostic{std::move(code), Severity::warning, std::move(message),
                    std::move(span)};
}

bool has_errors(const Diagnostics& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
    return d.severity == Severity::error;
  });
}

void sort_diagnostics(Diagnostics& diags) {
  std::stable_sort(diags.begin(), diags.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::tie(a.span.file, a.span.line, a.span.column,
                                     a.code, a.message) <
                            std::tie(b.span.file, b.span.line, b.span.column,
                                     b.code, b.message);
                   });
  diags.erase(std::unique(diags.begin(), diags.end()), diags.end());
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = d.span.file.empty() ? "<input>" : d.span.file;
  out += ":" + std::to_string(d.span.line) + ":" +
         std::to_string(d.span.column) + ": ";
  out += d.severity == Severity::error ? "error" : "warning";
  out += "[" + d.code + "]: " + d.message;
  return out;
}

}  // namespace nestml

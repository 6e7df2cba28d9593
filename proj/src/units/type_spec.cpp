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

#include "nestml/units/type_spec.hpp"

namespace nestml {

TypeSpec TypeSpec::of_unit(const UnitType& u) {
  if (u.dimensionless() && u.scale == 0) return real();
  TypeSpec t;
  t.kind = Kind::unit;
  t.unit = u;
  return t;
}

bool TypeSpec::is_numeric() const {
  return kind == Kind::integer || kind == Kind::real || kind == Kind::unit;
}

TypeSpec resolve_type(std::string_view text) {
  if (text == "integer") return TypeSpec::integer();
  if (text == "real") return TypeSpec::real();
  if (text == "string") return TypeSpec::string();
  if (text == "boolean") return TypeSpec::boolean();
  if (text == "void") return TypeSpec::void_();
  return TypeSpec::of_unit(parse_unit(text));
}

std::string to_string(const TypeSpec& t) {
  switch (t.kind) {
    case TypeSpec::Kind::integer: return "integer";
    case TypeSpec::Kind::real: return "real";
    case TypeSpec::Kind::string: return "string";
    case TypeSpec::Kind::boolean: return "boolean";
    case TypeSpec::Kind::void_: return "void";
    case TypeSpec::Kind::unit: return pretty_unit(t.unit);
    case TypeSpec::Kind::buffer:
      return t.buffer == BufferKind::spike ? "spike buffer" : "current buffer";
    case TypeSpec::Kind::error: return "<error>";
  }
  return "?";
}

}  // namespace nestml

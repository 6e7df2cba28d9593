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

#ifndef NESTML_UNITS_UNIT_TYPE_HPP
#define NESTML_UNITS_UNIT_TYPE_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>
#include <string_view>

namespace nestml {

// Exponents over (kg, m, s, A, K, mol, cd).
struct Dimension {
  std::array<int, 7> exponents{};

  bool dimensionless() const;
  bool operator==(const Dimension&) const = default;
};

Dimension operator*(const Dimension& a, const Dimension& b);
Dimension operator/(const Dimension& a, const Dimension& b);

// A dimension plus a power of ten relative to the coherent SI unit.
struct UnitType {
  Dimension dimension;
  int scale = 0;

  bool dimensionless() const { return dimension.dimensionless(); }
  bool operator==(const UnitType&) const = default;
};

class UnitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

UnitType unit_multiply(const UnitType& a, const UnitType& b);
UnitType unit_divide(const UnitType& a, const UnitType& b);
UnitType unit_power(const UnitType& a, int n);

// Accepts atoms (`mV`, `pF`, `ms`, `1`), `*`, `/`, `**int` and parentheses.
UnitType parse_unit(std::string_view text);

// Text that parse_unit maps back to the same unit.
std::string pretty_unit(const UnitType& u);

// Like pretty_unit, but first tries products of at most three of the
// `preferred` atoms (for example the units a model declares), so that
// mV/pA reads as written rather than as GOhm.
std::string pretty_unit(const UnitType& u,
                        const std::vector<std::string>& preferred);

// Power of ten 10^(from.scale - to.scale), correctly rounded.
double conversion_factor(const UnitType& from, const UnitType& to);

// The exponent of conversion_factor; sums of exponents are exact where
// products of rounded doubles may not be.
int conversion_exponent(const UnitType& from, const UnitType& to);

// Correctly rounded 10^n.
double pow10(int n);

}  // namespace nestml

#endif  // NESTML_UNITS_UNIT_TYPE_HPP

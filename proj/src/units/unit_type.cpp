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

#include "nestml/units/unit_type.hpp"

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

namespace nestml {

namespace {

struct BaseUnit {
  std::string_view symbol;
  Dimension dim;
  int scale;
  bool printable;
};

//                         kg  m   s   A  K mol cd
const BaseUnit kBases[] = {
    {"V", {{1, 2, -3, -1, 0, 0, 0}}, 0, true},
    {"A", {{0, 0, 0, 1, 0, 0, 0}}, 0, true},
    {"s", {{0, 0, 1, 0, 0, 0, 0}}, 0, true},
    {"F", {{-1, -2, 4, 2, 0, 0, 0}}, 0, true},
    {"S", {{-1, -2, 3, 2, 0, 0, 0}}, 0, true},
    {"Ohm", {{1, 2, -3, -2, 0, 0, 0}}, 0, true},
    {"Hz", {{0, 0, -1, 0, 0, 0, 0}}, 0, false},
    {"g", {{1, 0, 0, 0, 0, 0, 0}}, -3, true},
    {"m", {{0, 1, 0, 0, 0, 0, 0}}, 0, true},
    {"K", {{0, 0, 0, 0, 1, 0, 0}}, 0, true},
    {"mol", {{0, 0, 0, 0, 0, 1, 0}}, 0, true},
    {"cd", {{0, 0, 0, 0, 0, 0, 1}}, 0, true},
};

struct Prefix {
  std::string_view symbol;
  int exponent;
};

// `da` precedes `d` so the longer prefix wins.
const Prefix kPrefixes[] = {
    {"da", 1}, {"f", -15}, {"p", -12}, {"n", -9}, {"u", -6},
    {"m", -3}, {"c", -2},  {"d", -1},  {"h", 2},  {"k", 3},
    {"M", 6},  {"G", 9},   {"T", 12},
};

UnitType resolve_atom(std::string_view atom) {
  for (const auto& b : kBases)
    if (b.symbol == atom) return UnitType{b.dim, b.scale};
  for (const auto& p : kPrefixes) {
    if (atom.size() <= p.symbol.size() || atom.substr(0, p.symbol.size()) != p.symbol)
      continue;
    std::string_view rest = atom.substr(p.symbol.size());
    for (const auto& b : kBases)
      if (b.symbol == rest) return UnitType{b.dim, b.scale + p.exponent};
  }
  throw UnitError("unknown unit '" + std::string(atom) + "'");
}

class UnitParser {
 public:
  explicit UnitParser(std::string_view text) : s_(text) {}

  UnitType run() {
    skip_ws();
    if (pos_ == s_.size()) throw UnitError("empty unit");
    UnitType u = product();
    skip_ws();
    if (pos_ != s_.size())
      throw UnitError("unexpected '" + std::string(s_.substr(pos_)) +
                      "' in unit");
    return u;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  UnitType product() {
    UnitType u = factor();
    while (true) {
      skip_ws();
      if (pos_ >= s_.size()) return u;
      if (s_[pos_] == '*' && !(pos_ + 1 < s_.size() && s_[pos_ + 1] == '*')) {
        ++pos_;
        u = unit_multiply(u, factor());
      } else if (s_[pos_] == '/') {
        ++pos_;
        u = unit_divide(u, factor());
      } else {
        return u;
      }
    }
  }

  UnitType factor() {
    skip_ws();
    if (pos_ >= s_.size()) throw UnitError("unit ends unexpectedly");
    UnitType u;
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      u = product();
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != ')') throw UnitError("missing ')' in unit");
      ++pos_;
    } else if (c == '1' &&
               (pos_ + 1 == s_.size() ||
                !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      u = resolve_atom(s_.substr(start, pos_ - start));
    } else {
      throw UnitError("unexpected '" + std::string(1, c) + "' in unit");
    }
    skip_ws();
    if (pos_ + 1 < s_.size() && s_[pos_] == '*' && s_[pos_ + 1] == '*') {
      pos_ += 2;
      skip_ws();
      size_t start = pos_;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      std::string num(s_.substr(start, pos_ - start));
      if (num.empty() || num == "-" || num == "+")
        throw UnitError("unit exponent must be an integer");
      u = unit_power(u, std::atoi(num.c_str()));
    }
    return u;
  }

  std::string_view s_;
  size_t pos_ = 0;
};

struct Named {
  std::string text;
  UnitType unit;
};

const std::vector<Named>& printable_atoms() {
  static const std::vector<Named> atoms = [] {
    std::vector<Named> out;
    for (const auto& b : kBases) {
      if (!b.printable) continue;
      out.push_back({std::string(b.symbol), UnitType{b.dim, b.scale}});
    }
    for (const auto& b : kBases) {
      if (!b.printable) continue;
      for (const auto& p : kPrefixes) {
        std::string text = std::string(p.symbol) + std::string(b.symbol);
        // Only spellings that resolve back to this prefix/base pair.
        UnitType want{b.dim, b.scale + p.exponent};
        try {
          if (resolve_atom(text) == want) out.push_back({text, want});
        } catch (const UnitError&) {
        }
      }
    }
    return out;
  }();
  return atoms;
}

std::string scale_pairs(int scale) {
  // Dimensionless factors such as (ms/s) carry the leftover power of ten.
  static const Prefix steps[] = {{"T", 12}, {"G", 9}, {"M", 6}, {"k", 3},
                                 {"h", 2},  {"da", 1}, {"f", -15}, {"p", -12},
                                 {"n", -9}, {"u", -6}, {"m", -3}, {"c", -2},
                                 {"d", -1}};
  std::string out;
  while (scale != 0) {
    for (const auto& p : steps) {
      if ((scale > 0 && p.exponent > 0 && p.exponent <= scale) ||
          (scale < 0 && p.exponent < 0 && p.exponent >= scale)) {
        if (!out.empty()) out += "*";
        out += "(" + std::string(p.symbol) + "s/s)";
        scale -= p.exponent;
        break;
      }
    }
  }
  return out;
}

}  // namespace

bool Dimension::dimensionless() const {
  for (int e : exponents)
    if (e != 0) return false;
  return true;
}

Dimension operator*(const Dimension& a, const Dimension& b) {
  Dimension d;
  for (size_t i = 0; i < 7; ++i) d.exponents[i] = a.exponents[i] + b.exponents[i];
  return d;
}

Dimension operator/(const Dimension& a, const Dimension& b) {
  Dimension d;
  for (size_t i = 0; i < 7; ++i) d.exponents[i] = a.exponents[i] - b.exponents[i];
  return d;
}

UnitType unit_multiply(const UnitType& a, const UnitType& b) {
  return UnitType{a.dimension * b.dimension, a.scale + b.scale};
}

UnitType unit_divide(const UnitType& a, const UnitType& b) {
  return UnitType{a.dimension / b.dimension, a.scale - b.scale};
}

UnitType unit_power(const UnitType& a, int n) {
  UnitType u;
  for (size_t i = 0; i < 7; ++i) u.dimension.exponents[i] = a.dimension.exponents[i] * n;
  u.scale = a.scale * n;
  return u;
}

UnitType parse_unit(std::string_view text) { return UnitParser(text).run(); }

std::string pretty_unit(const UnitType& u) {
  if (u.dimensionless()) return u.scale == 0 ? "1" : scale_pairs(u.scale);
  const auto& atoms = printable_atoms();
  for (const auto& a : atoms)
    if (a.unit == u) return a.text;
  for (const auto& den : atoms)
    if (unit_divide(UnitType{}, den.unit) == u) return "1/" + den.text;
  for (const auto& num : atoms)
    for (const auto& den : atoms)
      if (unit_divide(num.unit, den.unit) == u) return num.text + "/" + den.text;
  // Base SI product with the remaining scale as dimensionless factors.
  static const char* names[] = {"kg", "m", "s", "A", "K", "mol", "cd"};
  std::string num, den;
  for (size_t i = 0; i < 7; ++i) {
    int e = u.dimension.exponents[i];
    if (e == 0) continue;
    std::string& side = e > 0 ? num : den;
    if (!side.empty()) side += "*";
    side += names[i];
    if (std::abs(e) != 1) side += "**" + std::to_string(std::abs(e));
  }
  std::string out = num.empty() ? "1" : num;
  if (!den.empty()) out += "/(" + den + ")";
  if (u.scale != 0) out += "*" + scale_pairs(u.scale);
  return out;
}

std::string pretty_unit(const UnitType& u,
                        const std::vector<std::string>& preferred) {
  std::vector<std::pair<std::string, UnitType>> atoms;
  for (const auto& text : preferred) {
    try {
      UnitType a = parse_unit(text);
      if (!a.dimensionless()) atoms.push_back({text, a});
    } catch (const UnitError&) {
    }
  }
  static const int kExps[] = {1, -1, 2, -2};
  auto power = [](const std::string& t, int e) {
    return std::abs(e) == 1 ? t : t + "**" + std::to_string(std::abs(e));
  };
  auto render = [&](const std::vector<std::pair<size_t, int>>& picks) {
    std::vector<std::string> num, den;
    for (const auto& [i, e] : picks) {
      (e > 0 ? num : den).push_back(power(atoms[i].first, e));
    }
    auto join = [](const std::vector<std::string>& parts) {
      std::string out;
      for (const auto& p : parts) out += (out.empty() ? "" : "*") + p;
      return out;
    };
    std::string out = num.empty() ? "1" : join(num);
    if (den.size() == 1) out += "/" + den[0];
    if (den.size() > 1) out += "/(" + join(den) + ")";
    return out;
  };
  if (!u.dimensionless()) {
    const size_t n = atoms.size();
    for (size_t i = 0; i < n; ++i) {
      for (int ei : kExps) {
        if (unit_power(atoms[i].second, ei) == u) return render({{i, ei}});
      }
    }
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        for (int ei : kExps) {
          for (int ej : kExps) {
            UnitType p = unit_multiply(unit_power(atoms[i].second, ei),
                                       unit_power(atoms[j].second, ej));
            if (p == u) return render({{i, ei}, {j, ej}});
          }
        }
      }
    }
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        for (size_t k = j + 1; k < n; ++k) {
          for (int ei : kExps) {
            for (int ej : kExps) {
              for (int ek : kExps) {
                UnitType p = unit_multiply(
                    unit_multiply(unit_power(atoms[i].second, ei),
                                  unit_power(atoms[j].second, ej)),
                    unit_power(atoms[k].second, ek));
                if (p == u) return render({{i, ei}, {j, ej}, {k, ek}});
              }
            }
          }
        }
      }
    }
  }
  return pretty_unit(u);
}

double pow10(int n) {
  std::string s = "1e" + std::to_string(n);
  return std::strtod(s.c_str(), nullptr);
}

int conversion_exponent(const UnitType& from, const UnitType& to) {
  if (!(from.dimension == to.dimension))
    throw UnitError("cannot convert between '" + pretty_unit(from) + "' and '" +
                    pretty_unit(to) + "'");
  return from.scale - to.scale;
}

double conversion_factor(const UnitType& from, const UnitType& to) {
  return pow10(conversion_exponent(from, to));
}

}  // namespace nestml

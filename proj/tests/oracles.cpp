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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace nestml::testing {

namespace {

using LMatrix = std::vector<std::vector<long double>>;

LMatrix multiply(const LMatrix& a, const LMatrix& b) {
  const size_t n = a.size();
  LMatrix c(n, std::vector<long double>(n, 0.0L));
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < n; ++k) {
      for (size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

// Gaussian elimination with partial pivoting; false when singular.
bool solve(std::vector<std::vector<double>> a, std::vector<double> b,
           std::vector<double>& x) {
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (std::fabs(a[pivot][col]) < 1e-300) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (size_t r = col + 1; r < n; ++r) {
      double f = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (size_t i = n; i-- > 0;) {
    double s = b[i];
    for (size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return true;
}

}  // namespace

double kernel_residual(const std::function<double(int, double)>& deriv, int m,
                       std::vector<double>* coefficients) {
  std::vector<std::vector<double>> a(m, std::vector<double>(m));
  std::vector<double> b(m);
  for (int r = 0; r < m; ++r) {
    double t = 0.3 + 0.7 * r;
    for (int i = 0; i < m; ++i) a[r][i] = deriv(i, t);
    b[r] = deriv(m, t);
  }
  std::vector<double> c;
  if (!solve(a, b, c)) return INFINITY;
  if (coefficients != nullptr) *coefficients = c;
  double worst = 0.0;
  for (double t : {0.45, 1.7, 2.9, 4.4, 6.1}) {
    double lhs = deriv(m, t);
    double rhs = 0.0;
    for (int i = 0; i < m; ++i) rhs += c[i] * deriv(i, t);
    worst = std::max(worst, std::fabs(lhs - rhs) / std::max(std::fabs(lhs), 1e-300));
  }
  return worst;
}

Matrix expm_oracle(const Matrix& m) {
  const size_t n = m.size();
  long double norm = 0.0L;
  for (const auto& row : m) {
    long double s = 0.0L;
    for (double v : row) s += std::fabs(static_cast<long double>(v));
    norm = std::max(norm, s);
  }
  int squarings = 0;
  while (norm > 0.125L) {
    norm /= 2.0L;
    ++squarings;
  }
  LMatrix a(n, std::vector<long double>(n));
  const long double scale = std::ldexp(1.0L, -squarings);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) a[i][j] = m[i][j] * scale;
  }
  LMatrix result(n, std::vector<long double>(n, 0.0L));
  LMatrix term(n, std::vector<long double>(n, 0.0L));
  for (size_t i = 0; i < n; ++i) result[i][i] = term[i][i] = 1.0L;
  for (int k = 1; k <= 30; ++k) {
    term = multiply(term, a);
    for (auto& row : term) {
      for (auto& v : row) v /= k;
    }
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) result[i][j] += term[i][j];
    }
  }
  for (int s = 0; s < squarings; ++s) result = multiply(result, result);
  Matrix out(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) out[i][j] = static_cast<double>(result[i][j]);
  }
  return out;
}

}  // namespace nestml::testing

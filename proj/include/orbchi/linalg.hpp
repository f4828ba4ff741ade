#pragma once

#include <vector>

#include "orbchi/errors.hpp"
#include "orbchi/rational.hpp"

namespace orbchi {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Exact rank over the rationals by Gaussian elimination. Pivot rows are
/// chosen by smallest absolute numerator (ties by index) to keep the exact
/// fractions small.
inline int exact_rank(RationalMatrix m) {
  if (m.empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int rank = 0;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pivot = -1;
    for (int r = row; r < rows; ++r) {
      if (m[r][col].is_zero()) continue;
      if (pivot < 0 || m[r][col].abs_num() < m[pivot][col].abs_num()) pivot = r;
    }
    if (pivot < 0) continue;
    std::swap(m[row], m[pivot]);
    for (int r = row + 1; r < rows; ++r) {
      if (m[r][col].is_zero()) continue;
      Rational f = m[r][col] / m[row][col];
      for (int c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
    }
    ++row;
    ++rank;
  }
  return rank;
}

/// Solves a square system A x = b exactly. Throws NoSolutionError when the
/// matrix is singular.
inline std::vector<Rational> solve_square(RationalMatrix a, std::vector<Rational> b) {
  const int n = static_cast<int>(a.size());
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != n) throw DomainError("matrix is not square");
  if (static_cast<int>(b.size()) != n) throw DomainError("rhs length mismatch");
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      if (pivot < 0 || a[r][col].abs_num() < a[pivot][col].abs_num()) pivot = r;
    }
    if (pivot < 0) throw NoSolutionError("singular system (no pivot in column)");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      Rational f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Rational> x(n);
  for (int r = n - 1; r >= 0; --r) {
    Rational acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

}  // namespace orbchi

#pragma once
#ifndef TRISECANT_LINALG_HPP
#define TRISECANT_LINALG_HPP

// Small dense Gaussian elimination over any coefficient field. Exact fields
// pivot on nonzero entries; floating fields use partial pivoting with a
// relative tolerance.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "trisecant/numeric.hpp"

namespace trisecant {

template <class C>
using DenseMatrix = std::vector<std::vector<C>>;

namespace detail {

template <class C>
bool negligible(const C& c, double threshold) {
  if constexpr (Field<C>::exact) {
    return Field<C>::is_zero(c);
  } else {
    return Field<C>::magnitude(c) <= threshold;
  }
}

template <class C>
double max_magnitude(const DenseMatrix<C>& a) {
  double m = 0.0;
  for (const auto& row : a)
    for (const auto& x : row) m = std::max(m, Field<C>::magnitude(x));
  return m;
}

}  // namespace detail

/// Row-reduces `a` in place to reduced row echelon form; returns pivot columns.
template <class C>
std::vector<std::size_t> row_reduce(DenseMatrix<C>& a, double rel_tol = 1e-12) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();
  const double threshold = rel_tol * std::max(1.0, detail::max_magnitude(a));
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = rows;
    double best_mag = -1.0;
    for (std::size_t i = r; i < rows; ++i) {
      if (detail::negligible(a[i][c], threshold)) continue;
      if constexpr (Field<C>::exact) {
        best = i;
        break;
      } else {
        const double mag = Field<C>::magnitude(a[i][c]);
        if (mag > best_mag) {
          best_mag = mag;
          best = i;
        }
      }
    }
    if (best == rows) continue;
    std::swap(a[r], a[best]);
    const C inv = C(Field<C>::from_int(1)) / a[r][c];
    for (auto& x : a[r]) x = x * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || Field<C>::is_zero(a[i][c])) continue;
      const C f = a[i][c];
      for (std::size_t k = 0; k < cols; ++k) a[i][k] = a[i][k] - f * a[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class C>
std::size_t matrix_rank(DenseMatrix<C> a, double rel_tol = 1e-12) {
  return row_reduce(a, rel_tol).size();
}

/// Basis of the right kernel {v : a v = 0}, one vector per free column.
template <class C>
std::vector<std::vector<C>> nullspace(DenseMatrix<C> a, std::size_t cols, double rel_tol = 1e-12) {
  if (a.empty()) {
    std::vector<std::vector<C>> basis;
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<C> v(cols, Field<C>::from_int(0));
      v[j] = Field<C>::from_int(1);
      basis.push_back(std::move(v));
    }
    return basis;
  }
  const auto pivots = row_reduce(a, rel_tol);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<C>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<C> v(cols, Field<C>::from_int(0));
    v[free] = Field<C>::from_int(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace trisecant

#endif  // TRISECANT_LINALG_HPP

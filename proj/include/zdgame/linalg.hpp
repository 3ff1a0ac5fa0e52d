#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "zdgame/errors.hpp"
#include "zdgame/numeric.hpp"

namespace zdgame {

template <typename T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T(0)) {}

  T& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
};

template <typename T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const T& aik = a(i, k);
      if (aik == T(0)) continue;
      for (std::size_t j = 0; j < b.cols; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

// Gaussian elimination; exact types pivot on any nonzero entry, floats on the
// largest magnitude in the column.
template <typename T>
T determinant(Matrix<T> m) {
  if (m.rows != m.cols) throw InvalidInput("determinant needs a square matrix");
  const std::size_t n = m.rows;
  T det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    if constexpr (is_exact_v<T>) {
      while (pivot < n && m(pivot, col) == T(0)) ++pivot;
      if (pivot == n) return T(0);
    } else {
      for (std::size_t r = col + 1; r < n; ++r)
        if (abs_value(m(r, col)) > abs_value(m(pivot, col))) pivot = r;
      if (m(pivot, col) == T(0)) return T(0);
    }
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c)
        std::swap(m(pivot, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m(r, col) == T(0)) continue;
      T factor = m(r, col) / m(col, col);
      m(r, col) = T(0);
      for (std::size_t c = col + 1; c < n; ++c)
        m(r, c) -= factor * m(col, c);
    }
  }
  return det;
}

// Solves A x = b; throws Degenerate on a singular system.
template <typename T>
std::vector<T> solve_linear(Matrix<T> a, std::vector<T> b) {
  if (a.rows != a.cols || b.size() != a.rows)
    throw InvalidInput("solve_linear: shape mismatch");
  const std::size_t n = a.rows;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    if constexpr (is_exact_v<T>) {
      while (pivot < n && a(pivot, col) == T(0)) ++pivot;
      if (pivot == n) throw Degenerate("singular linear system");
    } else {
      for (std::size_t r = col + 1; r < n; ++r)
        if (abs_value(a(r, col)) > abs_value(a(pivot, col))) pivot = r;
      if (a(pivot, col) == T(0)) throw Degenerate("singular linear system");
    }
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col) == T(0)) continue;
      T factor = a(r, col) / a(col, col);
      a(r, col) = T(0);
      for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= factor * a(col, c);
      b[r] -= factor * b[col];
    }
  }
  std::vector<T> x(n, T(0));
  for (std::size_t i = n; i-- > 0;) {
    T acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a(i, c) * x[c];
    x[i] = acc / a(i, i);
  }
  return x;
}

template <typename T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace zdgame

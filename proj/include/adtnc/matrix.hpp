#pragma once

#include <cassert>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adtnc/error.hpp"

namespace adtnc {

/* Dense row-major matrix, generic over any exact field element type that
 * provides +, -, *, unary -, is_zero(), inverse() and ==. The same
 * elimination code therefore serves GF(q) entries and rational functions in
 * the delay variable. Pivoting is frozen to "first nonzero entry scanning
 * rows top-down", so every elimination result is deterministic.
 */
template <class T>
class Matrix {
 public:
  Matrix(int rows, int cols, const T& fill)
      : r_(rows), c_(cols), a_(size_t(rows) * size_t(cols), fill) {
    if (rows < 0 || cols < 0) throw UsageError("negative matrix shape");
  }

  static Matrix identity(int n, const T& zero, const T& one) {
    Matrix m(n, n, zero);
    for (int i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }

  T& operator()(int i, int j) {
    assert(i >= 0 && i < r_ && j >= 0 && j < c_);
    return a_[size_t(i) * c_ + j];
  }
  const T& operator()(int i, int j) const {
    assert(i >= 0 && i < r_ && j >= 0 && j < c_);
    return a_[size_t(i) * c_ + j];
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw UsageError("matrix product shape mismatch");
    Matrix out(a.r_, b.c_, a.zero_entry(b));
    for (int i = 0; i < a.r_; ++i)
      for (int k = 0; k < a.c_; ++k) {
        const T& x = a(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < b.c_; ++j) {
          if (b(k, j).is_zero()) continue;
          out(i, j) += x * b(k, j);
        }
      }
    return out;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw UsageError("matrix sum shape mismatch");
    Matrix out = a;
    for (size_t i = 0; i < out.a_.size(); ++i) out.a_[i] += b.a_[i];
    return out;
  }

  Matrix transposed() const {
    Matrix out(c_, r_, a_.empty() ? T() : a_[0]);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  Matrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
    Matrix out(int(rows.size()), int(cols.size()), zero_entry(*this));
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < cols.size(); ++j) out(int(i), int(j)) = (*this)(rows[i], cols[j]);
    return out;
  }

  friend Matrix hstack(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_) throw UsageError("hstack row mismatch");
    Matrix out(a.r_, a.c_ + b.c_, a.zero_entry(b));
    for (int i = 0; i < a.r_; ++i) {
      for (int j = 0; j < a.c_; ++j) out(i, j) = a(i, j);
      for (int j = 0; j < b.c_; ++j) out(i, a.c_ + j) = b(i, j);
    }
    return out;
  }

  friend Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.c_) throw UsageError("vstack column mismatch");
    Matrix out(a.r_ + b.r_, a.c_, a.zero_entry(b));
    for (int i = 0; i < a.r_; ++i)
      for (int j = 0; j < a.c_; ++j) out(i, j) = a(i, j);
    for (int i = 0; i < b.r_; ++i)
      for (int j = 0; j < b.c_; ++j) out(a.r_ + i, j) = b(i, j);
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) return false;
    for (size_t i = 0; i < a.a_.size(); ++i)
      if (!(a.a_[i] == b.a_[i])) return false;
    return true;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  std::string str(const std::function<std::string(const T&)>& fmt) const {
    std::string out = "[";
    for (int i = 0; i < r_; ++i) {
      out += i ? ", [" : "[";
      for (int j = 0; j < c_; ++j) {
        if (j) out += ", ";
        out += fmt((*this)(i, j));
      }
      out += "]";
    }
    return out + "]";
  }

 private:
  // A zero element bound to the entry field, recovered from any entry.
  T zero_entry(const Matrix& other) const {
    for (const T& x : a_)
      if (!x.is_zero()) return x - x;
    for (const T& x : other.a_)
      if (!x.is_zero()) return x - x;
    return a_.empty() ? (other.a_.empty() ? T() : other.a_[0]) : a_[0];
  }

  int r_, c_;
  std::vector<T> a_;
};

namespace detail {

/* In-place forward elimination to row echelon form. Records pivot columns and
 * the swap parity; rows are combined but never scaled, so the determinant is
 * the signed product of the pivots. */
template <class T>
struct Echelon {
  std::vector<int> pivot_cols;
  bool odd_swaps = false;
};

template <class T>
Echelon<T> eliminate(Matrix<T>& m) {
  Echelon<T> e;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int piv = -1;
    for (int i = row; i < m.rows(); ++i)
      if (!m(i, col).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(piv, j));
      e.odd_swaps = !e.odd_swaps;
    }
    const T inv = m(row, col).inverse();
    for (int i = row + 1; i < m.rows(); ++i) {
      if (m(i, col).is_zero()) continue;
      const T factor = m(i, col) * inv;
      for (int j = col; j < m.cols(); ++j)
        m(i, j) = m(i, j) - factor * m(row, j);
    }
    e.pivot_cols.push_back(col);
    ++row;
  }
  return e;
}

}  // namespace detail

template <class T>
int rank(Matrix<T> m) {
  return int(detail::eliminate(m).pivot_cols.size());
}

template <class T>
T det(Matrix<T> m) {
  if (m.rows() != m.cols()) throw UsageError("determinant of a non-square matrix");
  if (m.rows() == 0) throw UsageError("determinant of an empty matrix");
  auto e = detail::eliminate(m);
  T zero = m(0, 0) - m(0, 0);
  if (int(e.pivot_cols.size()) < m.rows()) return zero;
  T prod = m(0, 0);
  for (int i = 1; i < m.rows(); ++i) prod = prod * m(i, i);
  return e.odd_swaps ? -prod : prod;
}

/* Reduced row echelon form; optionally reports rank and pivot columns. */
template <class T>
Matrix<T> rref(Matrix<T> m, int* rank_out = nullptr, std::vector<int>* pivots_out = nullptr) {
  auto e = detail::eliminate(m);
  for (int k = int(e.pivot_cols.size()) - 1; k >= 0; --k) {
    const int col = e.pivot_cols[k];
    const T inv = m(k, col).inverse();
    for (int j = col; j < m.cols(); ++j) m(k, j) = m(k, j) * inv;
    for (int i = 0; i < k; ++i) {
      if (m(i, col).is_zero()) continue;
      const T factor = m(i, col);
      for (int j = col; j < m.cols(); ++j)
        m(i, j) = m(i, j) - factor * m(k, j);
    }
  }
  if (rank_out) *rank_out = int(e.pivot_cols.size());
  if (pivots_out) *pivots_out = e.pivot_cols;
  return m;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m, const T& zero, const T& one) {
  if (m.rows() != m.cols()) throw UsageError("inverse of a non-square matrix");
  const int n = m.rows();
  Matrix<T> aug = hstack(m, Matrix<T>::identity(n, zero, one));
  std::vector<int> pivots;
  aug = rref(std::move(aug), nullptr, &pivots);
  int rk = 0;
  for (int c : pivots)
    if (c < n) ++rk;
  if (rk < n)
    throw SingularError("singular matrix (rank " + std::to_string(rk) + ")", rk);
  std::vector<int> all_rows(n), right_cols(n);
  for (int i = 0; i < n; ++i) all_rows[i] = i, right_cols[i] = n + i;
  return aug.submatrix(all_rows, right_cols);
}

/* Solves A X = B column by column. Returns the solution with all free
 * variables set to zero, or nullopt when the system is inconsistent. */
template <class T>
std::optional<Matrix<T>> solve(const Matrix<T>& a, const Matrix<T>& b, const T& zero) {
  if (a.rows() != b.rows()) throw UsageError("solve: row mismatch");
  const int n = a.cols();
  Matrix<T> aug = hstack(a, b);
  std::vector<int> pivots;
  aug = rref(std::move(aug), nullptr, &pivots);
  for (int c : pivots)
    if (c >= n) return std::nullopt;  // a pivot in the right block: inconsistent
  Matrix<T> x(n, b.cols(), zero);
  for (int k = 0; k < int(pivots.size()); ++k)
    for (int j = 0; j < b.cols(); ++j) x(pivots[k], j) = aug(k, n + j);
  return x;
}

/* Rows spanning the left null space { v : v A = 0 }. */
template <class T>
Matrix<T> left_nullspace(const Matrix<T>& a, const T& zero, const T& one) {
  Matrix<T> at = a.transposed();
  std::vector<int> pivots;
  at = rref(std::move(at), nullptr, &pivots);
  const int n = a.rows();
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix<T> basis(int(free_cols.size()), n, zero);
  for (size_t k = 0; k < free_cols.size(); ++k) {
    const int fc = free_cols[k];
    basis(int(k), fc) = one;
    for (int r = 0; r < int(pivots.size()); ++r)
      basis(int(k), pivots[r]) = zero - at(r, fc);
  }
  return basis;
}

}  // namespace adtnc

#pragma once

// Dense matrices over the exact rings of exactring.hpp.  Element types carry
// their own ring context, so zero/one are derived from a witness element via
// zero_like()/one_like().  Elimination pivots only on units, which is full
// Gaussian elimination over a field and the correct notion over the local
// rings used here.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mutheta/exactring.hpp"

namespace mutheta {

template <typename T>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols, const T& fill)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}
  static Matrix zeros(int rows, int cols, const T& witness) {
    return Matrix(rows, cols, witness.zero_like());
  }
  static Matrix identity(int n, const T& witness) {
    Matrix m = zeros(n, n, witness);
    for (int i = 0; i < n; ++i) m(i, i) = witness.one_like();
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix r = a;
    for (size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix r = a;
    for (size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
    if (a.empty() || b.empty()) {
      if (a.rows_ == 0 || b.cols_ == 0) return Matrix();
      throw std::invalid_argument("Matrix: empty operand");
    }
    Matrix r = zeros(a.rows_, b.cols_, a.data_[0]);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }
  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix r = a;
    for (auto& x : r.data_) x = s * x;
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Matrix transpose() const {
    if (empty()) return Matrix();
    Matrix r = zeros(cols_, rows_, data_[0]);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  Matrix map(const std::function<T(const T&)>& f) const {
    Matrix r = *this;
    for (auto& x : r.data_) x = f(x);
    return r;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }

  std::vector<T> column(int j) const {
    std::vector<T> c;
    c.reserve(rows_);
    for (int i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return c;
  }
  void set_column(int j, const std::vector<T>& c) {
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }
  static Matrix from_columns(int rows, const std::vector<std::vector<T>>& cols,
                             const T& witness) {
    Matrix m = zeros(rows, static_cast<int>(cols.size()), witness);
    for (size_t j = 0; j < cols.size(); ++j) m.set_column(static_cast<int>(j), cols[j]);
    return m;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (static_cast<int>(v.size()) != cols_)
      throw std::invalid_argument("Matrix: vector length mismatch");
    std::vector<T> r(rows_, data_.empty() ? T() : data_[0].zero_like());
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  // Determinant by cofactor expansion; intended for the small matrices
  // (pairing blocks, Hasse matrices, minors) that occur here.
  T det_small() const {
    if (rows_ != cols_) throw std::invalid_argument("Matrix: det of non-square");
    if (rows_ == 0) throw std::invalid_argument("Matrix: det of empty matrix");
    return det_rec(*this);
  }

 private:
  static T det_rec(const Matrix& m) {
    int n = m.rows_;
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    T acc = m(0, 0).zero_like();
    for (int j = 0; j < n; ++j) {
      if (m(0, j).is_zero()) continue;
      Matrix sub = zeros(n - 1, n - 1, m(0, 0));
      for (int i = 1; i < n; ++i) {
        int cc = 0;
        for (int c = 0; c < n; ++c) {
          if (c == j) continue;
          sub(i - 1, cc++) = m(i, c);
        }
      }
      T term = m(0, j) * det_rec(sub);
      if (j % 2 == 0)
        acc += term;
      else
        acc -= term;
    }
    return acc;
  }

  void check_same_shape(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_)
      throw std::invalid_argument("Matrix: shape mismatch");
  }

  int rows_, cols_;
  std::vector<T> data_;
};

// Row echelon form with unit pivots.  Over a field this is ordinary Gaussian
// elimination; over a local ring it succeeds whenever the pivots can be taken
// to be units, which covers every solve performed in this library.
template <typename T>
struct Echelon {
  Matrix<T> reduced;           // RREF
  std::vector<int> pivot_cols;
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};

template <typename T>
Echelon<T> row_reduce(Matrix<T> m) {
  Echelon<T> e;
  if (m.empty()) {
    e.reduced = m;
    return e;
  }
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m(i, c).is_unit()) {
        piv = i;
        break;
      }
    if (piv < 0) {
      // no unit pivot; for a field this column is zero below r
      bool nonzero_nonunit = false;
      for (int i = r; i < m.rows(); ++i)
        if (!m(i, c).is_zero()) nonzero_nonunit = true;
      if (nonzero_nonunit)
        throw std::domain_error("row_reduce: no unit pivot available");
      continue;
    }
    if (piv != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(piv, j));
    T inv = m(r, c).inverse();
    for (int j = 0; j < m.cols(); ++j) m(r, j) = inv * m(r, j);
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      T f = m(i, c);
      for (int j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    e.pivot_cols.push_back(c);
    ++r;
  }
  e.reduced = m;
  return e;
}

template <typename T>
int rank(const Matrix<T>& m) {
  if (m.empty()) return 0;
  return row_reduce(m).rank();
}

// Basis of the right kernel, one column per free variable, in RREF-derived
// form (free coordinate set to 1).
template <typename T>
Matrix<T> kernel_basis(const Matrix<T>& m) {
  if (m.empty()) throw std::invalid_argument("kernel_basis: empty matrix");
  T w = m(0, 0);
  Echelon<T> e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<T>> cols;
  for (int c = 0; c < m.cols(); ++c) {
    if (is_pivot[c]) continue;
    std::vector<T> v(m.cols(), w.zero_like());
    v[c] = w.one_like();
    for (size_t r = 0; r < e.pivot_cols.size(); ++r)
      v[e.pivot_cols[r]] = -e.reduced(static_cast<int>(r), c);
    cols.push_back(std::move(v));
  }
  return Matrix<T>::from_columns(m.cols(), cols, w);
}

// Solve M x = b column by column; throws if inconsistent or pivot-starved.
template <typename T>
std::vector<T> solve(const Matrix<T>& m, const std::vector<T>& b) {
  if (m.empty()) throw std::invalid_argument("solve: empty matrix");
  if (static_cast<int>(b.size()) != m.rows())
    throw std::invalid_argument("solve: rhs length mismatch");
  T w = m(0, 0);
  Matrix<T> aug = Matrix<T>::zeros(m.rows(), m.cols() + 1, w);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  Echelon<T> e = row_reduce(aug);
  for (int c : e.pivot_cols)
    if (c == m.cols()) throw std::domain_error("solve: inconsistent system");
  std::vector<T> x(m.cols(), w.zero_like());
  for (size_t r = 0; r < e.pivot_cols.size(); ++r)
    x[e.pivot_cols[r]] = e.reduced(static_cast<int>(r), m.cols());
  return x;
}

template <typename T>
Matrix<T> inverse(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: non-square");
  T w = m(0, 0);
  int n = m.rows();
  Matrix<T> aug = Matrix<T>::zeros(n, 2 * n, w);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = w.one_like();
  }
  Echelon<T> e = row_reduce(aug);
  if (e.rank() != n) throw std::domain_error("inverse: singular matrix");
  for (int r = 0; r < n; ++r)
    if (e.pivot_cols[r] != r) throw std::domain_error("inverse: singular matrix");
  Matrix<T> out = Matrix<T>::zeros(n, n, w);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = e.reduced(i, n + j);
  return out;
}

// Column span comparison: both span the same subspace of the ambient space.
template <typename T>
bool same_column_span(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) return false;
  if (a.cols() == 0 && b.cols() == 0) return true;
  const T* w = nullptr;
  if (a.cols() > 0) w = &a(0, 0);
  else w = &b(0, 0);
  int ra = a.cols() == 0 ? 0 : rank(a);
  int rb = b.cols() == 0 ? 0 : rank(b);
  if (ra != rb) return false;
  Matrix<T> joint = Matrix<T>::zeros(a.rows(), a.cols() + b.cols(), *w);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) joint(i, j) = a(i, j);
    for (int j = 0; j < b.cols(); ++j) joint(i, a.cols() + j) = b(i, j);
  }
  return rank(joint) == ra;
}

// Is v in the column span?
template <typename T>
bool in_column_span(const Matrix<T>& a, const std::vector<T>& v) {
  if (a.cols() == 0) {
    for (const auto& x : v)
      if (!x.is_zero()) return false;
    return true;
  }
  Matrix<T> joint = Matrix<T>::zeros(a.rows(), a.cols() + 1, a(0, 0));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) joint(i, j) = a(i, j);
    joint(i, a.cols()) = v[i];
  }
  return rank(joint) == rank(a);
}

template <typename T>
Matrix<T> frobenius_entrywise(const Matrix<T>& m, int times = 1) {
  Matrix<T> r = m;
  for (int t = 0; t < times; ++t)
    r = r.map([](const T& x) { return frobenius(x); });
  return r;
}

}  // namespace mutheta

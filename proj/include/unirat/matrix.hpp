#pragma once

#include <cstddef>
#include <optional>
#include <type_traits>
#include <ostream>
#include <utility>
#include <vector>

#include "unirat/errors.hpp"
#include "unirat/rational.hpp"

namespace unirat {

// Dense row-major matrix over an exact field (or an integral domain providing
// exact_quotient, for the fraction-free routines).
template <class K>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, K(0)) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<K> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) fail(ErrorKind::InvalidArgument, "matrix entry count mismatch");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = K(1);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<K>>& rows, std::size_t cols = 0) {
    if (!rows.empty()) cols = rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) fail(ErrorKind::InvalidArgument, "ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  K& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const K& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<K> row(std::size_t i) const {
    return std::vector<K>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<K> col(std::size_t j) const {
    std::vector<K> c;
    c.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return c;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorKind::InvalidArgument, "matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (is_zero(a(i, k))) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  std::vector<K> apply(const std::vector<K>& v) const {
    if (v.size() != cols_) fail(ErrorKind::InvalidArgument, "matrix-vector shape mismatch");
    std::vector<K> out(rows_, K(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!is_zero(v[j])) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<K> data_;
};

template <class K>
struct Echelon {
  Matrix<K> reduced;                // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

// Reduced row echelon form. Pivot rule: leftmost column holding a nonzero
// entry, first nonzero row in that column. No magnitude-based pivoting, so the
// result is reproducible for every exact field.
template <class K>
Echelon<K> rref(Matrix<K> m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    K inv = K(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = m(r, j) * inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      K factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!is_zero(m(r, j))) m(i, j) -= factor * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

template <class K>
std::size_t rank(const Matrix<K>& m) {
  return rref(m).pivots.size();
}

// Basis of the right kernel {v : m v = 0}: one vector per non-pivot column j
// with v_j = 1 and v_pivot = -R(i, j). An empty (0-row) matrix yields the
// standard basis.
template <class K>
std::vector<std::vector<K>> kernel_basis(const Matrix<K>& m) {
  auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<std::vector<K>> basis;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (is_pivot[j]) continue;
    std::vector<K> v(m.cols(), K(0));
    v[j] = K(1);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

// One solution of m x = b (free variables set to zero), or nullopt.
template <class K>
std::optional<std::vector<K>> solve_particular(const Matrix<K>& m, const std::vector<K>& b) {
  if (b.size() != m.rows()) fail(ErrorKind::InvalidArgument, "rhs length mismatch");
  Matrix<K> aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  auto e = rref(aug);
  std::vector<K> x(m.cols(), K(0));
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == m.cols()) return std::nullopt;
    x[e.pivots[i]] = e.reduced(i, m.cols());
  }
  return x;
}

// Determinant by Bareiss fraction-free elimination. Every division is exact in
// the ring generated by the entries, so integer input never produces a
// denominator and polynomial entries stay polynomial.
template <class K>
K det_fraction_free(Matrix<K> m) {
  if (m.rows() != m.cols()) fail(ErrorKind::InvalidArgument, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return K(1);
  K prev(1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (is_zero(m(k, k))) {
      std::size_t p = k + 1;
      while (p < n && is_zero(m(p, k))) ++p;
      if (p == n) return K(0);
      m.swap_rows(k, p);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = exact_quotient(m(i, j) * m(k, k) - m(i, k) * m(k, j), prev);
      m(i, k) = K(0);
    }
    prev = m(k, k);
  }
  K d = m(n - 1, n - 1);
  return negate ? -d : d;
}

// Division-free determinant by cofactor expansion along the first row; meant
// for the small (r <= 4) minors needed by kernel_basis_cramer.
template <class K>
K det_cofactor(const Matrix<K>& m) {
  const std::size_t n = m.rows();
  if (n == 0) return K(1);
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  K acc(0);
  for (std::size_t j = 0; j < n; ++j) {
    if (is_zero(m(0, j))) continue;
    Matrix<K> minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(i - 1, cc++) = m(i, c);
    K term = m(0, j) * det_cofactor(minor);
    if (j % 2) acc -= term;
    else acc += term;
  }
  return acc;
}

// Matrix on which pivot decisions are taken. Overloaded for value types whose
// zero test is cheaper on a shadow matrix.
template <class K>
const Matrix<K>& pivot_view(const Matrix<K>& m) {
  return m;
}

// Kernel basis written with Cramer's rule on a maximal nonsingular minor, so
// no entry of the result involves a division. Pivot columns follow the rref
// rule; the row set is the greedy first-independent-rows choice.
template <class K>
std::vector<std::vector<K>> kernel_basis_cramer(const Matrix<K>& m) {
  std::vector<std::size_t> row_set;
  const auto& pv = pivot_view(m);
  using P = std::decay_t<decltype(pv(0, 0))>;
  {
    std::size_t r = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      Matrix<P> trial(row_set.size() + 1, m.cols());
      for (std::size_t k = 0; k < row_set.size(); ++k)
        for (std::size_t j = 0; j < m.cols(); ++j) trial(k, j) = pv(row_set[k], j);
      for (std::size_t j = 0; j < m.cols(); ++j) trial(row_set.size(), j) = pv(i, j);
      std::size_t tr = rank(trial);
      if (tr > r) {
        row_set.push_back(i);
        r = tr;
      }
    }
  }
  const std::size_t r = row_set.size();
  Matrix<K> sub(r, m.cols());
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t j = 0; j < m.cols(); ++j) sub(k, j) = m(row_set[k], j);
  std::vector<std::size_t> pivots;
  {
    Matrix<P> psub(r, m.cols());
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t j = 0; j < m.cols(); ++j) psub(k, j) = pv(row_set[k], j);
    pivots = rref(psub).pivots;
  }
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;

  auto minor_with = [&](std::size_t replaced, std::size_t col) {
    Matrix<K> a(r, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < r; ++k) a(i, k) = sub(i, k == replaced ? col : pivots[k]);
    return r <= 4 ? det_cofactor(a) : det_fraction_free(a);
  };
  const K base = minor_with(r, 0);

  std::vector<std::vector<K>> basis;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (is_pivot[j]) continue;
    std::vector<K> v(m.cols(), K(0));
    v[j] = base;
    for (std::size_t i = 0; i < r; ++i) v[pivots[i]] = -minor_with(i, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class K>
std::ostream& operator<<(std::ostream& os, const Matrix<K>& m) {
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    os << "]";
  }
  return os << "]";
}

}  // namespace unirat

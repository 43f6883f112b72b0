#pragma once

#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "matnet/rational.hpp"

namespace matnet {

/// Dense row-major matrix over an exact (Rational) or floating (double)
/// scalar. Sized at construction; entries are value types.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(checked_size(rows, cols), T{}) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
    data_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_)
        throw std::invalid_argument("Matrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }
  static Matrix zero(int rows, int cols) { return Matrix(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(int r, int c) { return data_[index(r, c)]; }
  const T& operator()(int r, int c) const { return data_[index(r, c)]; }

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  bool is_zero() const {
    for (const T& v : data_)
      if (!(v == T{})) return false;
    return true;
  }
  bool is_square() const { return rows_ == cols_; }
  bool is_symmetric() const {
    if (!is_square()) return false;
    for (int r = 0; r < rows_; ++r)
      for (int c = r + 1; c < cols_; ++c)
        if (!((*this)(r, c) == (*this)(c, r))) return false;
    return true;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (T& v : data_) v *= s;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  Matrix operator-() const {
    Matrix out = *this;
    for (T& v : out.data_) v = -v;
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw std::invalid_argument("Matrix: product shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (int r = 0; r < a.rows_; ++r)
      for (int k = 0; k < a.cols_; ++k) {
        const T& arv = a(r, k);
        if (arv == T{}) continue;
        for (int c = 0; c < b.cols_; ++c) out(r, c) += arv * b(k, c);
      }
    return out;
  }

  Matrix block(int r0, int c0, int rows, int cols) const {
    if (r0 < 0 || c0 < 0 || r0 + rows > rows_ || c0 + cols > cols_)
      throw std::invalid_argument("Matrix: block out of range");
    Matrix out(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
    return out;
  }
  void set_block(int r0, int c0, const Matrix& b) {
    if (r0 < 0 || c0 < 0 || r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
      throw std::invalid_argument("Matrix: set_block out of range");
    for (int r = 0; r < b.rows_; ++r)
      for (int c = 0; c < b.cols_; ++c) (*this)(r0 + r, c0 + c) = b(r, c);
  }

  /// [a | b | ...] side by side; all arguments must share the row count.
  static Matrix hcat(std::span<const Matrix> parts) {
    if (parts.empty()) return Matrix();
    int rows = parts.front().rows(), cols = 0;
    for (const Matrix& p : parts) {
      if (p.rows() != rows) throw std::invalid_argument("hcat: row mismatch");
      cols += p.cols();
    }
    Matrix out(rows, cols);
    int at = 0;
    for (const Matrix& p : parts) {
      out.set_block(0, at, p);
      at += p.cols();
    }
    return out;
  }
  static Matrix hcat(const Matrix& a, const Matrix& b) {
    const Matrix parts[] = {a, b};
    return hcat(parts);
  }

  /// diag(blocks[0], ..., blocks[k-1]).
  static Matrix block_diag(std::span<const Matrix> blocks) {
    int rows = 0, cols = 0;
    for (const Matrix& b : blocks) {
      rows += b.rows();
      cols += b.cols();
    }
    Matrix out(rows, cols);
    int r = 0, c = 0;
    for (const Matrix& b : blocks) {
      out.set_block(r, c, b);
      r += b.rows();
      c += b.cols();
    }
    return out;
  }
  /// diag(b, ..., b) with `copies` repetitions.
  static Matrix block_diag(const Matrix& b, int copies) {
    std::vector<Matrix> blocks(copies, b);
    return block_diag(std::span<const Matrix>(blocks));
  }

 private:
  static size_t checked_size(int rows, int cols) {
    if (rows < 0 || cols < 0)
      throw std::invalid_argument("Matrix: negative dimension");
    return static_cast<size_t>(rows) * static_cast<size_t>(cols);
  }
  size_t index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
      throw std::out_of_range("Matrix: index out of range");
    return static_cast<size_t>(r) * cols_ + c;
  }
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("Matrix: shape mismatch");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using MatQ = Matrix<Rational>;
using MatD = Matrix<double>;

inline MatD to_double(const MatQ& m) {
  MatD out(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).to_double();
  return out;
}

/// Converts the exact model matrix into the requested backend scalar.
template <typename T>
Matrix<T> backend_cast(const MatQ& m) {
  if constexpr (std::is_same_v<T, Rational>) {
    return m;
  } else {
    return to_double(m);
  }
}

/// Compact single-line rendering, e.g. "[[1, 2], [2, 1]]".
std::string to_string(const MatQ& m);
std::string to_string(const MatD& m);

}  // namespace matnet

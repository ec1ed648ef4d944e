#pragma once

#include "flatform/scalar.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace flatform {

using Vector = std::vector<Scalar>;

/// Dense row-major matrix of exact rationals. Subspace bases are stored as
/// the rows of a Matrix throughout the library.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Scalar>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Scalar> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Scalar> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  Vector row_vector(std::size_t r) const;
  Vector column(std::size_t c) const;

  void append_row(std::span<const Scalar> values);
  Matrix select_rows(std::span<const std::size_t> indices) const;
  Matrix transpose() const;
  /// Rows of *this followed by rows of `below`.
  Matrix stack(const Matrix& below) const;

  /// M x for a column vector x of length cols().
  Vector apply(std::span<const Scalar> x) const;

  bool is_zero() const;
  bool is_symmetric() const;

  friend bool operator==(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Scalar& s, const Matrix& m);
  friend Matrix operator-(const Matrix& m);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

std::ostream& operator<<(std::ostream& os, const Matrix& m);

Scalar dot(std::span<const Scalar> a, std::span<const Scalar> b);
bool is_zero(std::span<const Scalar> v);

/// Exact rank by fraction-free (Bareiss) elimination on the row-integerized matrix.
std::size_t rank(const Matrix& m);

struct RowEchelon {
  Matrix reduced;                    // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;   // pivot column of each reduced row
};

/// Gauss-Jordan reduction over Q.
RowEchelon rref(Matrix m);

/// Basis (as rows) of {x : m x = 0}. One basis vector per free column,
/// with a 1 in that column.
Matrix kernel(const Matrix& m);

/// Indices of the first maximal linearly independent subset of the rows,
/// scanning in order.
std::vector<std::size_t> independent_rows(const Matrix& m);

/// Some X with a X = b (free variables set to zero), or nullopt when the
/// system is inconsistent.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

std::optional<Matrix> inverse(const Matrix& a);

}  // namespace flatform

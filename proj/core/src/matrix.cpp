#include "flatform/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace flatform {

Matrix::Matrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("row length mismatch");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Vector Matrix::row_vector(std::size_t r) const {
  auto s = row(r);
  return Vector(s.begin(), s.end());
}

Vector Matrix::column(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void Matrix::append_row(std::span<const Scalar> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw std::invalid_argument("append_row: length mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::stack(const Matrix& below) const {
  if (rows_ == 0) return below;
  if (below.rows_ == 0) return *this;
  if (below.cols_ != cols_) throw std::invalid_argument("stack: column mismatch");
  Matrix out = *this;
  out.data_.insert(out.data_.end(), below.data_.begin(), below.data_.end());
  out.rows_ += below.rows_;
  return out;
}

Vector Matrix::apply(std::span<const Scalar> x) const {
  if (x.size() != cols_) throw std::invalid_argument("apply: dimension mismatch");
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = dot(row(r), x);
  return out;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return sgn(s) == 0; });
}

bool Matrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c)
      if ((*this)(r, c) != (*this)(c, r)) return false;
  return true;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
  Matrix out(a.rows_, b.cols_);
  Scalar term;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (sgn(b(k, j)) == 0) continue;
        term = aik * b(k, j);
        out(i, j) += term;
      }
    }
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix difference: shape mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

Matrix operator*(const Scalar& s, const Matrix& m) {
  Matrix out = m;
  for (auto& v : out.data_) v *= s;
  return out;
}

Matrix operator-(const Matrix& m) {
  Matrix out = m;
  for (auto& v : out.data_) v = -v;
  return out;
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << m(r, c);
    os << ']';
  }
  return os << ']';
}

Scalar dot(std::span<const Scalar> a, std::span<const Scalar> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  Scalar acc = 0;
  Scalar term;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0 || sgn(b[i]) == 0) continue;
    term = a[i] * b[i];
    acc += term;
  }
  return acc;
}

bool is_zero(std::span<const Scalar> v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return sgn(s) == 0; });
}

std::size_t rank(const Matrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows == 0 || cols == 0) return 0;

  // Scale each row by the lcm of its denominators.
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < cols; ++c) {
      const mpz_class& d = m(r, c).get_den();
      if (d != 1) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
    for (std::size_t c = 0; c < cols; ++c) {
      a[r][c] = m(r, c).get_num() * (l / m(r, c).get_den());
    }
  }

  std::size_t pivot_row = 0;
  mpz_class prev = 1;
  mpz_class t;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    std::size_t sel = rows;
    for (std::size_t r = pivot_row; r < rows; ++r) {
      if (sgn(a[r][c]) != 0) {
        sel = r;
        break;
      }
    }
    if (sel == rows) continue;
    std::swap(a[pivot_row], a[sel]);
    const mpz_class& piv = a[pivot_row][c];
    for (std::size_t r = pivot_row + 1; r < rows; ++r) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        // a[r][k] = (piv * a[r][k] - a[r][c] * a[pivot_row][k]) / prev, exact.
        t = piv * a[r][k];
        t -= a[r][c] * a[pivot_row][k];
        mpz_divexact(a[r][k].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[r][c] = 0;
    }
    prev = piv;
    ++pivot_row;
  }
  return pivot_row;
}

RowEchelon rref(Matrix m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t pr = 0;
  Scalar factor;
  Scalar term;
  for (std::size_t c = 0; c < cols && pr < rows; ++c) {
    std::size_t sel = rows;
    for (std::size_t r = pr; r < rows; ++r) {
      if (sgn(m(r, c)) != 0) {
        sel = r;
        break;
      }
    }
    if (sel == rows) continue;
    if (sel != pr) {
      auto a = m.row(sel);
      auto b = m.row(pr);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    const Scalar inv = 1 / m(pr, c);
    for (std::size_t k = c; k < cols; ++k) m(pr, k) *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pr || sgn(m(r, c)) == 0) continue;
      factor = m(r, c);
      for (std::size_t k = c; k < cols; ++k) {
        if (sgn(m(pr, k)) == 0) continue;
        term = factor * m(pr, k);
        m(r, k) -= term;
      }
    }
    pivots.push_back(c);
    ++pr;
  }
  std::vector<std::size_t> keep(pr);
  std::iota(keep.begin(), keep.end(), 0);
  return {m.select_rows(keep), std::move(pivots)};
}

Matrix kernel(const Matrix& m) {
  const std::size_t cols = m.cols();
  RowEchelon e = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  Matrix basis(0, cols);
  Vector v(cols);
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::fill(v.begin(), v.end(), Scalar(0));
    v[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
    basis.append_row(v);
  }
  return basis;
}

std::vector<std::size_t> independent_rows(const Matrix& m) {
  if (m.rows() == 0) return {};
  return rref(m.transpose()).pivots;
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch");
  const std::size_t n = a.cols();
  Matrix aug(a.rows(), n + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) aug(r, n + c) = b(r, c);
  }
  RowEchelon e = rref(std::move(aug));
  Matrix x(n, b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] >= n) return std::nullopt;
    for (std::size_t c = 0; c < b.cols(); ++c) x(e.pivots[r], c) = e.reduced(r, n + c);
  }
  return x;
}

std::optional<Matrix> inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix not square");
  if (rank(a) != a.rows()) return std::nullopt;
  return solve(a, Matrix::identity(a.rows()));
}

}  // namespace flatform

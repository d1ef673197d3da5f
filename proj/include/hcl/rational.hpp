#pragma once

#include <gmpxx.h>

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hcl {

using Rational = mpq_class;

// Dense row-major matrix over Q. Everything here is small, so no cleverness.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix identity(std::size_t n);
  static QMatrix from_rows(const std::vector<std::vector<long long>>& rows);
  static QMatrix column(const std::vector<Rational>& v);
  static QMatrix unit(std::size_t n, std::size_t i);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  QMatrix col(std::size_t j) const;
  QMatrix select_cols(const std::vector<std::size_t>& idx) const;
  QMatrix select_rows(const std::vector<std::size_t>& idx) const;
  QMatrix transpose() const;
  bool is_zero() const;
  bool is_integral() const;

  Eigen::MatrixXd to_double() const;

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator*(const Rational& s, const QMatrix& a);
  QMatrix operator-() const;
  QMatrix& operator+=(const QMatrix& b);
  bool operator==(const QMatrix& b) const;
  bool operator!=(const QMatrix& b) const { return !(*this == b); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

QMatrix hcat(const QMatrix& a, const QMatrix& b);

struct Echelon {
  QMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

Echelon rref(const QMatrix& m);
std::size_t rank(const QMatrix& m);
// Columns form a basis of the null space, one per free column, in column order.
QMatrix kernel_basis(const QMatrix& m);
// Basis of the column space taken from the pivot columns of m itself.
QMatrix column_basis(const QMatrix& m);
// Some exact solution of a x = b (b may have several columns), or nothing.
std::optional<QMatrix> solve(const QMatrix& a, const QMatrix& b);
QMatrix inverse(const QMatrix& m);
// Moore-Penrose inverse via a full-rank factorisation.
QMatrix pseudoinverse(const QMatrix& m);
// Orthogonal projector onto the span of the columns of basis.
QMatrix orthogonal_projector(const QMatrix& basis, std::size_t ambient);
// Greedy extension: columns of candidates that raise the rank of base, in order.
std::vector<std::size_t> extend_basis(const QMatrix& base, const QMatrix& candidates);

std::string to_string(const Rational& r);  // always "num/den"
Rational parse_rational(const std::string& s);

}  // namespace hcl

#include <hcl/errors.hpp>
#include <hcl/rational.hpp>

namespace hcl {

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows.front().size();
  QMatrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw Error("from_rows: ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<long>(rows[i][j]);
  }
  return m;
}

QMatrix QMatrix::column(const std::vector<Rational>& v) {
  QMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

QMatrix QMatrix::unit(std::size_t n, std::size_t i) {
  QMatrix m(n, 1);
  m(i, 0) = 1;
  return m;
}

QMatrix QMatrix::col(std::size_t j) const { return select_cols({j}); }

QMatrix QMatrix::select_cols(const std::vector<std::size_t>& idx) const {
  QMatrix m(rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < idx.size(); ++k) m(i, k) = (*this)(i, idx[k]);
  return m;
}

QMatrix QMatrix::select_rows(const std::vector<std::size_t>& idx) const {
  QMatrix m(idx.size(), cols_);
  for (std::size_t k = 0; k < idx.size(); ++k)
    for (std::size_t j = 0; j < cols_; ++j) m(k, j) = (*this)(idx[k], j);
  return m;
}

QMatrix QMatrix::transpose() const {
  QMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

bool QMatrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

bool QMatrix::is_integral() const {
  for (const auto& x : data_)
    if (x.get_den() != 1) return false;
  return true;
}

Eigen::MatrixXd QMatrix::to_double() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).get_d();
  return m;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_) throw Error("QMatrix product: shape mismatch");
  QMatrix m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += x * b(k, j);
    }
  return m;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  QMatrix m = a;
  m += b;
  return m;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) { return a + (-b); }

QMatrix operator*(const Rational& s, const QMatrix& a) {
  QMatrix m = a;
  for (auto& x : m.data_) x *= s;
  return m;
}

QMatrix QMatrix::operator-() const {
  QMatrix m = *this;
  for (auto& x : m.data_) x = -x;
  return m;
}

QMatrix& QMatrix::operator+=(const QMatrix& b) {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw Error("QMatrix sum: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += b.data_[i];
  return *this;
}

bool QMatrix::operator==(const QMatrix& b) const {
  return rows_ == b.rows_ && cols_ == b.cols_ && data_ == b.data_;
}

QMatrix hcat(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows()) throw Error("hcat: row mismatch");
  QMatrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

Echelon rref(const QMatrix& m) {
  QMatrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(r, j));
    Rational inv = 1 / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rational f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

std::size_t rank(const QMatrix& m) { return rref(m).pivots.size(); }

QMatrix kernel_basis(const QMatrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!is_pivot[j]) free.push_back(j);
  QMatrix k(m.cols(), free.size());
  for (std::size_t f = 0; f < free.size(); ++f) {
    k(free[f], f) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) k(e.pivots[r], f) = -e.reduced(r, free[f]);
  }
  return k;
}

QMatrix column_basis(const QMatrix& m) { return m.select_cols(rref(m).pivots); }

std::optional<QMatrix> solve(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows()) throw Error("solve: shape mismatch");
  Echelon e = rref(hcat(a, b));
  for (auto p : e.pivots)
    if (p >= a.cols()) return std::nullopt;
  QMatrix x(a.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r)
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, a.cols() + j);
  return x;
}

QMatrix inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw Error("inverse: not square");
  auto x = solve(m, QMatrix::identity(m.rows()));
  if (!x || rank(m) != m.rows()) throw Error("inverse: singular matrix");
  return *x;
}

QMatrix pseudoinverse(const QMatrix& m) {
  Echelon e = rref(m);
  const std::size_t r = e.pivots.size();
  if (r == 0) return QMatrix(m.cols(), m.rows());
  // m = c * g with c the pivot columns and g the nonzero rows of the rref
  QMatrix c = m.select_cols(e.pivots);
  std::vector<std::size_t> top(r);
  for (std::size_t i = 0; i < r; ++i) top[i] = i;
  QMatrix g = e.reduced.select_rows(top);
  QMatrix gt = g.transpose(), ct = c.transpose();
  return gt * inverse(g * gt) * inverse(ct * c) * ct;
}

QMatrix orthogonal_projector(const QMatrix& basis, std::size_t ambient) {
  if (basis.cols() == 0) return QMatrix(ambient, ambient);
  QMatrix bt = basis.transpose();
  return basis * inverse(bt * basis) * bt;
}

std::vector<std::size_t> extend_basis(const QMatrix& base, const QMatrix& candidates) {
  std::vector<std::size_t> chosen;
  QMatrix acc = base;
  std::size_t r = rank(acc);
  for (std::size_t j = 0; j < candidates.cols(); ++j) {
    QMatrix trial = hcat(acc, candidates.col(j));
    std::size_t rt = rank(trial);
    if (rt > r) {
      acc = std::move(trial);
      r = rt;
      chosen.push_back(j);
    }
  }
  return chosen;
}

std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(const std::string& s) {
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0) throw ParseError("not a rational: '" + s + "'");
  if (r.get_den() == 0) throw ParseError("zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

}  // namespace hcl

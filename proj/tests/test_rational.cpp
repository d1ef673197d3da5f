#include "doctest.h"

#include <hcl/rational.hpp>
#include <hcl/smith.hpp>

#include <random>

using namespace hcl;

namespace {

QMatrix random_int_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  QMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

// Low rank on purpose: product of thin factors.
QMatrix random_low_rank(std::mt19937& rng, std::size_t r, std::size_t c, std::size_t k) {
  return random_int_matrix(rng, r, k, -3, 3) * random_int_matrix(rng, k, c, -3, 3);
}

mpz_class gcd_of_minors(const QMatrix& m, std::size_t k) {
  // brute force over all k-subsets of rows and columns
  std::vector<std::size_t> rs(k), cs(k);
  mpz_class g = 0;
  auto next = [](std::vector<std::size_t>& s, std::size_t n) {
    std::size_t k = s.size();
    for (std::size_t i = k; i-- > 0;) {
      if (s[i] < n - k + i) {
        ++s[i];
        for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < k; ++i) rs[i] = i;
  do {
    for (std::size_t i = 0; i < k; ++i) cs[i] = i;
    do {
      QMatrix sub = m.select_rows(rs).select_cols(cs);
      // Leibniz-free determinant via elimination over Q
      Echelon e = rref(sub);
      Rational det = 0;
      if (e.pivots.size() == k) {
        // determinant = product of pivots before normalisation; recompute by LU
        QMatrix a = sub;
        det = 1;
        for (std::size_t col = 0; col < k; ++col) {
          std::size_t piv = col;
          while (a(piv, col) == 0) ++piv;
          if (piv != col) {
            for (std::size_t j = 0; j < k; ++j) std::swap(a(piv, j), a(col, j));
            det = -det;
          }
          det *= a(col, col);
          for (std::size_t i = col + 1; i < k; ++i) {
            Rational f = a(i, col) / a(col, col);
            for (std::size_t j = col; j < k; ++j) a(i, j) -= f * a(col, j);
          }
        }
      }
      mpz_class d = det.get_num();
      g = gcd(g, d);
    } while (next(cs, m.cols()));
  } while (next(rs, m.rows()));
  return abs(g);
}

}  // namespace

TEST_CASE("rank plus nullity and kernel annihilation") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t r = 1 + trial % 5, c = 1 + (trial * 3) % 6;
    QMatrix m = random_low_rank(rng, r, c, 1 + trial % 3);
    QMatrix k = kernel_basis(m);
    CHECK(rank(m) + k.cols() == c);
    CHECK((m * k).is_zero());
    CHECK(rank(k) == k.cols());
    QMatrix b = column_basis(m);
    CHECK(b.cols() == rank(m));
    CHECK(rank(hcat(b, m)) == rank(m));
  }
}

TEST_CASE("pseudoinverse satisfies the Penrose conditions") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t r = 1 + trial % 4, c = 1 + (trial * 5) % 5;
    QMatrix a = random_low_rank(rng, r, c, 1 + trial % 2);
    QMatrix x = pseudoinverse(a);
    CHECK(x.rows() == c);
    CHECK(x.cols() == r);
    CHECK(a * x * a == a);
    CHECK(x * a * x == x);
    CHECK((a * x).transpose() == a * x);
    CHECK((x * a).transpose() == x * a);
  }
  QMatrix z(3, 2);
  CHECK(pseudoinverse(z).is_zero());
  CHECK(pseudoinverse(z).rows() == 2);
}

TEST_CASE("inverse and solve") {
  QMatrix a = QMatrix::from_rows({{2, 1}, {1, 1}});
  CHECK(inverse(a) * a == QMatrix::identity(2));
  auto x = solve(a, QMatrix::from_rows({{3}, {2}}));
  REQUIRE(x);
  CHECK(*x == QMatrix::from_rows({{1}, {1}}));
  QMatrix s = QMatrix::from_rows({{1, 1}, {1, 1}});
  CHECK_FALSE(solve(s, QMatrix::from_rows({{1}, {0}})));
  CHECK_THROWS(inverse(s));
}

TEST_CASE("orthogonal projector is symmetric idempotent with the right range") {
  QMatrix b = QMatrix::from_rows({{1}, {-1}, {0}});
  QMatrix p = orthogonal_projector(b, 3);
  CHECK(p * p == p);
  CHECK(p.transpose() == p);
  CHECK(p * b == b);
  CHECK(orthogonal_projector(QMatrix(3, 0), 3).is_zero());
}

TEST_CASE("rational strings round trip") {
  Rational r(-6, 4);
  r.canonicalize();
  CHECK(to_string(r) == "-3/2");
  CHECK(to_string(Rational(5)) == "5/1");
  CHECK(parse_rational("-3/2") == r);
  CHECK(parse_rational("7") == Rational(7));
}

TEST_CASE("Smith invariants match determinantal divisors") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t r = 1 + trial % 3, c = 1 + (trial * 7) % 4;
    QMatrix m = random_int_matrix(rng, r, c, -4, 4);
    if (trial % 4 == 0) m = random_low_rank(rng, r, c, 1);
    std::vector<mpz_class> inv = smith_invariants(m);
    CHECK(inv.size() == rank(m));
    mpz_class prod = 1;
    for (std::size_t k = 0; k < inv.size(); ++k) {
      CHECK(inv[k] > 0);
      if (k > 0) CHECK(inv[k] % inv[k - 1] == 0);
      prod *= inv[k];
      CHECK(prod == gcd_of_minors(m, k + 1));
    }
  }
  CHECK(smith_invariants(QMatrix::from_rows({{2, 3}})) == std::vector<mpz_class>{1});
  CHECK(smith_invariants(QMatrix::from_rows({{2, 0}, {0, 4}})) == std::vector<mpz_class>{2, 4});
}

#include "doctest.h"

#include <hcl/complex.hpp>
#include <hcl/errors.hpp>
#include <hcl/io.hpp>

#include <random>

using namespace hcl;

namespace {

// Float rank, a separate code path from the exact elimination.
std::size_t float_rank(const QMatrix& m) {
  if (m.empty()) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m.to_double());
  lu.setThreshold(1e-9);
  return static_cast<std::size_t>(lu.rank());
}

std::size_t float_betti(const CwComplex& x, int j) {
  return x.count(j) - float_rank(x.boundary(j)) - float_rank(x.boundary(j + 1));
}

QMatrix random_invertible(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> d(-2, 2);
  while (true) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
    if (rank(m) == n) return m;
  }
}

// Direct sum of elementary pieces Q -> Q, plus free degree-0 classes, then
// a random change of basis in every degree. Positively acyclic by design.
ChainComplex random_positively_acyclic(std::mt19937& rng, int top, int extra0) {
  std::uniform_int_distribution<int> pieces(0, 2);
  std::vector<int> elem(top + 1, 0);  // elem[j]: pieces spanning degrees j, j-1
  for (int j = 1; j <= top; ++j) elem[j] = pieces(rng);
  ChainComplex c;
  c.dims.resize(top + 1);
  for (int j = 0; j <= top; ++j)
    c.dims[j] = elem[j] + (j + 1 <= top ? elem[j + 1] : 0) + (j == 0 ? extra0 : 0);
  std::vector<QMatrix> basis(top + 1);
  for (int j = 0; j <= top; ++j) basis[j] = random_invertible(rng, c.dims[j]);
  c.d.assign(top + 1, QMatrix());
  c.d[0] = QMatrix(0, c.dims[0]);
  for (int j = 1; j <= top; ++j) {
    // in degree j the first elem[j] coordinates are sources, mapping onto
    // the last elem[j] coordinates of degree j-1
    QMatrix raw(c.dims[j - 1], c.dims[j]);
    std::size_t offset = c.dims[j - 1] - elem[j];
    for (int k = 0; k < elem[j]; ++k) raw(offset + k, k) = 1;
    c.d[j] = basis[j - 1] * raw * inverse(basis[j]);
  }
  return c;
}

}  // namespace

TEST_CASE("sphere fixtures have the expected Betti numbers") {
  for (int q = 1; q <= 4; ++q) {
    CwComplex s = sphere_complex(q);
    validate(s);
    for (int j = 0; j <= q; ++j) {
      std::size_t expected = (j == 0 || j == q) ? 1 : 0;
      CHECK(s.betti(j) == expected);
      CHECK(float_betti(s, j) == expected);
    }
    CwComplex w = sphere_wedge_complex(q);
    validate(w);
    for (int j = 0; j <= q; ++j) {
      std::size_t expected = (j == 0 || j == q) ? 1 : 0;
      CHECK(w.betti(j) == expected);
      CHECK(float_betti(w, j) == expected);
    }
  }
}

TEST_CASE("sphere top class is e+ - (-1)^q e-") {
  for (int q = 1; q <= 4; ++q) {
    CwComplex s = sphere_complex(q);
    QMatrix generator(2, 1);
    generator(0, 0) = 1;
    generator(1, 0) = (q % 2 == 0) ? -1 : 1;
    CHECK((s.boundary(q) * generator).is_zero());
  }
}

TEST_CASE("torsion fixture") {
  CwComplex t = torsion_complex();
  validate(t);
  // circle with disks glued by degrees 2 and 3 is simply connected with one 2-class
  CHECK(t.betti_numbers() == std::vector<std::size_t>{1, 0, 1});
  for (int j = 0; j <= 2; ++j) CHECK(float_betti(t, j) == t.betti(j));
}

TEST_CASE("quotient and minimal fixtures") {
  for (int q = 2; q <= 4; ++q)
    for (int p = 1; p < q; ++p) {
      CwComplex z = sphere_quotient_complex(q, p);
      validate(z);
      for (int j = 0; j <= q; ++j) {
        std::size_t expected = (j == 0 || j == p || j == q) ? 1 : 0;
        CHECK(z.betti(j) == expected);
        CHECK(float_betti(z, j) == expected);
      }
    }
  CwComplex m = minimal_sphere_complex(2);
  validate(m);
  CHECK(m.betti_numbers() == std::vector<std::size_t>{1, 0, 1});
  CwComplex k = complete_graph_complex(3);
  validate(k);
  CHECK(k.betti_numbers() == std::vector<std::size_t>{1, 1});
}

TEST_CASE("validation failures") {
  // D1 D2 != 0
  CwComplex bad("bad", {{"a", "b"}, {"e"}, {"f"}},
                {QMatrix::from_rows({{-1}, {1}}), QMatrix::from_rows({{1}})});
  CHECK_THROWS_AS(validate(bad), BoundarySquareNonzero);
  CwComplex two("two", {{"a", "b"}}, {});
  CHECK_THROWS_AS(validate(two), Disconnected);
  CHECK_THROWS_AS(CwComplex("shape", {{"a"}, {"e"}}, {QMatrix::from_rows({{1, 1}})}), ParseError);
}

TEST_CASE("JSON round trip and parse errors") {
  CwComplex s = sphere_complex(2);
  nlohmann::json j = complex_to_json(s);
  CwComplex back = complex_from_json(j);
  CHECK(back.name() == s.name());
  for (int d = 0; d <= 3; ++d) CHECK(back.boundary(d) == s.boundary(d));
  CHECK_THROWS_AS(complex_from_json(nlohmann::json::parse(R"({"name":"x"})")), ParseError);
  CHECK_THROWS_AS(complex_from_json(nlohmann::json::parse(
                      R"({"name":"x","cells":[["a","b"],["e"]],"boundary":[[[1,-1]]]})")),
                  ParseError);
  CHECK_THROWS_AS(parse_complex_text("{not json"), ParseError);
  CHECK_THROWS_AS(complex_from_json(nlohmann::json::parse(
                      R"({"name":"x","cells":[["a","b"],["e"],["f"]],"boundary":[[[-1],[1]],[[1]]]})")),
                  BoundarySquareNonzero);
}

TEST_CASE("gap complex degrees and homology") {
  auto s2 = std::make_shared<const CwComplex>(sphere_complex(2));
  auto g = make_gap_complex(s2, 0, 2);
  CHECK(g->length() == 2);
  CHECK(g->homology(0).betti() == 1);  // C_0 / B_0
  CHECK(g->homology(1).betti() == 0);
  CHECK(g->homology(2).betti() == 1);  // Z_2
  CHECK(g->homology(0).cycles.cols() == 2);
  CHECK(g->hp_embed().cols() == 1);
  // the sphere generator projects to a unit coordinate
  QMatrix gen = QMatrix::from_rows({{1}, {-1}});
  QMatrix c = g->hq_project(gen);
  CHECK(c.rows() == 1);
  CHECK((c(0, 0) == 1 || c(0, 0) == -1));
  CHECK_THROWS_AS(make_gap_complex(std::make_shared<const CwComplex>(sphere_quotient_complex(3, 2)), 0, 3), GapViolated);
  CHECK_NOTHROW(make_gap_complex(std::make_shared<const CwComplex>(sphere_complex(3)), 0, 3));
  CHECK_NOTHROW(make_gap_complex(std::make_shared<const CwComplex>(sphere_complex(3)), 1, 2));
  CHECK_THROWS_AS(make_gap_complex(s2, 0, 5), GapViolated);

  auto z = std::make_shared<const CwComplex>(sphere_quotient_complex(3, 1));
  auto gz = make_gap_complex(z, 1, 3);
  CHECK(gz->dim(0) == 2);
  CHECK(gz->homology(0).betti() == 1);
  CHECK(gz->homology(2).betti() == 1);

  // p = q keeps the whole of C_p in degree 0
  auto gp = make_gap_complex(s2, 2, 2);
  CHECK(gp->length() == 0);
  CHECK(gp->homology(0).betti() == 2);
}

TEST_CASE("contraction is a homotopy to the harmonic projection") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    int top = 1 + trial % 3;
    ChainComplex c = random_positively_acyclic(rng, top, trial % 2 + 1);
    for (int j = 2; j <= top; ++j) CHECK((c.d[j - 1] * c.d[j]).is_zero());
    Contraction h = contraction(c);
    for (int j = 0; j <= top; ++j) {
      QMatrix lhs(c.dims[j], c.dims[j]);
      if (j + 1 <= top) lhs += c.d[j + 1] * h.h[j];
      if (j >= 1) lhs += h.h[j - 1] * c.d[j];
      QMatrix expected = QMatrix::identity(c.dims[j]);
      if (j == 0) expected = expected - h.harmonic0;
      CHECK(lhs == expected);
    }
    CHECK(h.harmonic0 * h.harmonic0 == h.harmonic0);
    if (top >= 1) CHECK((h.harmonic0 * c.d[1]).is_zero());
  }
  auto s2 = std::make_shared<const CwComplex>(sphere_complex(2));
  CHECK_THROWS_AS(contraction(make_gap_complex(s2, 0, 2)->chain()), NotPositivelyAcyclic);
}

TEST_CASE("eth squares to zero") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> d(-3, 3);
  ChainComplex c = random_positively_acyclic(rng, 3, 1);
  for (int n = -1; n <= 2; ++n) {
    QGradedOperator f;
    f.degree = n;
    for (int j = 0; j <= c.top(); ++j) {
      if (j + n < 0 || j + n > c.top()) continue;
      QMatrix b(c.dims[j + n], c.dims[j]);
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t s = 0; s < b.cols(); ++s) b(r, s) = d(rng);
      f.blocks[j] = b;
    }
    QGradedOperator ef = eth(c, f);
    CHECK(ef.degree == n - 1);
    QGradedOperator eef = eth(c, ef);
    for (auto& [j, b] : eef.blocks) CHECK(b.is_zero());
    RGradedOperator fr;
    fr.degree = n;
    for (auto& [j, b] : f.blocks) fr.blocks[j] = b.to_double();
    RGradedOperator efr = eth(c, fr);
    for (auto& [j, b] : ef.blocks) CHECK((efr.blocks.at(j) - b.to_double()).norm() < 1e-12);
  }
}

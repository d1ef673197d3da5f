#include "doctest.h"

#include <hcl/errors.hpp>
#include <hcl/topo_hyper.hpp>

#include <random>

using namespace hcl;

namespace {

std::shared_ptr<const GapComplex> gap(CwComplex x, int p, int q) {
  return make_gap_complex(std::make_shared<const CwComplex>(std::move(x)), p, q);
}

QMatrix pair_with_fundamental(const SimplicialProtocol& s) {
  CellularProtocol c = s.cellular();
  TopologicalCochain j = hypercurrent_cochain(c);
  CHECK(verify_cochain(c, j));
  return hypercurrent_matrix(c, j, c.fundamental);
}

bool is_unit(const QMatrix& m) {
  return m.rows() == 1 && m.cols() == 1 && (m(0, 0) == 1 || m(0, 0) == -1);
}

}  // namespace

TEST_CASE("square: the current is the generator of H_1") {
  SimplicialProtocol s = square_protocol();
  CellularProtocol c = s.cellular();
  TopologicalCochain j = hypercurrent_cochain(c);
  CHECK(verify_cochain(c, j));
  HomologyPairing out = hypercurrent_homology(c, j, c.fundamental, QMatrix::from_rows({{1}, {0}}));
  // e1+ + e1- up to sign
  bool plus = out.chain == QMatrix::from_rows({{1}, {1}});
  bool minus = out.chain == QMatrix::from_rows({{-1}, {-1}});
  CHECK((plus || minus));
  CHECK(is_unit(out.classes));
  // another representative of the same class gives the same chain
  HomologyPairing other = hypercurrent_homology(c, j, c.fundamental, QMatrix::from_rows({{0}, {1}}));
  CHECK(other.chain == out.chain);
}

TEST_CASE("cube spheres give a generator") {
  for (int q = 1; q <= 3; ++q) CHECK(is_unit(pair_with_fundamental(cube_sphere_protocol(q))));
  SimplicialProtocol s2 = cube_sphere_protocol(2);
  CellularProtocol c2 = s2.cellular();
  auto j2 = hypercurrent_cochain(c2);
  HomologyPairing out = hypercurrent_homology(c2, j2, c2.fundamental, QMatrix::from_rows({{1}, {0}}));
  QMatrix gen = QMatrix::from_rows({{-1}, {1}});
  CHECK((out.chain == gen || out.chain == -gen));
}

TEST_CASE("wedge gives zero") {
  for (int q = 1; q <= 3; ++q) {
    SimplicialProtocol s = cube_protocol(gap(sphere_wedge_complex(q), 0, q));
    QMatrix m = pair_with_fundamental(s);
    CHECK(m.is_zero());
  }
}

TEST_CASE("quotient sphere shifts the degree") {
  for (int q = 2; q <= 3; ++q)
    for (int p = 1; p < q; ++p) CHECK(is_unit(pair_with_fundamental(cube_protocol(gap(sphere_quotient_complex(q, p), p, q)))));
}

TEST_CASE("subdivision and cellular structure do not change the class") {
  for (int q = 1; q <= 2; ++q) {
    QMatrix base = pair_with_fundamental(cube_sphere_protocol(q, 1));
    for (int n = 2; n <= 3; ++n) CHECK(pair_with_fundamental(cube_sphere_protocol(q, n)) == base);
    auto g = gap(sphere_complex(q), 0, q);
    CellularProtocol c = cube_cellular_protocol(g);
    TopologicalCochain j = hypercurrent_cochain(c);
    CHECK(verify_cochain(c, j));
    CHECK(hypercurrent_matrix(c, j, c.fundamental) == base);
  }
  {
    auto g = gap(sphere_complex(3), 0, 3);
    CellularProtocol c = cube_cellular_protocol(g);
    TopologicalCochain j = hypercurrent_cochain(c);
    CHECK(hypercurrent_matrix(c, j, c.fundamental) == pair_with_fundamental(cube_sphere_protocol(3)));
  }
}

TEST_CASE("p equal to q is the identity") {
  auto g = gap(sphere_complex(2), 2, 2);
  SimplicialProtocol s(g, {"b"}, {WeightPoint{2, {{0.0, 1.0}}}}, {});
  CellularProtocol c = s.cellular();
  TopologicalCochain j = hypercurrent_cochain(c);
  QMatrix cycle = QMatrix::from_rows({{1}, {-1}});
  HomologyPairing out = hypercurrent_homology(c, j, {1}, cycle);
  CHECK(out.chain == cycle);
}

TEST_CASE("addendum cases vanish") {
  CHECK(addendum_predicts_trivial(torsion_complex(), 0, 2));
  CHECK(addendum_predicts_trivial(minimal_sphere_complex(2), 0, 2));
  CHECK_FALSE(addendum_predicts_trivial(sphere_complex(2), 0, 2));
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto [x, tag] : {std::pair{torsion_complex(), 0}, std::pair{minimal_sphere_complex(2), 1}}) {
    auto g = gap(x, 0, 2);
    auto fn = [&, g](const std::vector<double>&) {
      WeightPoint w{0, {}};
      for (int k = 0; k <= 2; ++k) {
        std::vector<double> level(g->parent().count(k));
        for (auto& v : level) v = u(rng);
        w.levels.push_back(level);
      }
      return w;
    };
    SimplicialProtocol s = cube_protocol(g, 1, fn);
    CellularProtocol c = s.cellular();
    Smallness sm = smallness(c);
    if (!sm.small()) continue;
    TopologicalCochain j = hypercurrent_cochain(c);
    CHECK(verify_cochain(c, j));
    CHECK(hypercurrent_matrix(c, j, c.fundamental).is_zero());
    (void)tag;
  }
}

TEST_CASE("failures") {
  auto g = gap(sphere_complex(1), 0, 1);
  WeightPoint ok{0, {{0, 1}, {0, 1}}};
  WeightPoint flip{0, {{1, 0}, {1, 0}}};
  WeightPoint tie{0, {{0, 0}, {0, 0}}};
  SimplicialProtocol notsmall(g, {"a", "b"}, {ok, flip}, {Simplex{{0, 1}, 1}});
  CHECK_THROWS_AS(hypercurrent_cochain(notsmall.cellular()), NotSmall);
  SimplicialProtocol notgood(g, {"a"}, {tie}, {});
  CHECK_THROWS_AS(hypercurrent_cochain(notgood.cellular()), NotGood);
  SimplicialProtocol s = square_protocol();
  CellularProtocol c = s.cellular();
  auto j = hypercurrent_cochain(c);
  std::vector<long long> broken = c.fundamental;
  for (std::size_t i = 0; i < broken.size(); ++i)
    if (broken[i] != 0) {
      broken[i] = 0;
      break;
    }
  CHECK_THROWS_AS(hypercurrent_homology(c, j, broken, QMatrix::from_rows({{1}, {0}})), NotACycle);
  // wrong length is rejected; for q = 1 every 0-chain is a cycle
  CHECK_THROWS_AS(hypercurrent_homology(c, j, c.fundamental, QMatrix::from_rows({{1}})), BadCoordinates);
}

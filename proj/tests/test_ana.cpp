#include "doctest.h"

#include <hcl/ana_hyper.hpp>
#include <hcl/errors.hpp>
#include <hcl/topo_hyper.hpp>

#include <cmath>
#include <random>

using namespace hcl;

namespace {

std::shared_ptr<const GapComplex> gap(CwComplex x, int p, int q) {
  return make_gap_complex(std::make_shared<const CwComplex>(std::move(x)), p, q);
}

// Entrywise relative error; structural zeros are compared against a floor
// tied to the size of the matrix.
double entrywise_rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  double worst = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      double m = std::max({std::abs(a(i, j)), std::abs(b(i, j)), 1e-15 * scale});
      if (m == 0) continue;
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / m);
    }
  return worst;
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

std::vector<std::vector<double>> edge_frame(int n, int ell) {
  std::vector<std::vector<double>> f;
  for (int i = 1; i <= ell; ++i) {
    std::vector<double> u(n + 1, 0.0);
    u[0] = -1;
    u[i] = 1;
    f.push_back(u);
  }
  return f;
}

std::size_t first_top(const SimplicialProtocol& s) {
  for (std::size_t i = 0; i < s.simplices().size(); ++i)
    if (s.simplices()[i].dim() == s.dimension()) return i;
  return 0;
}

}  // namespace

TEST_CASE("Kirchhoff sums equal the weighted least-squares inverse") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  struct Case {
    std::shared_ptr<const GapComplex> g;
    double tol;
    double max_beta;
  };
  std::vector<Case> cases = {{gap(sphere_complex(2), 0, 2), 1e-10, 20},
                             {gap(torsion_complex(), 0, 2), 1e-10, 20},
                             {gap(torsion_complex(), 1, 2), 1e-10, 20},
                             {gap(sphere_quotient_complex(3, 1), 1, 3), 1e-10, 20},
                             {gap(complete_graph_complex(4), 0, 1), 1e-8, 5}};
  for (auto& c : cases) {
    AnalyticModel m(c.g);
    for (double beta : {0.5, 1.0, 5.0, 20.0}) {
      if (beta > c.max_beta) continue;
      for (int trial = 0; trial < 25; ++trial)
        for (int level = c.g->p(); level <= c.g->q(); ++level) {
          std::vector<double> w(c.g->parent().count(level));
          for (auto& x : w) x = u(rng);
          Eigen::MatrixXd direct = weighted_pseudoinverse(*c.g, level, w, beta);
          Eigen::MatrixXd trees = kirchhoff_pseudoinverse(m, level, w, beta);
          CHECK(entrywise_rel(direct, trees) <= c.tol);
          auto rho = tree_distribution(m, level, w, beta);
          double s = 0;
          for (double r : rho) s += r;
          CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
  }
}

TEST_CASE("level-p pseudoinverse and alpha_0") {
  auto g = gap(sphere_complex(2), 0, 2);
  std::vector<double> e = {0.3, -0.4};
  double beta = 2;
  Eigen::MatrixXd a = alpha0(*g, e, beta);
  // columns carry the Boltzmann weights exp(-beta E) normalised
  double z = std::exp(-beta * e[0]) + std::exp(-beta * e[1]);
  CHECK(a(0, 0) == doctest::Approx(std::exp(-beta * e[0]) / z));
  CHECK(a(1, 0) == doctest::Approx(std::exp(-beta * e[1]) / z));
  CHECK(a(0, 1) == doctest::Approx(std::exp(-beta * e[0]) / z));
  CHECK((a * a - a).norm() < 1e-14);
  CHECK(rel(weighted_pseudoinverse(*g, 0, e, beta), a - Eigen::MatrixXd::Identity(2, 2)) < 1e-15);
}

TEST_CASE("degree-one current against a finite-difference route") {
  for (auto s : {square_protocol(), cube_sphere_protocol(2)}) {
    AnalyticModel m(s.gap_ptr());
    const GapComplex& g = s.gap();
    std::mt19937 rng(2);
    std::exponential_distribution<double> ex(1);
    for (std::size_t idx = 0; idx < s.simplices().size(); ++idx) {
      const Simplex& x = s.simplices()[idx];
      if (x.dim() < 1) continue;
      for (double beta : {1.0, 4.0}) {
        std::vector<double> bary(x.vertices.size());
        double sum = 0;
        for (auto& t : bary) sum += (t = ex(rng));
        for (auto& t : bary) t /= sum;
        auto frame = edge_frame(x.dim(), 1);
        Eigen::MatrixXd j1 = jan_form(m, s, beta, idx, bary, frame, 1);
        // d alpha_0 along the frame, then the least-squares inverse at the point
        double h = 1e-5;
        auto shifted = [&](double t) {
          auto b = bary;
          for (std::size_t k = 0; k < b.size(); ++k) b[k] += t * frame[0][k];
          return alpha0(g, s.weights_affine(idx, b).at(g.p()), beta);
        };
        Eigen::MatrixXd da = (shifted(h) - shifted(-h)) / (2 * h);
        Eigen::MatrixXd inv = weighted_pseudoinverse(g, g.p() + 1, s.weights_at(idx, bary).at(g.p() + 1), beta);
        CHECK(rel(j1, inv * da) < 1e-6);
        Eigen::MatrixXd j0 = jan_form(m, s, beta, idx, bary, {}, 0);
        CHECK(rel(j0, alpha0(g, s.weights_at(idx, bary).at(g.p()), beta)) < 1e-14);
      }
    }
  }
}

TEST_CASE("degree-two current against a finite-difference route") {
  SimplicialProtocol s = cube_sphere_protocol(2);
  AnalyticModel m(s.gap_ptr());
  const GapComplex& g = s.gap();
  std::mt19937 rng(8);
  std::exponential_distribution<double> ex(1);
  std::normal_distribution<double> nd;
  for (std::size_t idx = 0; idx < s.simplices().size(); ++idx) {
    if (s.simplices()[idx].dim() != 2) continue;
    std::vector<double> bary(3);
    double sum = 0;
    for (auto& t : bary) sum += (t = ex(rng));
    for (auto& t : bary) t /= sum;
    std::vector<std::vector<double>> frame(2, std::vector<double>(3));
    for (auto& v : frame) {
      double mean = 0;
      for (auto& c : v) mean += (c = nd(rng)) / 3;
      for (auto& c : v) c -= mean;
    }
    double beta = 3, h = 1e-5;
    auto j1_at = [&](int dir, double t, int arg) {
      auto b = bary;
      for (int k = 0; k < 3; ++k) b[k] += t * frame[dir][k];
      return jan_form(m, s, beta, idx, b, {frame[arg]}, 1);
    };
    // dJ_1(u, v) = D_u J_1(v) - D_v J_1(u)
    Eigen::MatrixXd dj = (j1_at(0, h, 1) - j1_at(0, -h, 1)) / (2 * h) - (j1_at(1, h, 0) - j1_at(1, -h, 0)) / (2 * h);
    Eigen::MatrixXd inv = weighted_pseudoinverse(g, 2, s.weights_at(idx, bary).at(2), beta);
    Eigen::MatrixXd j2 = jan_form(m, s, beta, idx, bary, frame, 2);
    CHECK(rel(j2, inv * dj) < 1e-6);
  }
}

TEST_CASE("integral over the top side of the square") {
  SimplicialProtocol s = square_protocol();
  AnalyticModel m(s.gap_ptr());
  const GapComplex& g = s.gap();
  for (std::size_t idx = 0; idx < s.simplices().size(); ++idx) {
    const Simplex& x = s.simplices()[idx];
    if (x.dim() != 1) continue;
    double beta = 6;
    QuadratureOptions opt;
    opt.tol = 1e-12;
    RGradedOperator r = jan_integrate(m, s, beta, idx, opt);
    // the level-one weights are constant on horizontal sides, so Stokes is exact
    const auto& w0 = s.vertex_weights(x.vertices[0]);
    const auto& w1 = s.vertex_weights(x.vertices[1]);
    if (w0.at(1) != w1.at(1)) continue;
    Eigen::MatrixXd inv = weighted_pseudoinverse(g, 1, w0.at(1), beta);
    Eigen::MatrixXd expect = x.orientation * inv * (alpha0(g, w1.at(0), beta) - alpha0(g, w0.at(0), beta));
    CHECK(rel(r.blocks.at(0), expect) < 1e-9);
  }
}

TEST_CASE("analytical pairing on the square is tanh^2 of beta/2 times the topological one") {
  SimplicialProtocol s = square_protocol();
  AnalyticModel m(s.gap_ptr());
  CellularProtocol c = s.cellular();
  QMatrix top = hypercurrent_homology(c, hypercurrent_cochain(c), c.fundamental, QMatrix::from_rows({{1}, {0}})).classes;
  QuadratureOptions opt;
  opt.tol = 1e-12;
  auto rep = quantization_sweep(m, s, s.fundamental_cycle(), QMatrix::from_rows({{1}, {0}}), {1, 3, 8}, opt, 1, 8);
  for (auto& row : rep.rows) {
    double t = std::tanh(row.beta / 2);
    CHECK(row.analytic.at(0) == doctest::Approx(top(0, 0).get_d() * t * t).epsilon(1e-9));
    CHECK(row.max_residual < 1e-9);
  }
  CHECK(rep.energy_gap == doctest::Approx(1.0));
}

TEST_CASE("analytical cochain is closed and the axioms hold") {
  SimplicialProtocol s = cube_sphere_protocol(2);
  AnalyticModel m(s.gap_ptr());
  AnalyticCochain ac = jan_cochain(m, s, 3.0);
  CHECK(ac.max_residual() < 1e-6);
  AxiomReport ax = axioms_check(m, s, 5.0, 10, 1);
  CHECK(ax.samples == 10);
  CHECK(ax.a1 < 1e-5);
  CHECK(ax.a2 < 1e-10);
  CHECK(ax.a3 < 1e-10);
  CHECK(ax.zeta_independence < 1e-10);
}

TEST_CASE("argument validation") {
  SimplicialProtocol s = cube_sphere_protocol(2);
  AnalyticModel m(s.gap_ptr());
  std::size_t t = first_top(s);
  std::vector<double> b = {0.2, 0.3, 0.5};
  CHECK_THROWS_AS(jan_form(m, s, 1.0, t, b, edge_frame(2, 1), 2), BadFrame);
  CHECK_THROWS_AS(jan_form(m, s, 1.0, t, b, {{1, 0, 0}}, 1), BadFrame);
  CHECK_THROWS_AS(jan_form(m, s, 0.0, t, b, edge_frame(2, 1), 1), NonpositiveBeta);
  CHECK_THROWS_AS(jan_form(m, s, 1.0, t, {0.5, 0.6, 0.1}, edge_frame(2, 1), 1), BadCoordinates);
  std::vector<std::vector<double>> three(3, std::vector<double>{-1, 1, 0});
  CHECK_THROWS_AS(jan_form(m, s, 1.0, t, b, three, 3), BadFrame);
}

TEST_CASE("energy gap on the cube") {
  SimplicialProtocol s = cube_sphere_protocol(2);
  for (std::size_t i = 0; i < s.simplices().size(); ++i)
    if (s.simplices()[i].dim() == 2) CHECK(energy_gap(s, i) == doctest::Approx(1.0));
}

#include "doctest.h"

#include <hcl/ana_hyper.hpp>
#include <hcl/errors.hpp>
#include <hcl/graph_dynamics.hpp>
#include <hcl/protocol.hpp>

#include <cmath>
#include <random>

using namespace hcl;

namespace {

CwComplex segment() { return CwComplex("segment", {{"a", "b"}, {"ab"}}, {QMatrix::from_rows({{-1}, {1}})}); }

}  // namespace

TEST_CASE("arrhenius rates and the master operator") {
  StateDiagram g = state_diagram(segment());
  CHECK(g.arrows.size() == 2);
  auto r0 = rates(g, {0, 0}, {0});
  CHECK(r0[0] == 1.0);
  CHECK(r0[1] == 1.0);
  CHECK(rates(g, {0.7, 0.7}, {0.7})[0] == 1.0);
  auto r = rates(g, {0, std::log(2.0)}, {0});
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(2.0));
  Eigen::MatrixXd h = master_operator(g, {0, 0}, {0});
  CHECK(h(0, 0) == -1);
  CHECK(h(0, 1) == 1);
  CHECK(h(1, 0) == 1);
  CHECK(h(1, 1) == -1);
  Eigen::MatrixXd h2 = master_operator(g, {0, std::log(2.0)}, {0});
  CHECK(h2(0, 0) == doctest::Approx(-1));
  CHECK(h2(0, 1) == doctest::Approx(2));
  CHECK(h2(1, 0) == doctest::Approx(1));
  CHECK(h2(1, 1) == doctest::Approx(-2));
}

TEST_CASE("constant rates give the negated graph Laplacian; H = -d d*") {
  StateDiagram g = state_diagram(complete_graph_complex(4));
  CHECK(g.arrows.size() == 12);
  std::vector<double> zero_e(4, 0.0), zero_w(6, 0.0);
  Eigen::MatrixXd h = master_operator(g, zero_e, zero_w);
  Eigen::MatrixXd d = g.boundary.to_double();
  CHECK((h + d * d.transpose()).cwiseAbs().maxCoeff() < 1e-15);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> e(4), w(6);
    for (auto& x : e) x = u(rng);
    for (auto& x : w) x = u(rng);
    Eigen::MatrixXd hm = master_operator(g, e, w);
    CHECK(hm.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) CHECK(hm(i, j) >= 0);
    Eigen::VectorXd m0(4), m1inv(6);
    for (int i = 0; i < 4; ++i) m0[i] = std::exp(e[i]);
    for (int a = 0; a < 6; ++a) m1inv[a] = std::exp(-w[a]);
    Eigen::MatrixXd dd = d * m1inv.asDiagonal() * d.transpose() * m0.asDiagonal();
    CHECK((hm + dd).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::VectorXd rho = boltzmann(g, e);
    CHECK((hm * rho).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(rho.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("boltzmann distribution") {
  StateDiagram g = state_diagram(segment());
  Eigen::VectorXd u = boltzmann(g, {0, 0});
  CHECK(std::abs(u[0] - 0.5) < 1e-15);
  Eigen::VectorXd r = boltzmann(g, {0, std::log(2.0)});
  CHECK(std::abs(r[0] - 2.0 / 3) <= 1e-12);
  CHECK(std::abs(r[1] - 1.0 / 3) <= 1e-12);
}

TEST_CASE("two-state relaxation has the closed form") {
  StateDiagram g = state_diagram(segment());
  Eigen::VectorXd p0(2);
  p0 << 1, 0;
  Trajectory tr = evolve(g, constant_protocol({0, 0}, {0}), p0, 0, 2, 400);
  REQUIRE(tr.states.size() == 401);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    double t = tr.times[k];
    CHECK(std::abs(tr.states[k][0] - (1 + std::exp(-2 * t)) / 2) < 1e-10);
    CHECK(std::abs(tr.states[k][1] - (1 - std::exp(-2 * t)) / 2) < 1e-10);
  }
}

TEST_CASE("equilibrium start stays put and mass is conserved") {
  StateDiagram g = state_diagram(complete_graph_complex(4));
  std::vector<double> e = {0.1, -0.3, 0.5, 0.0}, w = {0.2, 0.4, -0.1, 0.3, 0.0, 0.6};
  Eigen::VectorXd rho = boltzmann(g, e);
  Trajectory tr = evolve(g, constant_protocol(e, w), rho, 0, 5, 1000);
  for (auto& s : tr.states) CHECK((s - rho).cwiseAbs().maxCoeff() <= 1e-9);

  // a driven loop
  TimeProtocol drive;
  drive.e = [](double t) { return std::vector<double>{std::sin(t), std::cos(t), 0.0, -std::sin(2 * t)}; };
  drive.w = [](double t) { return std::vector<double>(6, 0.3 * std::cos(t)); };
  Eigen::VectorXd p0 = Eigen::VectorXd::Zero(4);
  p0[2] = 1;
  Trajectory d = evolve(g, drive, p0, 0, 20, 10000);
  for (auto& s : d.states) {
    CHECK(std::abs(s.sum() - 1) <= 1e-9);
    CHECK(s.minCoeff() >= -1e-9);
  }
}

TEST_CASE("piecewise linear protocols interpolate") {
  TimeProtocol g = piecewise_linear({{0, {0, 1}, {2}}, {2, {2, 1}, {0}}});
  CHECK(g.e(1)[0] == doctest::Approx(1));
  CHECK(g.w(1)[0] == doctest::Approx(1));
  CHECK(g.e(-1)[0] == 0);
  CHECK(g.e(5)[0] == 2);
}

TEST_CASE("evolve rejects bad input and large steps") {
  StateDiagram g = state_diagram(segment());
  Eigen::VectorXd bad(2);
  bad << 0.7, 0.7;
  CHECK_THROWS_AS(evolve(g, constant_protocol({0, 0}, {0}), bad, 0, 1, 10), ValidationError);
  Eigen::VectorXd p0(2);
  p0 << 1, 0;
  CHECK_THROWS_AS(evolve(g, constant_protocol({0, 0}, {-8}), p0, 0, 10, 10), StepTooLarge);
  CwComplex two("two", {{"a", "b", "c"}, {"ab"}}, {QMatrix::from_rows({{-1}, {1}, {0}})});
  CHECK_THROWS_AS(state_diagram(two), Disconnected);
}

TEST_CASE("graph current agrees with the first analytical form") {
  SimplicialProtocol s = square_protocol();
  AnalyticModel m(s.gap_ptr());
  const GapComplex& gap = s.gap();
  CwComplex circle("circle", {{"e0+", "e0-"}, {"e1+", "e1-"}}, {gap.parent().boundary(1)});
  StateDiagram g = state_diagram(circle);
  std::mt19937 rng(3);
  std::exponential_distribution<double> ex(1);
  std::normal_distribution<double> nd;
  const int n = s.dimension();
  int nontrivial = 0;
  for (std::size_t idx = 0; idx < s.simplices().size(); ++idx) {
    if (s.simplices()[idx].dim() != n) continue;
    std::vector<double> b(n + 1);
    double sum = 0;
    for (auto& x : b) sum += (x = ex(rng));
    for (auto& x : b) x /= sum;
    std::vector<double> u(n + 1);
    double mean = 0;
    for (auto& x : u) mean += (x = nd(rng)) / (n + 1);
    for (auto& x : u) x -= mean;
    WeightPoint w = s.weights_at(idx, b);
    std::vector<double> de(2, 0.0);
    for (int v = 0; v <= n; ++v)
      for (int k = 0; k < 2; ++k) de[k] += u[v] * s.vertex_weights(s.simplices()[idx].vertices[v]).at(0)[k];
    Eigen::VectorXd jg = current_form(g, w.at(0), w.at(1), de, 1.0);
    Eigen::MatrixXd ja = jan_form(m, s, 1.0, idx, b, {u}, 1);
    Eigen::VectorXd col = ja.col(0);
    if (col.cwiseAbs().maxCoeff() > 1e-3) ++nontrivial;
    CHECK((jg - col).cwiseAbs().maxCoeff() / std::max(1.0, col.cwiseAbs().maxCoeff()) <= 1e-8);
  }
  CHECK(nontrivial >= 2);
}

#include <hcl/graph_dynamics.hpp>
#include <hcl/errors.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hcl {

StateDiagram state_diagram(const CwComplex& graph) {
  StateDiagram g;
  g.vertices = graph.count(0);
  g.edges = graph.count(1);
  g.boundary = graph.boundary(1);
  std::vector<std::size_t> parent(g.vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t a = 0; a < g.edges; ++a) {
    std::vector<std::size_t> tail, head;
    for (std::size_t v = 0; v < g.vertices; ++v) {
      const Rational& c = g.boundary(v, a);
      if (c == -1) tail.push_back(v);
      else if (c == 1) head.push_back(v);
      else if (c != 0) throw ValidationError("edge " + graph.cell_name(1, a) + " is not a graph edge");
    }
    if (tail.size() != 1 || head.size() != 1)
      throw ValidationError("edge " + graph.cell_name(1, a) + " needs two distinct endpoints");
    g.arrows.push_back({tail[0], head[0], a});
    g.arrows.push_back({head[0], tail[0], a});
    parent[find(tail[0])] = find(head[0]);
  }
  for (std::size_t v = 1; v < g.vertices; ++v)
    if (find(v) != find(0)) throw Disconnected("state graph is disconnected");
  return g;
}

namespace {

void check_sizes(const StateDiagram& g, const std::vector<double>& e, const std::vector<double>& w) {
  if (e.size() != g.vertices || w.size() != g.edges) throw ValidationError("weights do not match the graph");
}

}  // namespace

std::vector<double> rates(const StateDiagram& g, const std::vector<double>& e, const std::vector<double>& w) {
  check_sizes(g, e, w);
  std::vector<double> r;
  for (const auto& a : g.arrows) r.push_back(std::exp(e[a.source] - w[a.edge]));
  return r;
}

Eigen::MatrixXd master_operator(const StateDiagram& g, const std::vector<double>& e, const std::vector<double>& w) {
  auto r = rates(g, e, w);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(g.vertices, g.vertices);
  for (std::size_t k = 0; k < g.arrows.size(); ++k) {
    h(g.arrows[k].target, g.arrows[k].source) += r[k];
    h(g.arrows[k].source, g.arrows[k].source) -= r[k];
  }
  return h;
}

Eigen::VectorXd boltzmann(const StateDiagram& g, const std::vector<double>& e, double beta) {
  if (e.size() != g.vertices) throw ValidationError("weights do not match the graph");
  // ker(M1^{-1} D^T M0) = M0^{-1} ker(D^T); the kernel of D^T is exact
  QMatrix k = kernel_basis(g.boundary.transpose());
  if (k.cols() != 1) throw Disconnected("state graph is disconnected");
  double top = *std::min_element(e.begin(), e.end());
  Eigen::VectorXd rho = k.to_double().col(0);
  for (std::size_t i = 0; i < g.vertices; ++i) rho[i] *= std::exp(-beta * (e[i] - top));
  return rho / rho.sum();
}

Eigen::VectorXd current_form(const StateDiagram& g, const std::vector<double>& e, const std::vector<double>& w,
                             const std::vector<double>& de, double beta) {
  check_sizes(g, e, w);
  if (de.size() != g.vertices) throw ValidationError("tangent does not match the graph");
  if (!(beta > 0)) throw NonpositiveBeta("beta must be positive");
  Eigen::VectorXd rho = boltzmann(g, e, beta);
  double mean = 0;
  for (std::size_t i = 0; i < g.vertices; ++i) mean += rho[i] * de[i];
  Eigen::VectorXd drho(g.vertices);
  for (std::size_t i = 0; i < g.vertices; ++i) drho[i] = beta * rho[i] * (mean - de[i]);
  // least e^{beta W}-norm solution of D x = d rho
  double wmin = *std::min_element(w.begin(), w.end());
  Eigen::VectorXd minv(g.edges);
  for (std::size_t a = 0; a < g.edges; ++a) minv[a] = std::exp(-beta * (w[a] - wmin));
  Eigen::MatrixXd d = g.boundary.to_double();
  Eigen::MatrixXd lap = d * minv.asDiagonal() * d.transpose();
  Eigen::VectorXd y = lap.completeOrthogonalDecomposition().solve(drho);
  return minv.asDiagonal() * (d.transpose() * y);
}

TimeProtocol constant_protocol(std::vector<double> e, std::vector<double> w) {
  return {[e](double) { return e; }, [w](double) { return w; }};
}

TimeProtocol piecewise_linear(std::vector<Knot> knots) {
  if (knots.empty()) throw ValidationError("protocol needs at least one knot");
  std::sort(knots.begin(), knots.end(), [](const Knot& a, const Knot& b) { return a.t < b.t; });
  auto interp = [knots](double t, bool edges) {
    auto pick = [&](const Knot& k) -> const std::vector<double>& { return edges ? k.w : k.e; };
    if (t <= knots.front().t) return pick(knots.front());
    if (t >= knots.back().t) return pick(knots.back());
    auto hi = std::upper_bound(knots.begin(), knots.end(), t, [](double x, const Knot& k) { return x < k.t; });
    auto lo = hi - 1;
    double s = (t - lo->t) / (hi->t - lo->t);
    std::vector<double> out(pick(*lo).size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1 - s) * pick(*lo)[i] + s * pick(*hi)[i];
    return out;
  };
  return {[interp](double t) { return interp(t, false); }, [interp](double t) { return interp(t, true); }};
}

Trajectory evolve(const StateDiagram& g, const TimeProtocol& gamma, const Eigen::VectorXd& p0, double t0, double t1,
                  std::size_t steps, const EvolveOptions& opt) {
  if (static_cast<std::size_t>(p0.size()) != g.vertices) throw ValidationError("initial state has the wrong size");
  if (p0.minCoeff() < 0 || std::abs(p0.sum() - 1) > 1e-12) throw ValidationError("initial state is not a distribution");
  if (steps == 0 || !(t1 > t0)) throw ValidationError("need t1 > t0 and at least one step");
  auto h_at = [&](double t) { return master_operator(g, gamma.e(t), gamma.w(t)); };
  auto rk4 = [&](double t, double dt, const Eigen::VectorXd& p) {
    Eigen::MatrixXd ha = h_at(t), hm = h_at(t + dt / 2), hb = h_at(t + dt);
    Eigen::VectorXd k1 = ha * p;
    Eigen::VectorXd k2 = hm * (p + dt / 2 * k1);
    Eigen::VectorXd k3 = hm * (p + dt / 2 * k2);
    Eigen::VectorXd k4 = hb * (p + dt * k3);
    return Eigen::VectorXd(p + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4));
  };
  Trajectory tr;
  const double dt = (t1 - t0) / static_cast<double>(steps);
  Eigen::VectorXd p = p0;
  tr.times.push_back(t0);
  tr.states.push_back(p);
  for (std::size_t k = 0; k < steps; ++k) {
    double t = t0 + dt * static_cast<double>(k);
    Eigen::VectorXd full = rk4(t, dt, p);
    Eigen::VectorXd half = rk4(t + dt / 2, dt / 2, rk4(t, dt / 2, p));
    double err = (full - half).cwiseAbs().maxCoeff() / 15;
    if (!(err <= opt.tol)) throw StepTooLarge("step error " + std::to_string(err) + " at t = " + std::to_string(t));
    // Richardson extrapolation keeps the column sums at zero
    p = half + (half - full) / 15;
    tr.times.push_back(t0 + dt * static_cast<double>(k + 1));
    tr.states.push_back(p);
  }
  return tr;
}

}  // namespace hcl

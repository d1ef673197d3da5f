#pragma once

#include <hcl/complex.hpp>

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace hcl {

// The double of a graph: each edge alpha = (i, j) gives (i, alpha) and (j, alpha),
// each leaving its first vertex.
struct DirectedEdge {
  std::size_t source = 0, target = 0, edge = 0;
};

struct StateDiagram {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::vector<DirectedEdge> arrows;
  QMatrix boundary;  // D_1 of the graph
};

// Uses cells of dimension 0 and 1. Throws ValidationError unless every edge
// column has one -1 and one +1, and Disconnected for a disconnected graph.
StateDiagram state_diagram(const CwComplex& graph);

// e^{E_source - W_edge} per arrow.
std::vector<double> rates(const StateDiagram& g, const std::vector<double>& e, const std::vector<double>& w);
// H(target, source) = rate, columns sum to zero.
Eigen::MatrixXd master_operator(const StateDiagram& g, const std::vector<double>& e, const std::vector<double>& w);

// Normalised kernel of the weighted adjoint of the boundary; proportional to exp(-beta E).
Eigen::VectorXd boltzmann(const StateDiagram& g, const std::vector<double>& e, double beta = 1.0);

// Current 1-form J = d-dagger(d rho) on a tangent where E moves by de; edges carry metric e^{beta W}.
Eigen::VectorXd current_form(const StateDiagram& g, const std::vector<double>& e, const std::vector<double>& w,
                             const std::vector<double>& de, double beta = 1.0);

// Weights as functions of time.
struct TimeProtocol {
  std::function<std::vector<double>(double)> e;
  std::function<std::vector<double>(double)> w;
};

// Linear interpolation between knots, constant outside.
struct Knot {
  double t = 0;
  std::vector<double> e, w;
};
TimeProtocol piecewise_linear(std::vector<Knot> knots);
TimeProtocol constant_protocol(std::vector<double> e, std::vector<double> w);

struct EvolveOptions {
  double tol = 1e-8;  // allowed step-doubling error per step
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
};

// Classical RK4 on p' = H(t) p over a uniform grid. Throws StepTooLarge when a
// step disagrees with two half steps by more than tol, ValidationError for a
// bad initial distribution.
Trajectory evolve(const StateDiagram& g, const TimeProtocol& gamma, const Eigen::VectorXd& p0, double t0, double t1,
                  std::size_t steps, const EvolveOptions& opt = {});

}  // namespace hcl

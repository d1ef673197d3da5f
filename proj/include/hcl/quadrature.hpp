#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <vector>

namespace hcl {

// Points in barycentric coordinates, weights normalised to sum to one.
struct QuadratureRule {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
};

// Grundmann-Moller rule of degree 2s+1 on the n-simplex.
QuadratureRule grundmann_moller(int n, int s);

// The 2^n children of the Freudenthal subdivision, each as n+1 vertices in
// barycentric coordinates of the parent.
std::vector<std::vector<std::vector<double>>> freudenthal_children(int n);

struct QuadratureOptions {
  double tol = 1e-8;   // absolute, on the largest entry
  int max_depth = 16;  // dyadic refinement levels
  int min_depth = 1;
  std::size_t max_regions = 4'000'000;
};

struct QuadratureResult {
  Eigen::MatrixXd value;
  double error_estimate = 0;
  std::size_t evaluations = 0;
  int depth = 0;
};

using SimplexIntegrand = std::function<Eigen::MatrixXd(const std::vector<double>& bary)>;

// Integral over the standard n-simplex {t >= 0, sum t <= 1} (volume 1/n!),
// with the integrand given in barycentric coordinates. Refines where the
// estimate of a region disagrees with the sum over its children.
QuadratureResult integrate_simplex(int n, const SimplexIntegrand& f, const QuadratureOptions& opt = {});

}  // namespace hcl

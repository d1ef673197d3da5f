#pragma once

#include <hcl/forests.hpp>
#include <hcl/protocol.hpp>
#include <hcl/quadrature.hpp>

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

namespace hcl {

// Tree data for every level plus the products of right inverses that make
// up the orchard expansion.
class AnalyticModel {
 public:
  struct Level {
    std::vector<DTree> trees;
    std::vector<double> log_tau2;
    std::vector<Eigen::MatrixXd> partial_plus;  // double copies of the right inverses
  };
  struct Orchard {
    std::vector<std::size_t> trees;  // tree index per level p, p+1, ..., p+ell
    Eigen::MatrixXd f;               // C-bar_0 -> C-bar_ell
  };

  explicit AnalyticModel(std::shared_ptr<const GapComplex> g);
  // Replaces the left inverses of the boundary inclusions (indexed by gap degree).
  AnalyticModel with_zeta(const std::vector<Eigen::MatrixXd>& zeta) const;

  const GapComplex& gap() const { return *g_; }
  std::shared_ptr<const GapComplex> gap_ptr() const { return g_; }
  const Level& level(int j) const { return levels_.at(j - g_->p()); }
  const Eigen::MatrixXd& zeta(int degree) const { return zeta_.at(degree); }
  // Orchards of length ell with nonzero f.
  const std::vector<Orchard>& orchards(int ell) const { return orchards_.at(ell); }

 private:
  std::shared_ptr<const GapComplex> g_;
  std::vector<Level> levels_;
  std::vector<Eigen::MatrixXd> zeta_;
  std::vector<std::vector<Orchard>> orchards_;
};

// Weighted metric diag(exp(beta W)) throughout.
// alpha_0: C-bar_0 -> C-bar_0, identity minus the weighted projection onto B-bar_0.
Eigen::MatrixXd alpha0(const GapComplex& g, const std::vector<double>& w_p, double beta);
// Weighted pseudoinverse of the boundary into level `level` > p, or -(i i^dagger)
// at level p; computed by weighted least squares.
Eigen::MatrixXd weighted_pseudoinverse(const GapComplex& g, int level, const std::vector<double>& w, double beta);
// Same operator as a weighted sum over d-trees.
Eigen::MatrixXd kirchhoff_pseudoinverse(const AnalyticModel& m, int level, const std::vector<double>& w, double beta);
// Tree distribution rho_T proportional to tau^2 exp(-beta W_T).
std::vector<double> tree_distribution(const AnalyticModel& m, int level, const std::vector<double>& w, double beta);

// The analytical current of degree ell on a simplex, evaluated at a point on
// tangent vectors given as barycentric differences. Result: C-bar_0 -> C-bar_ell.
Eigen::MatrixXd jan_form(const AnalyticModel& m, const SimplicialProtocol& s, double beta, std::size_t simplex,
                         const std::vector<double>& bary, const std::vector<std::vector<double>>& frame, int ell);

// Integral of the top-degree current over one simplex, with its orientation.
RGradedOperator jan_integrate(const AnalyticModel& m, const SimplicialProtocol& s, double beta, std::size_t simplex,
                              const QuadratureOptions& opt = {});

struct AnalyticCochain {
  std::vector<RGradedOperator> values;
  std::vector<double> residual;  // relative Stokes defect per simplex
  double max_residual() const;
};

AnalyticCochain jan_cochain(const AnalyticModel& m, const SimplicialProtocol& s, double beta,
                            const QuadratureOptions& opt = {}, int workers = 0);

struct AxiomReport {
  std::size_t samples = 0;
  double a1 = 0;  // closedness: boundary of J_l against the differential of J_{l-1}
  double a2 = 0;  // J_l lies in the weighted complement of the cycles
  double a3 = 0;  // alpha_0 - I takes values in the boundaries
  double zeta_independence = 0;
};

AxiomReport axioms_check(const AnalyticModel& m, const SimplicialProtocol& s, double beta, std::size_t samples,
                         unsigned seed = 0, double fd_step = 1e-5);

struct QuantizationRow {
  double beta = 0;
  std::vector<double> analytic;     // H_q coordinates of the analytical pairing
  std::vector<double> topological;  // exact pairing, as doubles
  double distance = 0;
  double max_residual = 0;
};

struct QuantizationReport {
  std::vector<QuantizationRow> rows;
  double energy_gap = 0;   // E: least gap to the optimal tree over the cycle's support
  double slope = 0;        // fitted d log(distance) / d beta over the fit window
  double fit_lo = 0, fit_hi = 0;
};

QuantizationReport quantization_sweep(const AnalyticModel& m, const SimplicialProtocol& s,
                                      const std::vector<long long>& z, const QMatrix& p_cycle,
                                      const std::vector<double>& betas, const QuadratureOptions& opt = {},
                                      double fit_lo = 5, double fit_hi = 20, int workers = 0);

// E for one simplex: min over vertices and non-optimal trees of W_alpha - W_T.
double energy_gap(const SimplicialProtocol& s, std::size_t simplex);

// Runs fn(i) for i in [0, n) on up to `workers` threads (0: hardware default).
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace hcl

#pragma once

#include <hcl/rational.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace hcl {

// Finite CW complex with chosen cell orientations. boundary(j) has rows
// indexed by (j-1)-cells and columns by j-cells.
class CwComplex {
 public:
  CwComplex() = default;
  CwComplex(std::string name, std::vector<std::vector<std::string>> cells, std::vector<QMatrix> boundary);

  const std::string& name() const { return name_; }
  int dimension() const { return static_cast<int>(cells_.size()) - 1; }
  std::size_t count(int j) const;
  const std::vector<std::string>& cells(int j) const;
  const std::string& cell_name(int j, std::size_t i) const { return cells(j).at(i); }
  // D_j : C_j -> C_{j-1}; zero matrix of the right shape outside the stored range
  QMatrix boundary(int j) const;
  std::size_t betti(int j) const;
  std::vector<std::size_t> betti_numbers() const;

 private:
  std::string name_;
  std::vector<std::vector<std::string>> cells_;
  std::vector<QMatrix> boundary_;  // boundary_[j-1] = D_j
};

// Checks D_{j-1} D_j = 0 and connectivity, throws on failure.
void validate(const CwComplex& x);

// Built-in fixtures.
CwComplex sphere_complex(int q);
CwComplex sphere_wedge_complex(int q);
CwComplex torsion_complex();
CwComplex minimal_sphere_complex(int q);
// q-sphere with its (p-1)-skeleton collapsed to a point.
CwComplex sphere_quotient_complex(int q, int p);
// Complete graph on n vertices as a 1-complex.
CwComplex complete_graph_complex(int n);

struct HomologyData {
  QMatrix cycles;      // basis of Z_j
  QMatrix boundaries;  // basis of B_j
  QMatrix classes;     // representative cycles, one per basis class of H_j
  QMatrix coordinates; // (betti x n_j) map taking a cycle to its class coordinates
  QMatrix harmonic;    // orthogonal projector onto Z_j and the complement of B_j
  std::size_t betti() const { return classes.cols(); }
};

// d_in = D_j (from C_j), d_out = D_{j+1} (into C_j).
HomologyData homology_data(const QMatrix& d_in, const QMatrix& d_out, std::size_t n);

// Chain complex indexed 0..top with d[j] : C_j -> C_{j-1}; d[0] is 0 x dims[0].
struct ChainComplex {
  std::vector<std::size_t> dims;
  std::vector<QMatrix> d;
  int top() const { return static_cast<int>(dims.size()) - 1; }
  std::size_t dim(int j) const { return j >= 0 && j <= top() ? dims[j] : 0; }
  QMatrix boundary(int j) const;
};

// Degree-n map of graded spaces: blocks[j] : C_j -> C_{j+n}.
template <class Matrix>
struct GradedOperator {
  int degree = 0;
  std::map<int, Matrix> blocks;
};
using QGradedOperator = GradedOperator<QMatrix>;
using RGradedOperator = GradedOperator<Eigen::MatrixXd>;

// Commutator with the boundary: (eth f) = D f - (-1)^n f D.
QGradedOperator eth(const ChainComplex& c, const QGradedOperator& f);
RGradedOperator eth(const ChainComplex& c, const RGradedOperator& f);

struct Contraction {
  std::vector<QMatrix> h;  // h[j] : C_j -> C_{j+1}, j = 0..top-1
  QMatrix harmonic0;       // projector I - (D h + h D) in degree 0
};

// Throws NotPositivelyAcyclic unless H_j = 0 for all j > 0.
Contraction contraction(const ChainComplex& c);

// The gap complex: degrees p..q of X shifted down by p, with nothing
// leaving degree 0.
class GapComplex {
 public:
  GapComplex(std::shared_ptr<const CwComplex> x, int p, int q);

  const CwComplex& parent() const { return *x_; }
  std::shared_ptr<const CwComplex> parent_ptr() const { return x_; }
  int p() const { return p_; }
  int q() const { return q_; }
  int length() const { return q_ - p_; }
  std::size_t dim(int j) const { return chain_.dim(j); }
  const ChainComplex& chain() const { return chain_; }
  QMatrix dbar(int j) const { return chain_.boundary(j); }
  const HomologyData& homology(int j) const { return gap_homology_.at(j); }

  // Representatives in C-bar_0 of the basis classes of H_p(X).
  const QMatrix& hp_embed() const { return hp_embed_; }
  // H_q(X) coordinates of a q-cycle given in C-bar_top coordinates.
  QMatrix hq_project(const QMatrix& cycle) const;
  const HomologyData& parent_homology(int j) const { return parent_homology_.at(j); }

 private:
  std::shared_ptr<const CwComplex> x_;
  int p_ = 0, q_ = 0;
  ChainComplex chain_;
  std::vector<HomologyData> gap_homology_;
  std::map<int, HomologyData> parent_homology_;
  QMatrix hp_embed_;
};

// Throws GapViolated if X has rational homology strictly between p and q.
std::shared_ptr<const GapComplex> make_gap_complex(std::shared_ptr<const CwComplex> x, int p, int q);

}  // namespace hcl

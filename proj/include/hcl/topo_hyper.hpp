#pragma once

#include <hcl/forests.hpp>
#include <hcl/protocol.hpp>

#include <map>
#include <memory>
#include <vector>

namespace hcl {

// Chain complex of a d-tree, with its contraction written in gap-complex
// coordinates.
struct TreeSubcomplex {
  DTree tree;
  int top = 0;                                // level - p
  std::vector<std::vector<bool>> support;     // support[j][cell]
  std::vector<QMatrix> h;                     // h[j] : C-bar_j -> C-bar_{j+1}, zero off the tree
  QMatrix vertex_map;                         // degree-0 value of the lift at a vertex
};

TreeSubcomplex tree_subcomplex(const GapComplex& g, const DTree& t);

// The tree attached to a cell: the greedy tree at its least certified level.
DTree tree_functor(const CellularProtocol& c, const Smallness& s, std::size_t cell);

struct TopologicalCochain {
  std::vector<QGradedOperator> values;  // per cell, of degree dim(cell)
  std::vector<DTree> trees;
};

// Lifts cell by cell. Throws NotGood, NotSmall or LiftObstruction.
TopologicalCochain hypercurrent_cochain(const CellularProtocol& c);

// Exact check of eth J(s) == J(boundary s) for every cell.
bool verify_cochain(const CellularProtocol& c, const TopologicalCochain& j);

struct HomologyPairing {
  QMatrix chain;    // q-cycle in C-bar_top
  QMatrix classes;  // its H_q(X) coordinates
};

// Pairs a top-dimensional cycle of the parameter space with a p-cycle of X.
HomologyPairing hypercurrent_homology(const CellularProtocol& c, const TopologicalCochain& j,
                                      const std::vector<long long>& z, const QMatrix& p_cycle);

// Matrix of the induced map H_p(X) -> H_q(X) in the standard class bases.
QMatrix hypercurrent_matrix(const CellularProtocol& c, const TopologicalCochain& j,
                            const std::vector<long long>& z);

// Sufficient condition for the pairing to vanish for every protocol.
bool addendum_predicts_trivial(const CwComplex& x, int p, int q);

}  // namespace hcl

#pragma once

#include <hcl/complex.hpp>

#include <vector>

namespace hcl {

enum class TreeKind { Tree, Cotree };

// A spanning tree (level > p) or co-tree (level == p) of the gap complex.
struct DTree {
  int level = 0;
  TreeKind kind = TreeKind::Tree;
  std::vector<std::size_t> cells;  // indices into the level's cells, increasing
  mpz_class torsion;
  // Tree: C-bar_{m-1} -> C-bar_m with m = level - p, a right inverse of the
  // boundary on boundaries with image in span(cells).
  // Co-tree: C-bar_0 -> C-bar_0, minus the projection onto B-bar_0 along span(cells).
  QMatrix right_inverse;
  // Co-tree only: projection onto span(cells) along B-bar_0.
  QMatrix projection;

  double weight(const std::vector<double>& level_weights) const;
  bool operator==(const DTree& o) const { return level == o.level && cells == o.cells; }
};

// Straight from the definition, via homology of the subcomplex spanned by
// the lower skeleton and the chosen cells. Slow, meant as a reference.
bool is_dtree(const GapComplex& g, int level, const std::vector<std::size_t>& cells);

// Basis test used in production.
bool is_dtree_fast(const GapComplex& g, int level, const std::vector<std::size_t>& cells);

// Builds the full record; throws NotATree or LevelMismatch.
DTree make_dtree(const GapComplex& g, int level, std::vector<std::size_t> cells);

// All d-trees at the level, in lexicographic order of cell indices.
std::vector<DTree> enumerate_dtrees(const GapComplex& g, int level);

// Minimum-weight d-tree. Throws NotInjective on tied weights.
DTree greedy_dtree(const GapComplex& g, int level, const std::vector<double>& weights);

// Number of cells in every d-tree at the level.
std::size_t dtree_size(const GapComplex& g, int level);

}  // namespace hcl

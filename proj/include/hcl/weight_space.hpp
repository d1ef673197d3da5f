#pragma once

#include <hcl/protocol.hpp>
#include <hcl/rational.hpp>

#include <gmpxx.h>
#include <memory>
#include <vector>

namespace hcl {

// Ordered partition of the cells of every level, lowest weight first.
struct HeightData {
  int p = 0;
  std::vector<std::vector<std::vector<std::size_t>>> blocks;  // [level - p][block] -> cells

  int q() const { return p + static_cast<int>(blocks.size()) - 1; }
  // One block of size two per level, the rest singletons.
  bool is_top() const;
  // Total number of blocks; the cell is an open product of order cones.
  int dimension() const;
  bool operator==(const HeightData& o) const { return p == o.p && blocks == o.blocks; }
};

// Whether the weights realise exactly this height data.
bool realizes(const HeightData& h, const WeightPoint& w);

struct GoodCount {
  mpz_class c;               // product of (n_j! - 1), 0 when contractible
  bool contractible = false;  // some level has at most one cell
};

GoodCount good_summand_count(const CwComplex& x, int p, int q);
GoodCount good_summand_count(const std::vector<std::size_t>& cells_per_level);

// All top cells, in lexicographic order of (tied pair, order of blocks) per level.
std::vector<HeightData> enumerate_top_discriminant_cells(const GapComplex& g);
mpz_class top_cell_count(const std::vector<std::size_t>& cells_per_level);

// Weights with blocks at integer multiples of `spacing` and the tie intact.
WeightPoint cell_center(const HeightData& h, double spacing = 1.0);

// The boundary of a small cube around the cell center; coordinate i moves
// the second member of the tied pair at level p+i by eps * x_i.
SimplicialProtocol transversal_sphere(std::shared_ptr<const GapComplex> g, const HeightData& h, double eps = 0.25,
                                      double spacing = 1.0);

struct DiscriminantCellReport {
  HeightData cell;
  int dimension = 0;
  QMatrix j_d;  // H_p(X) -> H_q(X)
  bool essential = false;
};

DiscriminantCellReport classify_cell(std::shared_ptr<const GapComplex> g, const HeightData& h, double eps = 0.25,
                                     double spacing = 1.0);

struct RobustCounts {
  GoodCount good;
  std::vector<DiscriminantCellReport> cells;
  long long u = 0;  // inessential top cells
  mpz_class d;      // c - u, signed
};

RobustCounts robust_counts(std::shared_ptr<const GapComplex> g, int workers = 0);

}  // namespace hcl

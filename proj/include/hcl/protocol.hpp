#pragma once

#include <hcl/complex.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hcl {

// Cell weights for every level p..q at one parameter point.
struct WeightPoint {
  int p = 0;
  std::vector<std::vector<double>> levels;  // levels[j - p]
  const std::vector<double>& at(int j) const { return levels.at(j - p); }
  int q() const { return p + static_cast<int>(levels.size()) - 1; }
};

// A cell of the parameter space: vertices plus signed boundary faces.
struct ParameterCell {
  int dim = 0;
  std::vector<std::size_t> vertices;
  std::vector<std::pair<std::size_t, int>> boundary;
};

// Parameter complex with vertex weights. The topological side only needs this.
struct CellularProtocol {
  std::shared_ptr<const GapComplex> gap;
  std::vector<WeightPoint> vertex_weights;
  std::vector<ParameterCell> cells;  // sorted by dimension
  std::vector<long long> fundamental;  // top-dimensional cycle, empty if unknown
  int dimension() const;
};

// Generator is orientation times the simplex on its increasingly sorted vertices.
struct Simplex {
  std::vector<std::size_t> vertices;
  int orientation = 1;
  int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

class SimplicialProtocol {
 public:
  // `simplices` lists the positive-dimensional simplices; vertices are implicit.
  SimplicialProtocol(std::shared_ptr<const GapComplex> g, std::vector<std::string> vertex_ids,
                     std::vector<WeightPoint> weights, std::vector<Simplex> simplices);

  const GapComplex& gap() const { return *gap_; }
  std::shared_ptr<const GapComplex> gap_ptr() const { return gap_; }
  std::size_t vertex_count() const { return ids_.size(); }
  const std::vector<std::string>& vertex_ids() const { return ids_; }
  const WeightPoint& vertex_weights(std::size_t v) const { return weights_.at(v); }
  const std::vector<WeightPoint>& all_vertex_weights() const { return weights_; }
  // All simplices, 0-simplices first (index = vertex index), then by dimension.
  const std::vector<Simplex>& simplices() const { return simplices_; }
  int dimension() const;
  std::optional<std::size_t> find(std::vector<std::size_t> vertices) const;
  std::vector<std::pair<std::size_t, int>> boundary(std::size_t s) const;

  // Affine interpolation; weights_at insists on a point of the closed simplex.
  WeightPoint weights_at(std::size_t s, const std::vector<double>& bary) const;
  WeightPoint weights_affine(std::size_t s, const std::vector<double>& bary) const;

  // Sum of all top simplices; throws NotACycle if that has a boundary.
  std::vector<long long> fundamental_cycle() const;
  std::vector<long long> chain_boundary(const std::vector<long long>& chain) const;

  CellularProtocol cellular() const;
  // Multiplies every weight by beta > 0.
  SimplicialProtocol scaled(double beta) const;

 private:
  std::shared_ptr<const GapComplex> gap_;
  std::vector<std::string> ids_;
  std::vector<WeightPoint> weights_;
  std::vector<Simplex> simplices_;
};

struct Smallness {
  std::vector<std::vector<int>> certified;  // certified levels per cell
  std::vector<int> k;                       // least certified level, -1 if none
  bool small() const;
};

// A level is certified on a cell when each pair of cells of that level keeps
// one strict order at every vertex.
Smallness smallness(const CellularProtocol& c);
// Pointwise check at vertices and at the given sample barycentres of each cell.
bool is_good(const SimplicialProtocol& s, int samples_per_simplex = 3, unsigned seed = 0);
// Least level of X at which the weights are injective, if any.
std::optional<int> injective_level(const WeightPoint& w);

using CubeWeights = std::function<WeightPoint(const std::vector<double>& x)>;

// Boundary of [-1,1]^{len+1}, grid with `subdivisions` segments per side,
// each small cube triangulated by the Kuhn construction.
SimplicialProtocol cube_protocol(std::shared_ptr<const GapComplex> g, int subdivisions, const CubeWeights& w);
// W_j(first cell) = x_{j-p}, W_j(second cell) = 0; needs two cells per level.
SimplicialProtocol cube_protocol(std::shared_ptr<const GapComplex> g, int subdivisions = 1);
SimplicialProtocol cube_sphere_protocol(int q, int subdivisions = 1);
// The square picture for the 1-sphere.
SimplicialProtocol square_protocol(int subdivisions = 1);
std::vector<std::pair<std::string, SimplicialProtocol>> figure_protocols();

// Same cube with its faces as cells instead of simplices.
CellularProtocol cube_cellular_protocol(std::shared_ptr<const GapComplex> g);

}  // namespace hcl

#include <hcl/errors.hpp>
#include <hcl/topo_hyper.hpp>

#include <sstream>

namespace hcl {

TreeSubcomplex tree_subcomplex(const GapComplex& g, const DTree& t) {
  TreeSubcomplex out;
  out.tree = t;
  const int top = t.level - g.p();
  out.top = top;
  const int len = g.length();
  // cells of the tree complex in each degree, as gap indices
  std::vector<std::vector<std::size_t>> cells(top + 1);
  for (int j = 0; j <= top; ++j) {
    if (j < top) {
      for (std::size_t i = 0; i < g.dim(j); ++i) cells[j].push_back(i);
    } else {
      cells[j] = t.cells;
    }
  }
  ChainComplex c;
  for (int j = 0; j <= top; ++j) c.dims.push_back(cells[j].size());
  c.d.push_back(QMatrix(0, c.dims[0]));
  for (int j = 1; j <= top; ++j) c.d.push_back(g.dbar(j).select_rows(cells[j - 1]).select_cols(cells[j]));
  Contraction k = contraction(c);

  out.support.resize(len + 1);
  for (int j = 0; j <= len; ++j) {
    out.support[j].assign(g.dim(j), false);
    if (j <= top)
      for (auto i : cells[j]) out.support[j][i] = true;
  }
  for (int j = 0; j < len; ++j) {
    QMatrix h(g.dim(j + 1), g.dim(j));
    if (j < top) {
      const QMatrix& local = k.h[j];
      for (std::size_t r = 0; r < cells[j + 1].size(); ++r)
        for (std::size_t s = 0; s < cells[j].size(); ++s) h(cells[j + 1][r], cells[j][s]) = local(r, s);
    }
    out.h.push_back(std::move(h));
  }
  out.vertex_map = t.kind == TreeKind::Cotree ? t.projection : QMatrix::identity(g.dim(0));
  return out;
}

DTree tree_functor(const CellularProtocol& c, const Smallness& s, std::size_t cell) {
  int k = s.k.at(cell);
  if (k < 0) throw NotSmall("cell " + std::to_string(cell) + " has no certified level");
  const ParameterCell& pc = c.cells.at(cell);
  // the order is constant on the cell, so average the vertex weights
  std::vector<double> w(c.gap->parent().count(k), 0.0);
  for (auto v : pc.vertices) {
    const auto& x = c.vertex_weights.at(v).at(k);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += x[i] / pc.vertices.size();
  }
  return greedy_dtree(*c.gap, k, w);
}

namespace {

struct TreeCache {
  const GapComplex& g;
  std::map<std::pair<int, std::vector<std::size_t>>, TreeSubcomplex> data;
  const TreeSubcomplex& get(const DTree& t) {
    auto key = std::make_pair(t.level, t.cells);
    auto it = data.find(key);
    if (it == data.end()) it = data.emplace(key, tree_subcomplex(g, t)).first;
    return it->second;
  }
};

[[noreturn]] void obstruction(std::size_t cell, int n, const std::string& why) {
  std::ostringstream ss;
  ss << "lift fails on cell " << cell << " in input degree " << n << ": " << why;
  throw LiftObstruction(ss.str());
}

bool supported(const QMatrix& v, const std::vector<bool>& support) {
  for (std::size_t r = 0; r < v.rows(); ++r)
    if (!support[r])
      for (std::size_t c = 0; c < v.cols(); ++c)
        if (v(r, c) != 0) return false;
  return true;
}

// Sum of J(face) over the signed faces of a cell, in input degree n.
QMatrix face_sum(const GapComplex& g, const ParameterCell& cell, const std::vector<QGradedOperator>& values, int n) {
  int target = n + cell.dim - 1;
  QMatrix v(g.dim(target), g.dim(n));
  for (auto [f, coeff] : cell.boundary) {
    auto it = values[f].blocks.find(n);
    if (it != values[f].blocks.end()) v += Rational(coeff) * it->second;
  }
  return v;
}

}  // namespace

TopologicalCochain hypercurrent_cochain(const CellularProtocol& c) {
  const GapComplex& g = *c.gap;
  const int len = g.length();
  for (std::size_t v = 0; v < c.vertex_weights.size(); ++v)
    if (!injective_level(c.vertex_weights[v])) throw NotGood("vertex " + std::to_string(v) + " lies in no stratum");
  Smallness sm = smallness(c);
  for (std::size_t i = 0; i < c.cells.size(); ++i)
    if (sm.k[i] < 0) throw NotSmall("cell " + std::to_string(i) + " is not small for the weights");

  TreeCache cache{g, {}};
  TopologicalCochain out;
  out.values.resize(c.cells.size());
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    const ParameterCell& cell = c.cells[i];
    for (auto [f, coeff] : cell.boundary)
      if (f >= i) throw Error("cells must be listed after their faces");
    DTree t = tree_functor(c, sm, i);
    const TreeSubcomplex& tc = cache.get(t);
    out.trees.push_back(t);
    QGradedOperator& op = out.values[i];
    op.degree = cell.dim;
    const int j = cell.dim;
    const int sign = (j % 2 == 0) ? 1 : -1;
    for (int n = 0; n + j <= len + 1; ++n) {
      if (j == 0 && n == 0) {
        op.blocks[0] = tc.vertex_map;
        continue;
      }
      int target = n + j - 1;
      QMatrix v = face_sum(g, cell, out.values, n);
      if (n >= 1) {
        auto prev = op.blocks.find(n - 1);
        if (prev != op.blocks.end()) v += Rational(sign) * (prev->second * g.dbar(n));
      }
      if (!supported(v, tc.support[target])) obstruction(i, n, "argument leaves the tree");
      if (target == len) {
        if (!v.is_zero()) obstruction(i, n, "nonzero cycle in top degree");
        continue;
      }
      QMatrix lifted = tc.h[target] * v;
      if (g.dbar(target + 1) * lifted != v) obstruction(i, n, "argument is not a boundary in the tree");
      op.blocks[n] = std::move(lifted);
    }
  }
  return out;
}

bool verify_cochain(const CellularProtocol& c, const TopologicalCochain& jc) {
  const GapComplex& g = *c.gap;
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    const ParameterCell& cell = c.cells[i];
    QGradedOperator e = eth(g.chain(), jc.values[i]);
    for (int n = 0; n <= g.length(); ++n) {
      int target = n + cell.dim - 1;
      if (target < 0 || target > g.length()) continue;
      QMatrix lhs = e.blocks.count(n) ? e.blocks.at(n) : QMatrix(g.dim(target), g.dim(n));
      if (lhs != face_sum(g, cell, jc.values, n)) return false;
    }
  }
  return true;
}

HomologyPairing hypercurrent_homology(const CellularProtocol& c, const TopologicalCochain& jc,
                                      const std::vector<long long>& z, const QMatrix& p_cycle) {
  const GapComplex& g = *c.gap;
  const int len = g.length();
  if (z.size() != c.cells.size()) throw BadCoordinates("parameter chain has the wrong length");
  if (p_cycle.rows() != g.dim(0) || p_cycle.cols() != 1) throw BadCoordinates("p-chain has the wrong length");
  if (!(g.parent().boundary(g.p()) * p_cycle).is_zero()) throw NotACycle("the p-chain is not a cycle");
  std::map<std::size_t, long long> bd;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] == 0) continue;
    if (c.cells[i].dim != len) throw NotACycle("parameter chain is not of dimension q - p");
    for (auto [f, coeff] : c.cells[i].boundary) bd[f] += coeff * z[i];
  }
  for (auto& [f, v] : bd)
    if (v != 0) throw NotACycle("parameter chain has nonzero boundary");
  HomologyPairing out;
  out.chain = QMatrix(g.dim(len), 1);
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i] != 0) out.chain += Rational(static_cast<long>(z[i])) * (jc.values[i].blocks.at(0) * p_cycle);
  if (!(g.parent().boundary(g.q()) * out.chain).is_zero()) throw LiftObstruction("paired chain is not a cycle");
  out.classes = g.hq_project(out.chain);
  return out;
}

QMatrix hypercurrent_matrix(const CellularProtocol& c, const TopologicalCochain& jc, const std::vector<long long>& z) {
  const GapComplex& g = *c.gap;
  const QMatrix& basis = g.hp_embed();
  QMatrix m(g.parent_homology(g.q()).betti(), basis.cols());
  for (std::size_t k = 0; k < basis.cols(); ++k) {
    QMatrix col = hypercurrent_homology(c, jc, z, basis.col(k)).classes;
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, k) = col(r, 0);
  }
  return m;
}

bool addendum_predicts_trivial(const CwComplex& x, int p, int q) {
  for (int j = p; j < q; ++j)
    if (x.boundary(j + 1).is_zero()) return true;
  for (int j = p; j <= q; ++j)
    if (x.count(j) <= 1) return true;
  return false;
}

}  // namespace hcl

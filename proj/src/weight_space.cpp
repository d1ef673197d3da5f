#include <hcl/weight_space.hpp>
#include <hcl/ana_hyper.hpp>
#include <hcl/errors.hpp>
#include <hcl/topo_hyper.hpp>

#include <algorithm>
#include <numeric>

namespace hcl {

bool HeightData::is_top() const {
  for (const auto& lv : blocks) {
    int pairs = 0;
    for (const auto& b : lv) {
      if (b.size() == 2) ++pairs;
      else if (b.size() != 1) return false;
    }
    if (pairs != 1) return false;
  }
  return !blocks.empty();
}

int HeightData::dimension() const {
  int d = 0;
  for (const auto& lv : blocks) d += static_cast<int>(lv.size());
  return d;
}

bool realizes(const HeightData& h, const WeightPoint& w) {
  if (w.p != h.p || w.levels.size() != h.blocks.size()) return false;
  for (std::size_t i = 0; i < h.blocks.size(); ++i) {
    const auto& lv = h.blocks[i];
    const auto& wt = w.levels[i];
    std::size_t total = 0;
    for (const auto& b : lv) total += b.size();
    if (total != wt.size()) return false;
    for (std::size_t k = 0; k < lv.size(); ++k) {
      if (lv[k].empty()) return false;
      for (auto c : lv[k])
        if (c >= wt.size() || wt[c] != wt[lv[k][0]]) return false;
      if (k > 0 && !(wt[lv[k - 1][0]] < wt[lv[k][0]])) return false;
    }
  }
  return true;
}

GoodCount good_summand_count(const std::vector<std::size_t>& n) {
  GoodCount out;
  out.c = 1;
  for (auto nj : n) {
    if (nj <= 1) {
      out.contractible = true;
      out.c = 0;
      return out;
    }
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), nj);
    out.c *= f - 1;
  }
  return out;
}

namespace {

std::vector<std::size_t> level_sizes(const CwComplex& x, int p, int q) {
  std::vector<std::size_t> n;
  for (int j = p; j <= q; ++j) n.push_back(x.count(j));
  return n;
}

std::vector<std::vector<std::vector<std::size_t>>> level_cells(std::size_t n) {
  std::vector<std::vector<std::vector<std::size_t>>> out;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      std::vector<std::vector<std::size_t>> blocks;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == b) continue;
        blocks.push_back(c == a ? std::vector<std::size_t>{a, b} : std::vector<std::size_t>{c});
      }
      std::vector<std::size_t> perm(blocks.size());
      std::iota(perm.begin(), perm.end(), 0);
      do {
        std::vector<std::vector<std::size_t>> ordered;
        for (auto i : perm) ordered.push_back(blocks[i]);
        out.push_back(std::move(ordered));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  return out;
}

// position of the tied pair at every level
void check_top(const GapComplex& g, const HeightData& h) {
  if (h.p != g.p() || h.q() != g.q() || !h.is_top()) throw ValidationError("not a top discriminant cell of this gap");
  for (std::size_t i = 0; i < h.blocks.size(); ++i) {
    std::size_t total = 0;
    for (const auto& b : h.blocks[i]) total += b.size();
    if (total != g.parent().count(h.p + static_cast<int>(i))) throw ValidationError("height data does not cover the level");
  }
}

}  // namespace

GoodCount good_summand_count(const CwComplex& x, int p, int q) { return good_summand_count(level_sizes(x, p, q)); }

mpz_class top_cell_count(const std::vector<std::size_t>& n) {
  mpz_class c = 1;
  for (auto nj : n) {
    if (nj < 2) return 0;
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), nj - 1);
    c *= mpz_class(nj * (nj - 1) / 2) * f;
  }
  return c;
}

std::vector<HeightData> enumerate_top_discriminant_cells(const GapComplex& g) {
  auto n = level_sizes(g.parent(), g.p(), g.q());
  std::vector<HeightData> out;
  if (std::any_of(n.begin(), n.end(), [](std::size_t k) { return k < 2; })) return out;
  std::vector<std::vector<std::vector<std::vector<std::size_t>>>> per;
  for (auto k : n) per.push_back(level_cells(k));
  std::vector<std::size_t> idx(per.size(), 0);
  while (true) {
    HeightData h;
    h.p = g.p();
    for (std::size_t i = 0; i < per.size(); ++i) h.blocks.push_back(per[i][idx[i]]);
    out.push_back(std::move(h));
    std::size_t k = per.size();
    while (k > 0) {
      --k;
      if (++idx[k] < per[k].size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
  }
}

WeightPoint cell_center(const HeightData& h, double spacing) {
  WeightPoint w;
  w.p = h.p;
  for (const auto& lv : h.blocks) {
    std::size_t total = 0;
    for (const auto& b : lv) total += b.size();
    std::vector<double> wt(total, 0.0);
    for (std::size_t k = 0; k < lv.size(); ++k)
      for (auto c : lv[k]) wt.at(c) = spacing * static_cast<double>(k);
    w.levels.push_back(std::move(wt));
  }
  return w;
}

SimplicialProtocol transversal_sphere(std::shared_ptr<const GapComplex> g, const HeightData& h, double eps,
                                      double spacing) {
  check_top(*g, h);
  if (!(eps > 0) || !(spacing > 0)) throw ValidationError("eps and spacing must be positive");
  if (eps >= spacing / 2) throw EpsilonTooLarge("eps must stay below half the block spacing");
  WeightPoint center = cell_center(h, spacing);
  std::vector<std::size_t> moved;
  for (const auto& lv : h.blocks)
    for (const auto& b : lv)
      if (b.size() == 2) moved.push_back(std::max(b[0], b[1]));
  return cube_protocol(g, 1, [center, moved, eps](const std::vector<double>& x) {
    WeightPoint w = center;
    for (std::size_t i = 0; i < moved.size(); ++i) w.levels[i][moved[i]] += eps * x[i];
    return w;
  });
}

DiscriminantCellReport classify_cell(std::shared_ptr<const GapComplex> g, const HeightData& h, double eps,
                                     double spacing) {
  SimplicialProtocol s = transversal_sphere(g, h, eps, spacing);
  CellularProtocol c = s.cellular();
  TopologicalCochain j = hypercurrent_cochain(c);
  DiscriminantCellReport r;
  r.cell = h;
  r.dimension = h.dimension();
  r.j_d = hypercurrent_matrix(c, j, c.fundamental);
  r.essential = !r.j_d.is_zero();
  return r;
}

RobustCounts robust_counts(std::shared_ptr<const GapComplex> g, int workers) {
  RobustCounts out;
  out.good = good_summand_count(g->parent(), g->p(), g->q());
  auto cells = enumerate_top_discriminant_cells(*g);
  out.cells.resize(cells.size());
  parallel_for(cells.size(), workers, [&](std::size_t i) { out.cells[i] = classify_cell(g, cells[i]); });
  for (const auto& c : out.cells)
    if (!c.essential) ++out.u;
  out.d = out.good.c - mpz_class(static_cast<long>(out.u));
  return out;
}

}  // namespace hcl

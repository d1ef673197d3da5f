#include <hcl/errors.hpp>
#include <hcl/forests.hpp>
#include <hcl/smith.hpp>

#include <algorithm>
#include <numeric>

namespace hcl {

namespace {

void check_level(const GapComplex& g, int level) {
  if (level < g.p() || level > g.q())
    throw LevelMismatch("level " + std::to_string(level) + " is outside [" + std::to_string(g.p()) + ", " +
                        std::to_string(g.q()) + "]");
}

void check_cells(const GapComplex& g, int level, const std::vector<std::size_t>& cells) {
  std::size_t n = g.parent().count(level);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] >= n) throw NotATree("cell index " + std::to_string(cells[i]) + " out of range");
    if (i > 0 && cells[i] <= cells[i - 1]) throw NotATree("cell indices must be strictly increasing");
  }
}

// Boundaries into degree p as the gap complex sees them (none when p == q).
QMatrix lower_boundary(const GapComplex& g) {
  return g.q() > g.p() ? g.parent().boundary(g.p() + 1) : QMatrix(g.dim(0), 0);
}

QMatrix units(std::size_t n, const std::vector<std::size_t>& cells) {
  return QMatrix::identity(n).select_cols(cells);
}

}  // namespace

double DTree::weight(const std::vector<double>& w) const {
  double s = 0;
  for (auto c : cells) s += w.at(c);
  return s;
}

std::size_t dtree_size(const GapComplex& g, int level) {
  check_level(g, level);
  if (level == g.p()) return g.dim(0) - rank(lower_boundary(g));
  return rank(g.parent().boundary(level));
}

bool is_dtree(const GapComplex& g, int level, const std::vector<std::size_t>& cells) {
  check_level(g, level);
  const CwComplex& x = g.parent();
  // Betti numbers of the subcomplex: full skeleton below `level`, `cells` at it.
  auto sub_betti = [&](int j) -> long {
    std::size_t n = j == level ? cells.size() : x.count(j);
    QMatrix din = x.boundary(j);
    if (j == level) din = din.select_cols(cells);
    QMatrix dout = j + 1 == level ? x.boundary(j + 1).select_cols(cells) : QMatrix(n, 0);
    return static_cast<long>(n) - static_cast<long>(rank(din)) - static_cast<long>(rank(dout));
  };
  // Betti numbers of the pair's ambient X^{(q)}.
  auto x_betti = [&](int j) -> long {
    QMatrix dout = j + 1 <= g.q() ? x.boundary(j + 1) : QMatrix(x.count(j), 0);
    return static_cast<long>(x.count(j)) - static_cast<long>(rank(x.boundary(j))) -
           static_cast<long>(rank(dout));
  };
  if (level > g.p()) {
    if (sub_betti(level) != 0) return false;
    return sub_betti(level - 1) == x_betti(level - 1);
  }
  // Co-tree: H_p(L) -> H_p(X^{(q)}) must be an isomorphism, and b_{p-1} must agree.
  QMatrix ds = x.boundary(level).select_cols(cells);
  QMatrix zl = units(x.count(level), cells) * kernel_basis(ds);
  QMatrix b = column_basis(lower_boundary(g));
  QMatrix z = kernel_basis(x.boundary(level));
  std::size_t hx = z.cols() - b.cols();
  bool injective = rank(hcat(b, zl)) == b.cols() + zl.cols();
  bool surjective = rank(hcat(b, zl)) == z.cols();
  bool iso = injective && surjective && zl.cols() == hx;
  if (!iso) return false;
  if (level == 0) return true;
  return sub_betti(level - 1) == x_betti(level - 1);
}

bool is_dtree_fast(const GapComplex& g, int level, const std::vector<std::size_t>& cells) {
  check_level(g, level);
  if (cells.size() != dtree_size(g, level)) return false;
  if (level == g.p()) {
    QMatrix b = column_basis(lower_boundary(g));
    return rank(hcat(b, units(g.dim(0), cells))) == b.cols() + cells.size();
  }
  return rank(g.parent().boundary(level).select_cols(cells)) == cells.size();
}

DTree make_dtree(const GapComplex& g, int level, std::vector<std::size_t> cells) {
  check_level(g, level);
  check_cells(g, level, cells);
  if (!is_dtree_fast(g, level, cells)) throw NotATree("cells do not form a d-tree at level " + std::to_string(level));
  DTree t;
  t.level = level;
  t.cells = std::move(cells);
  if (level == g.p()) {
    t.kind = TreeKind::Cotree;
    const std::size_t n = g.dim(0);
    QMatrix b = column_basis(lower_boundary(g));
    QMatrix frame = hcat(b, units(n, t.cells));
    QMatrix left = hcat(b, QMatrix(n, t.cells.size()));
    QMatrix ip = left * inverse(frame);
    t.right_inverse = -ip;
    t.projection = QMatrix::identity(n) - ip;
    // order of C_p / (B_p + span S) over the integers
    QMatrix lattice = hcat(lower_boundary(g), units(n, t.cells));
    auto inv = smith_invariants(lattice);
    if (inv.size() != n) throw Error("co-tree quotient is not finite");
    t.torsion = 1;
    for (auto& v : inv) t.torsion *= v;
  } else {
    t.kind = TreeKind::Tree;
    QMatrix ds = g.parent().boundary(level).select_cols(t.cells);
    QMatrix dst = ds.transpose();
    QMatrix left = t.cells.empty() ? QMatrix(0, ds.rows()) : inverse(dst * ds) * dst;
    t.right_inverse = units(g.parent().count(level), t.cells) * left;
    auto inv = smith_invariants(ds);
    t.torsion = 1;
    for (auto& v : inv) t.torsion *= v;
  }
  return t;
}

std::vector<DTree> enumerate_dtrees(const GapComplex& g, int level) {
  check_level(g, level);
  const std::size_t n = g.parent().count(level);
  const std::size_t need = dtree_size(g, level);
  const bool co = level == g.p();
  QMatrix base = co ? column_basis(lower_boundary(g)) : QMatrix(g.parent().count(level - 1), 0);
  QMatrix vectors = co ? QMatrix::identity(n) : g.parent().boundary(level);

  std::vector<DTree> out;
  std::vector<std::size_t> chosen;
  // depth-first over increasing indices, pruning on dependence
  auto rec = [&](auto&& self, std::size_t start, const QMatrix& acc) -> void {
    if (chosen.size() == need) {
      out.push_back(make_dtree(g, level, chosen));
      return;
    }
    for (std::size_t i = start; i + (need - chosen.size()) <= n; ++i) {
      QMatrix next = hcat(acc, vectors.col(i));
      if (rank(next) != next.cols()) continue;
      chosen.push_back(i);
      self(self, i + 1, next);
      chosen.pop_back();
    }
  };
  rec(rec, 0, base);
  return out;
}

DTree greedy_dtree(const GapComplex& g, int level, const std::vector<double>& weights) {
  check_level(g, level);
  const std::size_t n = g.parent().count(level);
  if (weights.size() != n) throw LevelMismatch("weight vector has the wrong length for level " + std::to_string(level));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return weights[a] < weights[b]; });
  for (std::size_t k = 1; k < n; ++k)
    if (!(weights[order[k - 1]] < weights[order[k]]))
      throw NotInjective("weights at level " + std::to_string(level) + " tie on cells " +
                         g.parent().cell_name(level, order[k - 1]) + " and " + g.parent().cell_name(level, order[k]));
  const bool co = level == g.p();
  const std::size_t need = dtree_size(g, level);
  QMatrix acc = co ? column_basis(lower_boundary(g)) : QMatrix(g.parent().count(level - 1), 0);
  QMatrix vectors = co ? QMatrix::identity(n) : g.parent().boundary(level);
  std::vector<std::size_t> chosen;
  for (auto i : order) {
    if (chosen.size() == need) break;
    QMatrix next = hcat(acc, vectors.col(i));
    if (rank(next) != next.cols()) continue;
    acc = std::move(next);
    chosen.push_back(i);
  }
  std::sort(chosen.begin(), chosen.end());
  return make_dtree(g, level, chosen);
}

}  // namespace hcl

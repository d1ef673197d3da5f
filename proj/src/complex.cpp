#include <hcl/complex.hpp>
#include <hcl/errors.hpp>

namespace hcl {

CwComplex::CwComplex(std::string name, std::vector<std::vector<std::string>> cells,
                     std::vector<QMatrix> boundary)
    : name_(std::move(name)), cells_(std::move(cells)), boundary_(std::move(boundary)) {
  if (cells_.empty()) throw ParseError("complex has no cells");
  if (boundary_.size() + 1 != cells_.size())
    throw ParseError("complex '" + name_ + "': expected " + std::to_string(cells_.size() - 1) +
                     " boundary matrices, got " + std::to_string(boundary_.size()));
  for (std::size_t j = 1; j < cells_.size(); ++j) {
    const QMatrix& d = boundary_[j - 1];
    if (d.rows() != cells_[j - 1].size() || d.cols() != cells_[j].size())
      throw ParseError("complex '" + name_ + "': D_" + std::to_string(j) + " has shape " +
                       std::to_string(d.rows()) + "x" + std::to_string(d.cols()) + ", expected " +
                       std::to_string(cells_[j - 1].size()) + "x" + std::to_string(cells_[j].size()));
    if (!d.is_integral()) throw ParseError("complex '" + name_ + "': non-integral incidence in D_" + std::to_string(j));
  }
}

std::size_t CwComplex::count(int j) const {
  if (j < 0 || j > dimension()) return 0;
  return cells_[j].size();
}

const std::vector<std::string>& CwComplex::cells(int j) const {
  static const std::vector<std::string> none;
  if (j < 0 || j > dimension()) return none;
  return cells_[j];
}

QMatrix CwComplex::boundary(int j) const {
  if (j >= 1 && j <= dimension()) return boundary_[j - 1];
  return QMatrix(count(j - 1), count(j));
}

std::size_t CwComplex::betti(int j) const {
  return count(j) - rank(boundary(j)) - rank(boundary(j + 1));
}

std::vector<std::size_t> CwComplex::betti_numbers() const {
  std::vector<std::size_t> b;
  for (int j = 0; j <= dimension(); ++j) b.push_back(betti(j));
  return b;
}

void validate(const CwComplex& x) {
  for (int j = 2; j <= x.dimension(); ++j) {
    QMatrix dd = x.boundary(j - 1) * x.boundary(j);
    for (std::size_t r = 0; r < dd.rows(); ++r)
      for (std::size_t c = 0; c < dd.cols(); ++c)
        if (dd(r, c) != 0)
          throw BoundarySquareNonzero("complex '" + x.name() + "': D_" + std::to_string(j - 1) + " D_" +
                                      std::to_string(j) + " is nonzero at (" + x.cell_name(j - 2, r) + ", " +
                                      x.cell_name(j, c) + ")");
  }
  if (x.count(0) == 0 || x.betti(0) != 1)
    throw Disconnected("complex '" + x.name() + "' is not connected (b0 = " +
                       std::to_string(x.count(0) == 0 ? 0 : x.betti(0)) + ")");
}

namespace {

std::vector<std::string> pair_names(int j, const char* a = "+", const char* b = "-") {
  return {"e" + std::to_string(j) + a, "e" + std::to_string(j) + b};
}

QMatrix sphere_block(int j) {
  long s = (j % 2 == 0) ? 1 : -1;
  QMatrix d(2, 2);
  d(0, 0) = 1;
  d(0, 1) = s;
  d(1, 0) = s;
  d(1, 1) = 1;
  return d;
}

}  // namespace

CwComplex sphere_complex(int q) {
  if (q < 1) throw ValidationError("sphere_complex: q must be at least 1");
  std::vector<std::vector<std::string>> cells;
  std::vector<QMatrix> d;
  for (int j = 0; j <= q; ++j) {
    cells.push_back(pair_names(j));
    if (j >= 1) d.push_back(sphere_block(j));
  }
  return CwComplex("S" + std::to_string(q), cells, d);
}

CwComplex sphere_wedge_complex(int q) {
  if (q < 1) throw ValidationError("sphere_wedge_complex: q must be at least 1");
  std::vector<std::vector<std::string>> cells;
  std::vector<QMatrix> d;
  for (int j = 0; j < q; ++j) {
    cells.push_back(pair_names(j));
    if (j >= 1) d.push_back(sphere_block(j));
  }
  cells.push_back(pair_names(q, "id", "c"));
  QMatrix top(2, 2);
  top(0, 0) = 1;
  top(1, 0) = (q % 2 == 0) ? 1 : -1;
  d.push_back(top);
  return CwComplex("D" + std::to_string(q) + "vS" + std::to_string(q), cells, d);
}

CwComplex torsion_complex() {
  return CwComplex("TOR", {{"v"}, {"a"}, {"u", "w"}},
                   {QMatrix::from_rows({{0}}), QMatrix::from_rows({{2, 3}})});
}

CwComplex minimal_sphere_complex(int q) {
  if (q < 1) throw ValidationError("minimal_sphere_complex: q must be at least 1");
  std::vector<std::vector<std::string>> cells(q + 1);
  cells[0] = {"v"};
  cells[q] = {"e"};
  std::vector<QMatrix> d;
  for (int j = 1; j <= q; ++j) d.emplace_back(cells[j - 1].size(), cells[j].size());
  return CwComplex("S" + std::to_string(q) + "min", cells, d);
}

CwComplex sphere_quotient_complex(int q, int p) {
  if (p < 1 || p >= q) throw ValidationError("sphere_quotient_complex: need 1 <= p < q");
  std::vector<std::vector<std::string>> cells(q + 1);
  cells[0] = {"*"};
  for (int j = p; j <= q; ++j) cells[j] = pair_names(j);
  std::vector<QMatrix> d;
  for (int j = 1; j <= q; ++j) {
    if (j > p)
      d.push_back(sphere_block(j));
    else
      d.emplace_back(cells[j - 1].size(), cells[j].size());
  }
  return CwComplex("S" + std::to_string(q) + "/S" + std::to_string(p - 1), cells, d);
}

CwComplex complete_graph_complex(int n) {
  if (n < 1) throw ValidationError("complete_graph_complex: need n >= 1");
  std::vector<std::string> v, e;
  for (int i = 0; i < n; ++i) v.push_back("v" + std::to_string(i));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      edges.emplace_back(i, j);
      e.push_back("v" + std::to_string(i) + "v" + std::to_string(j));
    }
  QMatrix d(n, edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    d(edges[k].first, k) = -1;
    d(edges[k].second, k) = 1;
  }
  return CwComplex("K" + std::to_string(n), {v, e}, {d});
}

HomologyData homology_data(const QMatrix& d_in, const QMatrix& d_out, std::size_t n) {
  HomologyData h;
  h.cycles = d_in.rows() == 0 ? QMatrix::identity(n) : kernel_basis(d_in);
  h.boundaries = d_out.cols() == 0 ? QMatrix(n, 0) : column_basis(d_out);
  h.classes = h.cycles.select_cols(extend_basis(h.boundaries, h.cycles));
  QMatrix full = hcat(h.boundaries, h.classes);
  std::size_t b = h.classes.cols();
  if (full.cols() == 0) {
    h.coordinates = QMatrix(0, n);
  } else {
    QMatrix left = pseudoinverse(full);
    std::vector<std::size_t> last;
    for (std::size_t i = h.boundaries.cols(); i < full.cols(); ++i) last.push_back(i);
    h.coordinates = left.select_rows(last);
  }
  QMatrix harm = h.cycles.cols() == 0 ? QMatrix(n, 0)
                                      : h.cycles * kernel_basis(h.boundaries.transpose() * h.cycles);
  if (h.boundaries.cols() == 0) harm = h.cycles;
  h.harmonic = orthogonal_projector(harm, n);
  (void)b;
  return h;
}

QMatrix ChainComplex::boundary(int j) const {
  if (j >= 0 && j <= top()) return d[j];
  return QMatrix(dim(j - 1), dim(j));
}

namespace {

template <class M>
M zero_like(std::size_t r, std::size_t c);
template <>
QMatrix zero_like<QMatrix>(std::size_t r, std::size_t c) { return QMatrix(r, c); }
template <>
Eigen::MatrixXd zero_like<Eigen::MatrixXd>(std::size_t r, std::size_t c) { return Eigen::MatrixXd::Zero(r, c); }

QMatrix as(const QMatrix& m, const QMatrix*) { return m; }
Eigen::MatrixXd as(const QMatrix& m, const Eigen::MatrixXd*) { return m.to_double(); }

template <class M>
GradedOperator<M> eth_impl(const ChainComplex& c, const GradedOperator<M>& f) {
  GradedOperator<M> out;
  const int n = f.degree;
  out.degree = n - 1;
  const M* tag = nullptr;
  const int sign = (n % 2 == 0) ? 1 : -1;
  for (int j = 0; j <= c.top(); ++j) {
    int target = j + n - 1;
    if (target < 0 || target > c.top()) continue;
    M block = zero_like<M>(c.dim(target), c.dim(j));
    auto fj = f.blocks.find(j);
    if (fj != f.blocks.end() && j + n >= 1 && j + n <= c.top()) block = block + as(c.boundary(j + n), tag) * fj->second;
    auto fprev = f.blocks.find(j - 1);
    if (fprev != f.blocks.end() && j >= 1) {
      M term = fprev->second * as(c.boundary(j), tag);
      if (sign > 0)
        block = block - term;
      else
        block = block + term;
    }
    out.blocks[j] = block;
  }
  return out;
}

}  // namespace

QGradedOperator eth(const ChainComplex& c, const QGradedOperator& f) { return eth_impl(c, f); }
RGradedOperator eth(const ChainComplex& c, const RGradedOperator& f) { return eth_impl(c, f); }

Contraction contraction(const ChainComplex& c) {
  Contraction out;
  for (int j = 1; j <= c.top(); ++j) {
    std::size_t z = c.dim(j) - rank(c.boundary(j));
    std::size_t b = j + 1 <= c.top() ? rank(c.boundary(j + 1)) : 0;
    if (z != b)
      throw NotPositivelyAcyclic("chain complex has H_" + std::to_string(j) + " of dimension " +
                                 std::to_string(z - b));
  }
  for (int j = 0; j < c.top(); ++j) out.h.push_back(pseudoinverse(c.boundary(j + 1)));
  out.harmonic0 = QMatrix::identity(c.dim(0));
  if (c.top() >= 1) out.harmonic0 = out.harmonic0 - c.boundary(1) * out.h[0];
  return out;
}

GapComplex::GapComplex(std::shared_ptr<const CwComplex> x, int p, int q) : x_(std::move(x)), p_(p), q_(q) {
  const int len = q - p;
  chain_.dims.resize(len + 1);
  for (int j = 0; j <= len; ++j) chain_.dims[j] = x_->count(j + p);
  chain_.d.resize(len + 1);
  chain_.d[0] = QMatrix(0, chain_.dims[0]);
  for (int j = 1; j <= len; ++j) chain_.d[j] = x_->boundary(j + p);
  for (int j = 0; j <= len; ++j)
    gap_homology_.push_back(homology_data(chain_.boundary(j), chain_.boundary(j + 1), chain_.dims[j]));
  for (int j = 0; j <= x_->dimension(); ++j)
    parent_homology_.emplace(j, homology_data(x_->boundary(j), x_->boundary(j + 1), x_->count(j)));
  hp_embed_ = parent_homology_.at(p).classes;
}

QMatrix GapComplex::hq_project(const QMatrix& cycle) const {
  if (cycle.rows() != x_->count(q_)) throw BadCoordinates("hq_project: wrong chain length");
  if (!(x_->boundary(q_) * cycle).is_zero()) throw NotACycle("hq_project: chain is not a cycle");
  return parent_homology_.at(q_).coordinates * cycle;
}

std::shared_ptr<const GapComplex> make_gap_complex(std::shared_ptr<const CwComplex> x, int p, int q) {
  if (p < 0 || p > q || q > x->dimension())
    throw GapViolated("need 0 <= p <= q <= dim X, got p=" + std::to_string(p) + " q=" + std::to_string(q));
  for (int j = p + 1; j < q; ++j)
    if (x->betti(j) != 0)
      throw GapViolated("H_" + std::to_string(j) + " of '" + x->name() + "' is nonzero inside the gap (" +
                        std::to_string(p) + ", " + std::to_string(q) + ")");
  return std::make_shared<const GapComplex>(std::move(x), p, q);
}

}  // namespace hcl

#include <hcl/ana_hyper.hpp>
#include <hcl/errors.hpp>
#include <hcl/topo_hyper.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

namespace hcl {

namespace {

void check_beta(double beta) {
  if (!(beta > 0) || !std::isfinite(beta)) throw NonpositiveBeta("beta must be a positive finite number");
}

// exp(x - max x), so the largest entry is exactly one
Eigen::VectorXd shifted_exp(const std::vector<double>& x, double scale) {
  Eigen::VectorXd v(x.size());
  double top = -std::numeric_limits<double>::infinity();
  for (double t : x) top = std::max(top, scale * t);
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = std::exp(scale * x[i] - top);
  return v;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double z = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) z += (out[i] = std::exp(logits[i] - top));
  for (auto& v : out) v /= z;
  return out;
}

double small_det(const Eigen::MatrixXd& a) {
  switch (a.rows()) {
    case 1:
      return a(0, 0);
    case 2:
      return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    default:
      return a.determinant();
  }
}

}  // namespace

AnalyticModel::AnalyticModel(std::shared_ptr<const GapComplex> g) : g_(std::move(g)) {
  for (int j = g_->p(); j <= g_->q(); ++j) {
    Level lv;
    lv.trees = enumerate_dtrees(*g_, j);
    for (auto& t : lv.trees) {
      lv.log_tau2.push_back(2 * std::log(t.torsion.get_d()));
      lv.partial_plus.push_back(t.right_inverse.to_double());
    }
    levels_.push_back(std::move(lv));
  }
  for (int d = 0; d <= g_->length(); ++d)
    zeta_.push_back(orthogonal_projector(g_->homology(d).boundaries, g_->dim(d)).to_double());
  // exact products, so structurally zero terms can be dropped
  const int len = g_->length();
  orchards_.resize(len + 1);
  struct Exact {
    std::vector<std::size_t> trees;
    QMatrix f;
  };
  std::vector<Exact> cur;
  for (std::size_t t = 0; t < levels_[0].trees.size(); ++t) cur.push_back({{t}, levels_[0].trees[t].right_inverse});
  for (int ell = 0; ell <= len; ++ell) {
    if (ell > 0) {
      QMatrix z = orthogonal_projector(g_->homology(ell - 1).boundaries, g_->dim(ell - 1));
      std::vector<Exact> next;
      for (auto& o : cur) {
        QMatrix base = ell - 1 >= 1 ? z * o.f : o.f;
        for (std::size_t t = 0; t < levels_[ell].trees.size(); ++t) {
          QMatrix f = levels_[ell].trees[t].right_inverse * base;
          if (f.is_zero()) continue;
          auto tr = o.trees;
          tr.push_back(t);
          next.push_back({tr, f});
        }
      }
      cur = std::move(next);
    }
    for (auto& o : cur) orchards_[ell].push_back({o.trees, o.f.to_double()});
  }
}

AnalyticModel AnalyticModel::with_zeta(const std::vector<Eigen::MatrixXd>& zeta) const {
  AnalyticModel m = *this;
  if (zeta.size() != zeta_.size()) throw ValidationError("with_zeta: one matrix per gap degree expected");
  m.zeta_ = zeta;
  const int len = g_->length();
  m.orchards_.assign(len + 1, {});
  std::vector<Orchard> cur;
  for (std::size_t t = 0; t < levels_[0].trees.size(); ++t) cur.push_back({{t}, levels_[0].partial_plus[t]});
  for (int ell = 0; ell <= len; ++ell) {
    if (ell > 0) {
      std::vector<Orchard> next;
      for (auto& o : cur) {
        Eigen::MatrixXd base = ell - 1 >= 1 ? Eigen::MatrixXd(zeta[ell - 1] * o.f) : o.f;
        for (std::size_t t = 0; t < levels_[ell].trees.size(); ++t) {
          auto tr = o.trees;
          tr.push_back(t);
          next.push_back({tr, levels_[ell].partial_plus[t] * base});
        }
      }
      cur = std::move(next);
    }
    m.orchards_[ell] = cur;
  }
  return m;
}

namespace {

// -A (A^T M A)^{-1} A^T M, formed without subtracting from the identity so
// that small entries keep their relative accuracy
Eigen::MatrixXd level_p_inverse(const GapComplex& g, const std::vector<double>& w_p, double beta) {
  const std::size_t n = g.dim(0);
  Eigen::MatrixXd a = g.homology(0).boundaries.to_double();
  if (a.cols() == 0) return Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd m = shifted_exp(w_p, beta);
  Eigen::MatrixXd am = a.transpose() * m.asDiagonal();
  Eigen::MatrixXd gram = am * a;
  return -a * gram.ldlt().solve(am);
}

}  // namespace

Eigen::MatrixXd alpha0(const GapComplex& g, const std::vector<double>& w_p, double beta) {
  check_beta(beta);
  if (w_p.size() != g.dim(0)) throw LevelMismatch("alpha0: wrong number of weights");
  return Eigen::MatrixXd::Identity(g.dim(0), g.dim(0)) + level_p_inverse(g, w_p, beta);
}

Eigen::MatrixXd weighted_pseudoinverse(const GapComplex& g, int level, const std::vector<double>& w, double beta) {
  check_beta(beta);
  if (level < g.p() || level > g.q()) throw LevelMismatch("weighted_pseudoinverse: level out of range");
  if (w.size() != g.parent().count(level)) throw LevelMismatch("weighted_pseudoinverse: wrong number of weights");
  if (level == g.p()) return level_p_inverse(g, w, beta);
  const int m = level - g.p();
  Eigen::MatrixXd d = g.dbar(m).to_double();
  Eigen::MatrixXd a = g.homology(m - 1).boundaries.to_double();
  if (a.cols() == 0) return Eigen::MatrixXd::Zero(g.dim(m), g.dim(m - 1));
  std::vector<double> neg(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) neg[i] = -w[i];
  Eigen::VectorXd minv = shifted_exp(neg, beta);
  Eigen::MatrixXd mdt = minv.asDiagonal() * d.transpose();
  Eigen::MatrixXd k = a.transpose() * d * mdt * a;
  return mdt * a * k.ldlt().solve(a.transpose());
}

std::vector<double> tree_distribution(const AnalyticModel& m, int level, const std::vector<double>& w, double beta) {
  check_beta(beta);
  const auto& lv = m.level(level);
  std::vector<double> logits;
  for (std::size_t t = 0; t < lv.trees.size(); ++t) logits.push_back(lv.log_tau2[t] - beta * lv.trees[t].weight(w));
  return softmax(logits);
}

Eigen::MatrixXd kirchhoff_pseudoinverse(const AnalyticModel& m, int level, const std::vector<double>& w, double beta) {
  if (w.size() != m.gap().parent().count(level)) throw LevelMismatch("kirchhoff_pseudoinverse: wrong number of weights");
  auto rho = tree_distribution(m, level, w, beta);
  const auto& lv = m.level(level);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(lv.partial_plus[0].rows(), lv.partial_plus[0].cols());
  for (std::size_t t = 0; t < rho.size(); ++t) out += rho[t] * lv.partial_plus[t];
  return out;
}

namespace {

// Per-simplex data for evaluating the current along a fixed frame.
class Evaluator {
 public:
  Evaluator(const AnalyticModel& m, const SimplicialProtocol& s, std::size_t simplex, double beta,
            const std::vector<std::vector<double>>& frame)
      : m_(m), s_(s), simplex_(simplex), beta_(beta), frame_(frame) {
    const GapComplex& g = m.gap();
    const Simplex& x = s.simplices().at(simplex);
    for (int j = g.p(); j <= g.q(); ++j) {
      const auto& lv = m.level(j);
      std::vector<std::vector<double>> wt(lv.trees.size(), std::vector<double>(x.vertices.size()));
      std::vector<std::vector<double>> dwt(lv.trees.size(), std::vector<double>(frame.size(), 0.0));
      for (std::size_t t = 0; t < lv.trees.size(); ++t)
        for (std::size_t v = 0; v < x.vertices.size(); ++v) {
          wt[t][v] = lv.trees[t].weight(s.vertex_weights(x.vertices[v]).at(j));
          for (std::size_t k = 0; k < frame.size(); ++k) dwt[t][k] += frame[k][v] * wt[t][v];
        }
      tree_weights_.push_back(std::move(wt));
      tree_dw_.push_back(std::move(dwt));
    }
  }

  Eigen::MatrixXd eval(const std::vector<double>& bary, int ell) const {
    const GapComplex& g = m_.gap();
    if (ell == 0) return alpha0(g, s_.weights_affine(simplex_, bary).at(g.p()), beta_);
    // rho and d rho on the frame at every level that appears
    std::vector<std::vector<double>> rho(ell + 1);
    std::vector<std::vector<std::vector<double>>> drho(ell + 1);
    for (int lev = 0; lev <= ell; ++lev) {
      const auto& wt = tree_weights_[lev];
      const auto& lv = m_.level(g.p() + lev);
      std::vector<double> logits(wt.size());
      for (std::size_t t = 0; t < wt.size(); ++t) {
        double w = 0;
        for (std::size_t v = 0; v < bary.size(); ++v) w += bary[v] * wt[t][v];
        logits[t] = lv.log_tau2[t] - beta_ * w;
      }
      rho[lev] = softmax(logits);
      if (lev == ell) continue;
      drho[lev].assign(wt.size(), std::vector<double>(ell, 0.0));
      for (int k = 0; k < ell; ++k) {
        double mean = 0;
        for (std::size_t t = 0; t < wt.size(); ++t) mean += rho[lev][t] * tree_dw_[lev][t][k];
        for (std::size_t t = 0; t < wt.size(); ++t) drho[lev][t][k] = beta_ * rho[lev][t] * (mean - tree_dw_[lev][t][k]);
      }
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.dim(ell), g.dim(0));
    Eigen::MatrixXd a(ell, ell);
    for (const auto& o : m_.orchards(ell)) {
      // row r holds d rho of the tree at level ell-1-r
      for (int r = 0; r < ell; ++r)
        for (int k = 0; k < ell; ++k) a(r, k) = drho[ell - 1 - r][o.trees[ell - 1 - r]][k];
      double c = rho[ell][o.trees[ell]] * small_det(a);
      if (c != 0) out.noalias() += c * o.f;
    }
    return out;
  }

 private:
  const AnalyticModel& m_;
  const SimplicialProtocol& s_;
  std::size_t simplex_;
  double beta_;
  std::vector<std::vector<double>> frame_;
  std::vector<std::vector<std::vector<double>>> tree_weights_;  // [level][tree][vertex]
  std::vector<std::vector<std::vector<double>>> tree_dw_;       // [level][tree][frame]
};

std::vector<std::vector<double>> edge_frame(int dim) {
  std::vector<std::vector<double>> f;
  for (int i = 1; i <= dim; ++i) {
    std::vector<double> u(dim + 1, 0.0);
    u[0] = -1;
    u[i] = 1;
    f.push_back(u);
  }
  return f;
}

}  // namespace

Eigen::MatrixXd jan_form(const AnalyticModel& m, const SimplicialProtocol& s, double beta, std::size_t simplex,
                         const std::vector<double>& bary, const std::vector<std::vector<double>>& frame, int ell) {
  check_beta(beta);
  const Simplex& x = s.simplices().at(simplex);
  if (ell < 0 || ell > m.gap().length()) throw BadFrame("form degree outside [0, q-p]");
  if (static_cast<int>(frame.size()) != ell) throw BadFrame("frame must have one vector per form degree");
  for (const auto& u : frame) {
    if (u.size() != x.vertices.size()) throw BadFrame("tangent vector has the wrong length");
    double sum = 0;
    for (double c : u) sum += c;
    if (std::abs(sum) > 1e-9) throw BadFrame("tangent vector components must sum to zero");
  }
  s.weights_at(simplex, bary);  // validates the point
  return Evaluator(m, s, simplex, beta, frame).eval(bary, ell);
}

RGradedOperator jan_integrate(const AnalyticModel& m, const SimplicialProtocol& s, double beta, std::size_t simplex,
                              const QuadratureOptions& opt) {
  check_beta(beta);
  const GapComplex& g = m.gap();
  const Simplex& x = s.simplices().at(simplex);
  const int j = x.dim();
  RGradedOperator out;
  out.degree = j;
  if (j > g.length()) return out;
  Evaluator ev(m, s, simplex, beta, edge_frame(j));
  QuadratureResult r = integrate_simplex(j, [&](const std::vector<double>& b) { return ev.eval(b, j); }, opt);
  out.blocks[0] = x.orientation * r.value;
  for (int n = 1; n + j <= g.length(); ++n) out.blocks[n] = Eigen::MatrixXd::Zero(g.dim(n + j), g.dim(n));
  return out;
}

double AnalyticCochain::max_residual() const {
  double r = 0;
  for (double v : residual) r = std::max(r, v);
  return r;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  std::size_t w = workers > 0 ? static_cast<std::size_t>(workers) : std::max(1u, std::thread::hardware_concurrency());
  w = std::min(w, n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < w; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

AnalyticCochain jan_cochain(const AnalyticModel& m, const SimplicialProtocol& s, double beta,
                            const QuadratureOptions& opt, int workers) {
  check_beta(beta);
  const GapComplex& g = m.gap();
  const std::size_t n = s.simplices().size();
  AnalyticCochain out;
  out.values.resize(n);
  out.residual.assign(n, 0.0);
  parallel_for(n, workers, [&](std::size_t i) { out.values[i] = jan_integrate(m, s, beta, i, opt); });
  for (std::size_t i = 0; i < n; ++i) {
    const int j = s.simplices()[i].dim();
    if (j > g.length() || j == 0) continue;
    RGradedOperator e = eth(g.chain(), out.values[i]);
    double worst = 0, scale = 1;
    for (auto& [deg, block] : e.blocks) {
      Eigen::MatrixXd faces = Eigen::MatrixXd::Zero(block.rows(), block.cols());
      for (auto [f, c] : s.boundary(i)) {
        auto it = out.values[f].blocks.find(deg);
        if (it != out.values[f].blocks.end()) faces += c * it->second;
      }
      if (block.size() == 0) continue;
      worst = std::max(worst, (block - faces).cwiseAbs().maxCoeff());
      scale = std::max({scale, block.cwiseAbs().maxCoeff(), faces.cwiseAbs().maxCoeff()});
    }
    out.residual[i] = worst / scale;
  }
  return out;
}

AxiomReport axioms_check(const AnalyticModel& m, const SimplicialProtocol& s, double beta, std::size_t samples,
                         unsigned seed, double fd_step) {
  check_beta(beta);
  const GapComplex& g = m.gap();
  const int len = g.length();
  std::vector<std::size_t> tops;
  for (std::size_t i = 0; i < s.simplices().size(); ++i)
    if (s.simplices()[i].dim() == std::min(len, s.dimension())) tops.push_back(i);
  if (tops.empty()) throw ValidationError("protocol has no simplices of the needed dimension");

  // an oblique left inverse for every boundary space, for the zeta comparison
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<Eigen::MatrixXd> alt;
  for (int d = 0; d <= len; ++d) {
    Eigen::MatrixXd a = g.homology(d).boundaries.to_double();
    if (a.cols() == 0) {
      alt.push_back(Eigen::MatrixXd::Zero(g.dim(d), g.dim(d)));
      continue;
    }
    Eigen::MatrixXd r = a;
    for (Eigen::Index i = 0; i < r.rows(); ++i)
      for (Eigen::Index k = 0; k < r.cols(); ++k) r(i, k) += 0.5 * nd(rng);
    alt.push_back(a * (r.transpose() * a).inverse() * r.transpose());
  }
  AnalyticModel other = m.with_zeta(alt);

  std::uniform_int_distribution<std::size_t> pick(0, tops.size() - 1);
  std::exponential_distribution<double> ex(1);
  AxiomReport rep;
  rep.samples = samples;
  auto maxabs = [](const Eigen::MatrixXd& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; };
  for (std::size_t k = 0; k < samples; ++k) {
    std::size_t idx = tops[pick(rng)];
    const int dim = s.simplices()[idx].dim();
    std::vector<double> bary(dim + 1);
    double sum = 0;
    for (auto& t : bary) sum += (t = ex(rng));
    for (auto& t : bary) t /= sum;
    std::vector<std::vector<double>> frame(dim, std::vector<double>(dim + 1));
    for (auto& u : frame) {
      double mean = 0;
      for (auto& c : u) mean += (c = nd(rng)) / (dim + 1);
      for (auto& c : u) c -= mean;
    }
    Evaluator ev(m, s, idx, beta, frame);
    Evaluator ev_alt(other, s, idx, beta, frame);
    WeightPoint w = s.weights_at(idx, bary);

    // A3 and A2 in degree zero
    Eigen::MatrixXd a0 = ev.eval(bary, 0);
    Eigen::MatrixXd b0 = g.homology(0).boundaries.to_double();
    Eigen::MatrixXd quotient = Eigen::MatrixXd::Identity(g.dim(0), g.dim(0)) - m.zeta(0);
    rep.a3 = std::max(rep.a3, maxabs(quotient * (a0 - Eigen::MatrixXd::Identity(g.dim(0), g.dim(0)))));
    Eigen::VectorXd m0 = shifted_exp(w.at(g.p()), beta);
    if (b0.cols()) rep.a2 = std::max(rep.a2, maxabs(b0.transpose() * m0.asDiagonal() * a0) / std::max(1.0, maxabs(a0)));

    for (int ell = 1; ell <= std::min(len, dim); ++ell) {
      // frame restricted to the first ell vectors
      std::vector<std::vector<double>> sub(frame.begin(), frame.begin() + ell);
      Evaluator e(m, s, idx, beta, sub);
      Eigen::MatrixXd j = e.eval(bary, ell);
      // A1: boundary of J_ell against the finite-difference differential of J_{ell-1}
      Eigen::MatrixXd dj = Eigen::MatrixXd::Zero(g.dim(ell - 1), g.dim(0));
      for (int i = 0; i < ell; ++i) {
        std::vector<std::vector<double>> rest;
        for (int r = 0; r < ell; ++r)
          if (r != i) rest.push_back(sub[r]);
        Evaluator er(m, s, idx, beta, rest);
        auto shifted = bary;
        for (int c = 0; c <= dim; ++c) shifted[c] = bary[c] + fd_step * sub[i][c];
        Eigen::MatrixXd plus = er.eval(shifted, ell - 1);
        for (int c = 0; c <= dim; ++c) shifted[c] = bary[c] - fd_step * sub[i][c];
        Eigen::MatrixXd minus = er.eval(shifted, ell - 1);
        dj += (i % 2 == 0 ? 1.0 : -1.0) * (plus - minus) / (2 * fd_step);
      }
      Eigen::MatrixXd bj = g.dbar(ell).to_double() * j;
      rep.a1 = std::max(rep.a1, maxabs(bj - dj) / std::max(1.0, maxabs(dj)));
      // A2: weighted orthogonality to the cycles
      Eigen::MatrixXd z = g.homology(ell).cycles.to_double();
      Eigen::VectorXd mw = shifted_exp(w.at(g.p() + ell), beta);
      if (z.cols()) {
        Eigen::MatrixXd mj = mw.asDiagonal() * j;
        double denom = std::max(1e-300, z.norm() * mj.norm());
        if (mj.norm() > 0) rep.a2 = std::max(rep.a2, (z.transpose() * mj).norm() / denom);
      }
      Eigen::MatrixXd ja = Evaluator(other, s, idx, beta, sub).eval(bary, ell);
      rep.zeta_independence = std::max(rep.zeta_independence, maxabs(j - ja) / std::max(1.0, maxabs(j)));
    }
    (void)ev;
    (void)ev_alt;
  }
  return rep;
}

double energy_gap(const SimplicialProtocol& s, std::size_t simplex) {
  CellularProtocol c;
  c.gap = s.gap_ptr();
  c.vertex_weights = s.all_vertex_weights();
  const Simplex& x = s.simplices().at(simplex);
  c.cells.push_back(ParameterCell{x.dim(), x.vertices, {}});
  Smallness sm = smallness(c);
  int k = sm.k[0];
  if (k < 0) throw NotSmall("simplex is not small");
  std::vector<double> mid(s.gap().parent().count(k), 0.0);
  for (auto v : x.vertices)
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] += s.vertex_weights(v).at(k)[i] / x.vertices.size();
  DTree best = greedy_dtree(s.gap(), k, mid);
  double gap = std::numeric_limits<double>::infinity();
  for (auto& t : enumerate_dtrees(s.gap(), k)) {
    if (t == best) continue;
    for (auto v : x.vertices) {
      const auto& w = s.vertex_weights(v).at(k);
      gap = std::min(gap, t.weight(w) - best.weight(w));
    }
  }
  return gap;
}

QuantizationReport quantization_sweep(const AnalyticModel& m, const SimplicialProtocol& s,
                                      const std::vector<long long>& z, const QMatrix& p_cycle,
                                      const std::vector<double>& betas, const QuadratureOptions& opt, double fit_lo,
                                      double fit_hi, int workers) {
  const GapComplex& g = m.gap();
  CellularProtocol c = s.cellular();
  TopologicalCochain tc = hypercurrent_cochain(c);
  HomologyPairing top = hypercurrent_homology(c, tc, z, p_cycle);
  Eigen::MatrixXd coords = g.parent_homology(g.q()).coordinates.to_double();
  Eigen::VectorXd cvec = p_cycle.to_double().col(0);
  QuantizationReport rep;
  rep.fit_lo = fit_lo;
  rep.fit_hi = fit_hi;
  rep.energy_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i] != 0) rep.energy_gap = std::min(rep.energy_gap, energy_gap(s, i));
  for (double beta : betas) {
    check_beta(beta);
    AnalyticCochain ac = jan_cochain(m, s, beta, opt, workers);
    Eigen::VectorXd chain = Eigen::VectorXd::Zero(g.dim(g.length()));
    for (std::size_t i = 0; i < z.size(); ++i)
      if (z[i] != 0) chain += static_cast<double>(z[i]) * (ac.values[i].blocks.at(0) * cvec);
    Eigen::VectorXd an = coords * chain;
    QuantizationRow row;
    row.beta = beta;
    for (Eigen::Index k = 0; k < an.size(); ++k) {
      row.analytic.push_back(an[k]);
      row.topological.push_back(top.classes(k, 0).get_d());
    }
    double d2 = 0;
    for (std::size_t k = 0; k < row.analytic.size(); ++k)
      d2 += (row.analytic[k] - row.topological[k]) * (row.analytic[k] - row.topological[k]);
    row.distance = std::sqrt(d2);
    row.max_residual = ac.max_residual();
    rep.rows.push_back(row);
  }
  // least-squares slope of log distance over the window
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (auto& r : rep.rows) {
    if (r.beta < fit_lo || r.beta > fit_hi || !(r.distance > 0)) continue;
    double y = std::log(r.distance);
    sx += r.beta;
    sy += y;
    sxx += r.beta * r.beta;
    sxy += r.beta * y;
    ++n;
  }
  rep.slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

}  // namespace hcl

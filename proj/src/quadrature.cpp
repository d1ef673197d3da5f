#include <hcl/errors.hpp>
#include <hcl/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace hcl {

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

void compositions(int parts, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur.push_back(k);
    compositions(parts, total - k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

QuadratureRule grundmann_moller(int n, int s) {
  QuadratureRule r;
  const int d = 2 * s + 1;
  for (int i = 0; i <= s; ++i) {
    double w = (i % 2 == 0 ? 1.0 : -1.0) * std::pow(2.0, -2 * s) * std::pow(d + n - 2 * i, d) /
               (factorial(i) * factorial(d + n - i));
    std::vector<std::vector<int>> betas;
    std::vector<int> cur;
    compositions(n + 1, s - i, cur, betas);
    for (const auto& b : betas) {
      std::vector<double> pt(n + 1);
      for (int k = 0; k <= n; ++k) pt[k] = (2.0 * b[k] + 1) / (d + n - 2 * i);
      r.points.push_back(pt);
      r.weights.push_back(w * factorial(n));
    }
  }
  return r;
}

std::vector<std::vector<std::vector<double>>> freudenthal_children(int n) {
  std::vector<std::vector<std::vector<double>>> out;
  // Kuhn simplices of the unit cubes of [0,2]^n inside 2 >= t_1 >= ... >= t_n >= 0
  std::vector<int> perm(n);
  for (int corner = 0; corner < (1 << n); ++corner) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<std::vector<int>> path;
      std::vector<int> t(n);
      for (int k = 0; k < n; ++k) t[k] = (corner >> k) & 1;
      path.push_back(t);
      for (int k : perm) {
        ++t[k];
        path.push_back(t);
      }
      bool inside = true;
      for (const auto& v : path)
        for (int k = 0; k + 1 < n; ++k)
          if (v[k] < v[k + 1]) inside = false;
      if (!inside) continue;
      std::vector<std::vector<double>> child;
      for (const auto& v : path) {
        std::vector<double> bary(n + 1);
        bary[0] = 1 - v[0] / 2.0;
        for (int k = 1; k < n; ++k) bary[k] = (v[k - 1] - v[k]) / 2.0;
        bary[n] = v[n - 1] / 2.0;
        child.push_back(bary);
      }
      out.push_back(child);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

namespace {

using Verts = std::vector<std::vector<double>>;

struct Region {
  Verts verts;
  Eigen::MatrixXd coarse;
  Eigen::MatrixXd fine;
  std::vector<Eigen::MatrixXd> child_values;
  double err = 0;
  int depth = 0;
};

class Integrator {
 public:
  Integrator(int n, const SimplexIntegrand& f)
      : n_(n), f_(f), rule_(grundmann_moller(n, 2)), kids_(freudenthal_children(n)) {}

  // rule estimate on a region of the given depth
  Eigen::MatrixXd estimate(const Verts& v, int depth) {
    Eigen::MatrixXd acc;
    std::vector<double> x(n_ + 1);
    for (std::size_t i = 0; i < rule_.points.size(); ++i) {
      std::fill(x.begin(), x.end(), 0.0);
      for (int a = 0; a <= n_; ++a)
        for (int c = 0; c <= n_; ++c) x[c] += rule_.points[i][a] * v[a][c];
      Eigen::MatrixXd y = f_(x);
      ++evaluations_;
      if (i == 0)
        acc = rule_.weights[i] * y;
      else
        acc += rule_.weights[i] * y;
    }
    return acc * (std::pow(0.5, n_ * depth) / factorial(n_));
  }

  Verts child(const Verts& parent, std::size_t k) const {
    Verts out(n_ + 1, std::vector<double>(n_ + 1, 0.0));
    for (int v = 0; v <= n_; ++v)
      for (int a = 0; a <= n_; ++a)
        for (int c = 0; c <= n_; ++c) out[v][c] += kids_[k][v][a] * parent[a][c];
    return out;
  }

  Region make(Verts v, int depth, Eigen::MatrixXd coarse) {
    Region r;
    r.verts = std::move(v);
    r.depth = depth;
    r.coarse = std::move(coarse);
    for (std::size_t k = 0; k < kids_.size(); ++k) {
      r.child_values.push_back(estimate(child(r.verts, k), depth + 1));
      if (k == 0)
        r.fine = r.child_values.back();
      else
        r.fine += r.child_values.back();
    }
    // |fine - coarse| measures the coarse error; a degree-5 rule gains about
    // 2^6 per halving, so scale down with a factor two of slack
    r.err = (r.fine - r.coarse).cwiseAbs().maxCoeff() / 32.0;
    return r;
  }

  std::vector<Region> split(const Region& r) {
    std::vector<Region> out;
    for (std::size_t k = 0; k < kids_.size(); ++k) out.push_back(make(child(r.verts, k), r.depth + 1, r.child_values[k]));
    return out;
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  int n_;
  const SimplexIntegrand& f_;
  QuadratureRule rule_;
  std::vector<Verts> kids_;
  std::size_t evaluations_ = 0;
};

}  // namespace

QuadratureResult integrate_simplex(int n, const SimplexIntegrand& f, const QuadratureOptions& opt) {
  QuadratureResult res;
  if (n == 0) {
    res.value = f({1.0});
    res.evaluations = 1;
    return res;
  }
  Integrator it(n, f);
  Verts root(n + 1, std::vector<double>(n + 1, 0.0));
  for (int k = 0; k <= n; ++k) root[k][k] = 1;
  std::vector<Region> regions{it.make(root, 0, it.estimate(root, 0))};
  for (int d = 0; d < opt.min_depth; ++d) {
    std::vector<Region> next;
    for (auto& r : regions)
      for (auto& c : it.split(r)) next.push_back(std::move(c));
    regions = std::move(next);
  }
  // flat store plus a max-heap of (error, index); split regions are retired
  std::vector<Region> store = std::move(regions);
  std::vector<bool> live(store.size(), true);
  std::priority_queue<std::pair<double, std::size_t>> heap;
  double total_err = 0;
  for (std::size_t i = 0; i < store.size(); ++i) {
    heap.emplace(store[i].err, i);
    total_err += store[i].err;
  }
  std::size_t since_resum = 0;
  int deepest = opt.min_depth;
  while (total_err > opt.tol) {
    std::size_t i = heap.top().second;
    heap.pop();
    if (store[i].depth + 1 > opt.max_depth || store.size() > opt.max_regions)
      throw QuadratureNoConvergence("quadrature did not reach tolerance " + std::to_string(opt.tol) +
                                    " (error estimate " + std::to_string(total_err) + ")");
    total_err -= store[i].err;
    live[i] = false;
    std::vector<Region> kids = it.split(store[i]);
    store[i].child_values.clear();
    store[i].verts.clear();
    for (auto& c : kids) {
      total_err += c.err;
      deepest = std::max(deepest, c.depth);
      heap.emplace(c.err, store.size());
      store.push_back(std::move(c));
      live.push_back(true);
    }
    if (++since_resum == 4096) {
      // rebuild the running sum so cancellation cannot drift
      since_resum = 0;
      total_err = 0;
      for (std::size_t k = 0; k < store.size(); ++k)
        if (live[k]) total_err += store[k].err;
    }
  }
  bool first = true;
  for (std::size_t k = 0; k < store.size(); ++k) {
    if (!live[k]) continue;
    if (first)
      res.value = store[k].fine;
    else
      res.value += store[k].fine;
    first = false;
  }
  res.error_estimate = total_err;
  res.evaluations = it.evaluations();
  res.depth = deepest;
  return res;
}

}  // namespace hcl

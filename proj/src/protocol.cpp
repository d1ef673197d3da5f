#include <hcl/errors.hpp>
#include <hcl/protocol.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace hcl {

int CellularProtocol::dimension() const {
  int d = 0;
  for (auto& c : cells) d = std::max(d, c.dim);
  return d;
}

namespace {

// Sorts in place and returns the sign of the sorting permutation; 0 on repeats.
int sort_with_sign(std::vector<std::size_t>& v) {
  int sign = 1;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j + 1 < v.size() - i; ++j)
      if (v[j] > v[j + 1]) {
        std::swap(v[j], v[j + 1]);
        sign = -sign;
      }
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] == v[i - 1]) return 0;
  return sign;
}

void check_weight_point(const GapComplex& g, const WeightPoint& w, const std::string& where) {
  if (w.p != g.p() || w.levels.size() != static_cast<std::size_t>(g.length() + 1))
    throw LevelMismatch(where + ": expected weights for levels " + std::to_string(g.p()) + ".." +
                        std::to_string(g.q()));
  for (int j = g.p(); j <= g.q(); ++j) {
    if (w.at(j).size() != g.parent().count(j))
      throw LevelMismatch(where + ": level " + std::to_string(j) + " needs " +
                          std::to_string(g.parent().count(j)) + " weights, got " + std::to_string(w.at(j).size()));
    for (double x : w.at(j))
      if (!std::isfinite(x)) throw ParseError(where + ": non-finite weight");
  }
}

}  // namespace

SimplicialProtocol::SimplicialProtocol(std::shared_ptr<const GapComplex> g, std::vector<std::string> vertex_ids,
                                       std::vector<WeightPoint> weights, std::vector<Simplex> simplices)
    : gap_(std::move(g)), ids_(std::move(vertex_ids)), weights_(std::move(weights)) {
  if (ids_.size() != weights_.size()) throw ParseError("vertex ids and weights differ in number");
  if (ids_.empty()) throw ParseError("protocol has no vertices");
  {
    std::set<std::string> seen(ids_.begin(), ids_.end());
    if (seen.size() != ids_.size()) throw ParseError("duplicate vertex id");
  }
  for (std::size_t v = 0; v < ids_.size(); ++v) check_weight_point(*gap_, weights_[v], "vertex '" + ids_[v] + "'");

  for (std::size_t v = 0; v < ids_.size(); ++v) simplices_.push_back(Simplex{{v}, 1});
  std::vector<Simplex> rest;
  for (auto s : simplices) {
    if (s.vertices.size() < 2) throw ParseError("listed simplices must have positive dimension");
    for (auto v : s.vertices)
      if (v >= ids_.size()) throw NotClosedUnderFaces("simplex refers to an unknown vertex");
    if (s.orientation != 1 && s.orientation != -1) throw ParseError("orientation must be +1 or -1");
    int sign = sort_with_sign(s.vertices);
    if (sign == 0) throw ParseError("simplex repeats a vertex");
    s.orientation *= sign;
    rest.push_back(std::move(s));
  }
  std::stable_sort(rest.begin(), rest.end(), [](const Simplex& a, const Simplex& b) {
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
  });
  for (std::size_t i = 1; i < rest.size(); ++i)
    if (rest[i].vertices == rest[i - 1].vertices) throw ParseError("simplex listed twice");
  for (auto& s : rest) simplices_.push_back(std::move(s));
  for (std::size_t i = ids_.size(); i < simplices_.size(); ++i) {
    const auto& s = simplices_[i];
    for (std::size_t k = 0; k < s.vertices.size(); ++k) {
      auto face = s.vertices;
      face.erase(face.begin() + k);
      if (!find(face)) throw NotClosedUnderFaces("a face of a listed simplex is missing");
    }
  }
}

int SimplicialProtocol::dimension() const {
  int d = 0;
  for (auto& s : simplices_) d = std::max(d, s.dim());
  return d;
}

std::optional<std::size_t> SimplicialProtocol::find(std::vector<std::size_t> vertices) const {
  if (sort_with_sign(vertices) == 0) return std::nullopt;
  if (vertices.size() == 1) {
    if (vertices[0] < ids_.size()) return vertices[0];
    return std::nullopt;
  }
  auto less = [](const Simplex& a, const std::vector<std::size_t>& v) {
    if (a.vertices.size() != v.size()) return a.vertices.size() < v.size();
    return a.vertices < v;
  };
  auto it = std::lower_bound(simplices_.begin() + ids_.size(), simplices_.end(), vertices, less);
  if (it == simplices_.end() || it->vertices != vertices) return std::nullopt;
  return static_cast<std::size_t>(it - simplices_.begin());
}

std::vector<std::pair<std::size_t, int>> SimplicialProtocol::boundary(std::size_t s) const {
  const Simplex& x = simplices_.at(s);
  std::vector<std::pair<std::size_t, int>> out;
  if (x.dim() == 0) return out;
  for (std::size_t k = 0; k < x.vertices.size(); ++k) {
    auto face = x.vertices;
    face.erase(face.begin() + k);
    std::size_t f = *find(face);
    int sign = x.orientation * simplices_[f].orientation * (k % 2 == 0 ? 1 : -1);
    out.emplace_back(f, sign);
  }
  return out;
}

WeightPoint SimplicialProtocol::weights_affine(std::size_t s, const std::vector<double>& bary) const {
  const Simplex& x = simplices_.at(s);
  if (bary.size() != x.vertices.size()) throw BadCoordinates("barycentric vector has the wrong length");
  WeightPoint w = weights_[x.vertices[0]];
  for (auto& level : w.levels) std::fill(level.begin(), level.end(), 0.0);
  for (std::size_t k = 0; k < bary.size(); ++k) {
    const WeightPoint& v = weights_[x.vertices[k]];
    for (std::size_t l = 0; l < w.levels.size(); ++l)
      for (std::size_t c = 0; c < w.levels[l].size(); ++c) w.levels[l][c] += bary[k] * v.levels[l][c];
  }
  return w;
}

WeightPoint SimplicialProtocol::weights_at(std::size_t s, const std::vector<double>& bary) const {
  if (bary.size() != simplices_.at(s).vertices.size()) throw BadCoordinates("barycentric vector has the wrong length");
  double sum = 0;
  for (double t : bary) {
    if (!(t >= -1e-12)) throw BadCoordinates("barycentric coordinate is negative");
    sum += t;
  }
  if (std::abs(sum - 1) > 1e-9) throw BadCoordinates("barycentric coordinates do not sum to one");
  return weights_affine(s, bary);
}

std::vector<long long> SimplicialProtocol::chain_boundary(const std::vector<long long>& chain) const {
  if (chain.size() != simplices_.size()) throw BadCoordinates("chain has the wrong length");
  std::vector<long long> out(simplices_.size(), 0);
  for (std::size_t s = 0; s < chain.size(); ++s) {
    if (chain[s] == 0) continue;
    for (auto [f, c] : boundary(s)) out[f] += c * chain[s];
  }
  return out;
}

std::vector<long long> SimplicialProtocol::fundamental_cycle() const {
  int top = dimension();
  std::vector<long long> z(simplices_.size(), 0);
  for (std::size_t s = 0; s < simplices_.size(); ++s)
    if (simplices_[s].dim() == top) z[s] = 1;
  if (top == 0) return z;
  for (auto v : chain_boundary(z))
    if (v != 0) throw NotACycle("the top simplices do not form a cycle");
  return z;
}

CellularProtocol SimplicialProtocol::cellular() const {
  CellularProtocol c;
  c.gap = gap_;
  c.vertex_weights = weights_;
  for (std::size_t s = 0; s < simplices_.size(); ++s)
    c.cells.push_back(ParameterCell{simplices_[s].dim(), simplices_[s].vertices, boundary(s)});
  try {
    c.fundamental = fundamental_cycle();
  } catch (const NotACycle&) {
    c.fundamental.clear();
  }
  return c;
}

SimplicialProtocol SimplicialProtocol::scaled(double beta) const {
  if (!(beta > 0)) throw NonpositiveBeta("beta must be positive");
  SimplicialProtocol out = *this;
  for (auto& w : out.weights_)
    for (auto& level : w.levels)
      for (auto& x : level) x *= beta;
  return out;
}

bool Smallness::small() const {
  return std::all_of(k.begin(), k.end(), [](int x) { return x >= 0; });
}

Smallness smallness(const CellularProtocol& c) {
  const GapComplex& g = *c.gap;
  Smallness out;
  for (const auto& cell : c.cells) {
    std::vector<int> levels;
    for (int j = g.p(); j <= g.q(); ++j) {
      const std::size_t n = g.parent().count(j);
      bool ok = true;
      for (std::size_t a = 0; a < n && ok; ++a)
        for (std::size_t b = a + 1; b < n && ok; ++b) {
          int sign = 0;
          for (auto v : cell.vertices) {
            const auto& w = c.vertex_weights[v].at(j);
            int s = w[a] < w[b] ? -1 : (w[a] > w[b] ? 1 : 0);
            if (s == 0 || (sign != 0 && s != sign)) {
              ok = false;
              break;
            }
            sign = s;
          }
        }
      if (ok) levels.push_back(j);
    }
    out.k.push_back(levels.empty() ? -1 : levels.front());
    out.certified.push_back(std::move(levels));
  }
  return out;
}

std::optional<int> injective_level(const WeightPoint& w) {
  for (std::size_t l = 0; l < w.levels.size(); ++l) {
    auto v = w.levels[l];
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) == v.end()) return w.p + static_cast<int>(l);
  }
  return std::nullopt;
}

bool is_good(const SimplicialProtocol& s, int samples_per_simplex, unsigned seed) {
  std::mt19937 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  for (std::size_t i = 0; i < s.simplices().size(); ++i) {
    const std::size_t n = s.simplices()[i].vertices.size();
    std::vector<double> bary(n, 1.0 / n);
    if (!injective_level(s.weights_at(i, bary))) return false;
    if (n == 1) continue;
    for (int k = 0; k < samples_per_simplex; ++k) {
      double sum = 0;
      for (auto& t : bary) sum += (t = expo(rng));
      for (auto& t : bary) t /= sum;
      if (!injective_level(s.weights_at(i, bary))) return false;
    }
  }
  return true;
}

SimplicialProtocol cube_protocol(std::shared_ptr<const GapComplex> g, int n, const CubeWeights& weight_fn) {
  const int len = g->length();
  if (len < 1) throw ValidationError("cube_protocol needs q > p");
  if (n < 1) throw ValidationError("cube_protocol needs at least one subdivision");
  const int dims = len + 1;
  // integer grid coordinates on the boundary, coded in base n+1
  std::map<std::vector<int>, std::size_t> index;
  std::vector<std::vector<int>> points;
  std::vector<int> a(dims, 0);
  long total = 1;
  for (int i = 0; i < dims; ++i) total *= (n + 1);
  for (long code = 0; code < total; ++code) {
    long c = code;
    bool on_boundary = false;
    for (int i = 0; i < dims; ++i) {
      a[i] = static_cast<int>(c % (n + 1));
      c /= (n + 1);
      if (a[i] == 0 || a[i] == n) on_boundary = true;
    }
    if (!on_boundary) continue;
    index.emplace(a, points.size());
    points.push_back(a);
  }
  std::vector<std::string> ids;
  std::vector<WeightPoint> weights;
  for (const auto& pt : points) {
    std::vector<double> x(dims);
    long code = 0, mult = 1;
    for (int i = 0; i < dims; ++i) {
      x[i] = -1.0 + 2.0 * pt[i] / n;
      code += pt[i] * mult;
      mult *= (n + 1);
    }
    ids.push_back("v" + std::to_string(code));
    weights.push_back(weight_fn(x));
  }

  std::map<std::vector<std::size_t>, int> simplices;
  std::vector<int> perm(dims - 1);
  for (int i = 0; i < dims; ++i)
    for (int side : {0, n}) {
      std::vector<int> other;
      for (int k = 0; k < dims; ++k)
        if (k != i) other.push_back(k);
      const int facet_sign = (side == n ? 1 : -1) * (i % 2 == 0 ? 1 : -1);
      // every small cube of the facet
      long cubes = 1;
      for (int k = 0; k < dims - 1; ++k) cubes *= n;
      for (long cc = 0; cc < cubes; ++cc) {
        std::vector<int> base(dims);
        base[i] = side;
        long c = cc;
        for (int k = 0; k < dims - 1; ++k) {
          base[other[k]] = static_cast<int>(c % n);
          c /= n;
        }
        std::iota(perm.begin(), perm.end(), 0);
        do {
          int psign = 1;
          for (std::size_t u = 0; u < perm.size(); ++u)
            for (std::size_t v = u + 1; v < perm.size(); ++v)
              if (perm[u] > perm[v]) psign = -psign;
          std::vector<std::size_t> path;
          std::vector<int> cur = base;
          path.push_back(index.at(cur));
          for (int step : perm) {
            ++cur[other[step]];
            path.push_back(index.at(cur));
          }
          int sign = sort_with_sign(path) * facet_sign * psign;
          simplices[path] = sign;
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
    }
  // close under faces
  std::vector<std::vector<std::size_t>> tops;
  for (auto& [v, s] : simplices) tops.push_back(v);
  for (const auto& v : tops) {
    const std::size_t m = v.size();
    for (std::size_t mask = 1; mask < (std::size_t(1) << m); ++mask) {
      std::vector<std::size_t> face;
      for (std::size_t k = 0; k < m; ++k)
        if (mask & (std::size_t(1) << k)) face.push_back(v[k]);
      if (face.size() >= 2) simplices.emplace(face, 1);
    }
  }
  std::vector<Simplex> list;
  for (auto& [v, s] : simplices) list.push_back(Simplex{v, s});
  return SimplicialProtocol(std::move(g), ids, weights, list);
}

namespace {

CubeWeights first_cell_weights(std::shared_ptr<const GapComplex> g) {
  for (int j = g->p(); j <= g->q(); ++j)
    if (g->parent().count(j) != 2)
      throw ValidationError("the standard cube weights need exactly two cells at every level");
  int p = g->p(), len = g->length();
  return [p, len](const std::vector<double>& x) {
    WeightPoint w;
    w.p = p;
    for (int j = 0; j <= len; ++j) w.levels.push_back({x[j], 0.0});
    return w;
  };
}

}  // namespace

SimplicialProtocol cube_protocol(std::shared_ptr<const GapComplex> g, int subdivisions) {
  auto fn = first_cell_weights(g);
  return cube_protocol(std::move(g), subdivisions, fn);
}

SimplicialProtocol cube_sphere_protocol(int q, int subdivisions) {
  auto g = make_gap_complex(std::make_shared<const CwComplex>(sphere_complex(q)), 0, q);
  return cube_protocol(g, subdivisions);
}

SimplicialProtocol square_protocol(int subdivisions) {
  auto g = make_gap_complex(std::make_shared<const CwComplex>(sphere_complex(1)), 0, 1);
  return cube_protocol(g, subdivisions, [](const std::vector<double>& x) {
    return WeightPoint{0, {{x[0], 0.0}, {-x[1], 0.0}}};
  });
}

std::vector<std::pair<std::string, SimplicialProtocol>> figure_protocols() {
  return {{"square", square_protocol()}, {"cube2", cube_sphere_protocol(2)}};
}

CellularProtocol cube_cellular_protocol(std::shared_ptr<const GapComplex> g) {
  auto fn = first_cell_weights(g);
  const int dims = g->length() + 1;
  // a face assigns each coordinate -1, +1 (fixed) or 0 (free)
  std::vector<std::vector<int>> faces;
  std::vector<int> f(dims);
  long total = 1;
  for (int i = 0; i < dims; ++i) total *= 3;
  for (long code = 0; code < total; ++code) {
    long c = code;
    bool fixed = false;
    for (int i = 0; i < dims; ++i) {
      f[i] = static_cast<int>(c % 3) - 1;
      c /= 3;
      fixed = fixed || f[i] != 0;
    }
    if (fixed) faces.push_back(f);
  }
  auto free_count = [](const std::vector<int>& x) { return static_cast<int>(std::count(x.begin(), x.end(), 0)); };
  std::stable_sort(faces.begin(), faces.end(), [&](const auto& a, const auto& b) {
    if (free_count(a) != free_count(b)) return free_count(a) < free_count(b);
    return a < b;
  });
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t k = 0; k < faces.size(); ++k) index[faces[k]] = k;

  CellularProtocol c;
  c.gap = g;
  std::size_t nverts = 0;
  for (const auto& face : faces) {
    if (free_count(face) != 0) break;
    std::vector<double> x(face.begin(), face.end());
    c.vertex_weights.push_back(fn(x));
    ++nverts;
  }
  for (const auto& face : faces) {
    ParameterCell cell;
    cell.dim = free_count(face);
    for (std::size_t v = 0; v < nverts; ++v) {
      bool inside = true;
      for (int i = 0; i < dims; ++i)
        if (face[i] != 0 && faces[v][i] != face[i]) inside = false;
      if (inside) cell.vertices.push_back(v);
    }
    int m = 0;
    for (int i = 0; i < dims; ++i) {
      if (face[i] != 0) continue;
      int sign = (m % 2 == 0) ? 1 : -1;
      for (int s : {1, -1}) {
        auto sub = face;
        sub[i] = s;
        cell.boundary.emplace_back(index.at(sub), sign * s);
      }
      ++m;
    }
    c.cells.push_back(std::move(cell));
  }
  c.fundamental.assign(c.cells.size(), 0);
  for (std::size_t k = 0; k < faces.size(); ++k) {
    if (free_count(faces[k]) != dims - 1) continue;
    int i = 0;
    while (faces[k][i] == 0) ++i;
    c.fundamental[k] = faces[k][i] * (i % 2 == 0 ? 1 : -1);
  }
  return c;
}

}  // namespace hcl

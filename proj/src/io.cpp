#include <hcl/errors.hpp>
#include <hcl/io.hpp>

#include <cstdint>
#include <filesystem>
#include <cstdio>
#include <map>
#include <fstream>
#include <sstream>

namespace hcl {

namespace {

Rational entry_from_json(const Json& e) {
  if (e.is_number_integer()) return Rational(static_cast<long>(e.get<long long>()));
  if (e.is_string()) return parse_rational(e.get<std::string>());
  throw ParseError("matrix entry must be an integer or a \"num/den\" string");
}

}  // namespace

Json rational_matrix_to_json(const QMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

QMatrix rational_matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  std::size_t cols = j.empty() ? 0 : j.front().size();
  QMatrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("matrix rows must be arrays of equal length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = entry_from_json(j[r][c]);
  }
  return m;
}

Json real_matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

Json complex_to_json(const CwComplex& x) {
  Json j;
  j["name"] = x.name();
  Json cells = Json::array();
  for (int d = 0; d <= x.dimension(); ++d) cells.push_back(x.cells(d));
  j["cells"] = cells;
  Json bd = Json::array();
  for (int d = 1; d <= x.dimension(); ++d) {
    QMatrix m = x.boundary(d);
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).get_num().get_si());
      rows.push_back(row);
    }
    bd.push_back(rows);
  }
  j["boundary"] = bd;
  return j;
}

CwComplex complex_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("complex document must be a JSON object");
  for (const char* key : {"name", "cells", "boundary"})
    if (!j.contains(key)) throw ParseError(std::string("complex document lacks '") + key + "'");
  if (!j["name"].is_string() || !j["cells"].is_array() || !j["boundary"].is_array())
    throw ParseError("complex document has fields of the wrong type");
  std::vector<std::vector<std::string>> cells;
  for (const auto& level : j["cells"]) {
    if (!level.is_array()) throw ParseError("cells must be an array of arrays of names");
    std::vector<std::string> names;
    for (const auto& n : level) {
      if (!n.is_string()) throw ParseError("cell names must be strings");
      names.push_back(n.get<std::string>());
    }
    cells.push_back(std::move(names));
  }
  std::vector<QMatrix> boundary;
  std::size_t k = 0;
  for (const auto& m : j["boundary"]) {
    ++k;
    // an empty row list stands for a matrix with zero rows
    QMatrix q = rational_matrix_from_json(m);
    if (q.rows() == 0 && k < cells.size()) q = QMatrix(0, cells[k].size());
    if (q.cols() == 0 && k < cells.size() && q.rows() == cells[k - 1].size()) q = QMatrix(q.rows(), cells[k].size());
    boundary.push_back(q);
  }
  CwComplex x(j["name"].get<std::string>(), cells, boundary);
  validate(x);
  return x;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

CwComplex parse_complex_text(const std::string& text) { return complex_from_json(parse_json(text)); }

std::string directory_of(const std::string& path) {
  auto dir = std::filesystem::path(path).parent_path();
  return dir.empty() ? "." : dir.string();
}

namespace {

int int_field(const Json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw ParseError(std::string("'") + key + "' must be an integer");
  return j[key].get<int>();
}

int required_int(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing '") + key + "'");
  return int_field(j, key, 0);
}

std::vector<double> number_array(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw ParseError(what + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::shared_ptr<const GapComplex> gap_of(CwComplex x, int p, int q) {
  return make_gap_complex(std::make_shared<const CwComplex>(std::move(x)), p, q);
}

}  // namespace

CwComplex builtin_complex(const Json& j) {
  if (!j.contains("builtin") || !j["builtin"].is_string()) throw ParseError("builtin complex needs a type name");
  std::string t = j["builtin"].get<std::string>();
  if (t == "sphere") return sphere_complex(required_int(j, "q"));
  if (t == "wedge") return sphere_wedge_complex(required_int(j, "q"));
  if (t == "minimal_sphere") return minimal_sphere_complex(required_int(j, "q"));
  if (t == "quotient") return sphere_quotient_complex(required_int(j, "q"), required_int(j, "p"));
  if (t == "torsion") return torsion_complex();
  if (t == "complete_graph") return complete_graph_complex(required_int(j, "n"));
  throw ParseError("unknown builtin complex '" + t + "'");
}

CwComplex complex_reference(const Json& j, const std::string& base_dir) {
  if (j.is_string()) {
    std::filesystem::path path(j.get<std::string>());
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    return load_complex(path.string());
  }
  if (j.is_object() && j.contains("builtin")) return builtin_complex(j);
  return complex_from_json(j);
}

SimplicialProtocol protocol_from_json(const Json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ParseError("protocol document must be a JSON object");
  if (j.contains("builtin")) {
    const Json& b = j["builtin"];
    if (!b.is_object() || !b.contains("type") || !b["type"].is_string()) throw ParseError("builtin needs a 'type'");
    std::string t = b["type"].get<std::string>();
    int n = int_field(b, "subdivisions", 1);
    if (t == "square") return square_protocol(n);
    if (t == "cube_sphere") return cube_sphere_protocol(required_int(b, "q"), n);
    if (t == "cube_wedge") {
      int q = required_int(b, "q");
      return cube_protocol(gap_of(sphere_wedge_complex(q), 0, q), n);
    }
    if (t == "sphere_quotient") {
      int q = required_int(b, "q"), p = required_int(b, "p");
      return cube_protocol(gap_of(sphere_quotient_complex(q, p), p, q), n);
    }
    throw ParseError("unknown builtin protocol '" + t + "'");
  }
  for (const char* key : {"complex", "p", "q", "vertices", "simplices"})
    if (!j.contains(key)) throw ParseError(std::string("protocol document lacks '") + key + "'");
  int p = required_int(j, "p"), q = required_int(j, "q");
  auto g = gap_of(complex_reference(j["complex"], base_dir), p, q);
  std::vector<std::string> ids;
  std::vector<WeightPoint> weights;
  std::map<std::string, std::size_t> index;
  for (const auto& v : j["vertices"]) {
    if (!v.is_object() || !v.contains("id") || !v.contains("weights")) throw ParseError("vertex needs 'id' and 'weights'");
    std::string id = v["id"].is_string() ? v["id"].get<std::string>() : v["id"].dump();
    if (index.count(id)) throw ParseError("duplicate vertex id '" + id + "'");
    WeightPoint w;
    w.p = p;
    if (!v["weights"].is_array() || v["weights"].size() != static_cast<std::size_t>(q - p + 1))
      throw ParseError("vertex '" + id + "' needs one weight array per level");
    for (const auto& lv : v["weights"]) w.levels.push_back(number_array(lv, "weights of '" + id + "'"));
    index[id] = ids.size();
    ids.push_back(id);
    weights.push_back(std::move(w));
  }
  std::vector<Simplex> simplices;
  for (const auto& sj : j["simplices"]) {
    if (!sj.is_object() || !sj.contains("vertices")) throw ParseError("simplex needs 'vertices'");
    Simplex s;
    for (const auto& v : sj["vertices"]) {
      std::string id = v.is_string() ? v.get<std::string>() : v.dump();
      auto it = index.find(id);
      if (it == index.end()) throw ParseError("simplex refers to unknown vertex '" + id + "'");
      s.vertices.push_back(it->second);
    }
    s.orientation = int_field(sj, "orientation", 1);
    if (s.orientation != 1 && s.orientation != -1) throw ParseError("orientation must be 1 or -1");
    simplices.push_back(std::move(s));
  }
  return SimplicialProtocol(g, ids, weights, simplices);
}

SimplicialProtocol load_protocol(const std::string& path) {
  return protocol_from_json(parse_json(read_file(path)), directory_of(path));
}

Json protocol_to_json(const SimplicialProtocol& s) {
  Json j;
  j["complex"] = complex_to_json(s.gap().parent());
  j["p"] = s.gap().p();
  j["q"] = s.gap().q();
  Json verts = Json::array();
  for (std::size_t v = 0; v < s.vertex_count(); ++v)
    verts.push_back({{"id", s.vertex_ids()[v]}, {"weights", s.vertex_weights(v).levels}});
  j["vertices"] = verts;
  Json simp = Json::array();
  for (const auto& x : s.simplices()) {
    if (x.dim() == 0) continue;
    Json ids = Json::array();
    for (auto v : x.vertices) ids.push_back(s.vertex_ids()[v]);
    simp.push_back({{"vertices", ids}, {"orientation", x.orientation}});
  }
  j["simplices"] = simp;
  return j;
}

DynamicsDocument dynamics_from_json(const Json& j, const std::string& base_dir) {
  if (!j.is_object() || !j.contains("complex") || !j.contains("knots"))
    throw ParseError("dynamics document needs 'complex' and 'knots'");
  DynamicsDocument d{complex_reference(j["complex"], base_dir), {}};
  if (!j["knots"].is_array() || j["knots"].empty()) throw ParseError("'knots' must be a nonempty array");
  for (const auto& k : j["knots"]) {
    if (!k.is_object() || !k.contains("t") || !k.contains("E") || !k.contains("W") || !k["t"].is_number())
      throw ParseError("knot needs 't', 'E' and 'W'");
    Knot kn{k["t"].get<double>(), number_array(k["E"], "E"), number_array(k["W"], "W")};
    if (kn.e.size() != d.graph.count(0) || kn.w.size() != d.graph.count(1))
      throw ParseError("knot weights do not match the graph");
    d.knots.push_back(std::move(kn));
  }
  return d;
}

CwComplex load_complex(const std::string& path) { return parse_complex_text(read_file(path)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hcl

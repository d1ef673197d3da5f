#pragma once

#include <hcl/complex.hpp>
#include <hcl/graph_dynamics.hpp>
#include <hcl/protocol.hpp>

#include <json.hpp>
#include <string>

namespace hcl {

using Json = nlohmann::json;

Json complex_to_json(const CwComplex& x);
// Parses and validates; throws ParseError on malformed input.
CwComplex complex_from_json(const Json& j);
CwComplex parse_complex_text(const std::string& text);
CwComplex load_complex(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);
// 64-bit FNV-1a, as 16 hex digits.
std::string content_hash(const std::string& bytes);

// {"builtin": "sphere" | "wedge" | "torsion" | "quotient" | "minimal_sphere" | "complete_graph", "q", "p", "n"}
CwComplex builtin_complex(const Json& j);
// A path (relative to base_dir), an inline complex document, or a builtin.
CwComplex complex_reference(const Json& j, const std::string& base_dir);

// Explicit documents list vertices with per-level weight arrays and the
// positive-dimensional simplices; {"builtin": {...}} selects a cube protocol.
SimplicialProtocol protocol_from_json(const Json& j, const std::string& base_dir = ".");
SimplicialProtocol load_protocol(const std::string& path);
// Explicit form with the complex inlined.
Json protocol_to_json(const SimplicialProtocol& s);

// {"complex": ..., "knots": [{"t", "E", "W"}, ...]}
struct DynamicsDocument {
  CwComplex graph;
  std::vector<Knot> knots;
};
DynamicsDocument dynamics_from_json(const Json& j, const std::string& base_dir = ".");

Json parse_json(const std::string& text);
std::string directory_of(const std::string& path);

Json rational_matrix_to_json(const QMatrix& m);
QMatrix rational_matrix_from_json(const Json& j);
Json real_matrix_to_json(const Eigen::MatrixXd& m);

}  // namespace hcl

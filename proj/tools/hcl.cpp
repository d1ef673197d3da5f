#include <hcl/ana_hyper.hpp>
#include <hcl/errors.hpp>
#include <hcl/graph_dynamics.hpp>
#include <hcl/io.hpp>
#include <hcl/topo_hyper.hpp>
#include <hcl/weight_space.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

using namespace hcl;

namespace {

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  int p = 0, q = 1, level = -1;
  std::string betas = "1,5,10,20,30";
  double tol = 1e-8;
  int quad_depth = 16;
  std::string out;
  int workers = 0;
  unsigned seed = 0;
  // subcommand specific
  std::string weights, class_file, p0_file;
  std::size_t samples = 50, steps = 1000;
  double t0 = 0, t1 = 1, fit_lo = 5, fit_hi = 20;
  int demo_q = 0;
};

std::vector<double> parse_betas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double b;
    try {
      b = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParseError("bad beta value '" + item + "'");
    }
    if (used != item.size()) throw ParseError("bad beta value '" + item + "'");
    if (!(b > 0)) throw NonpositiveBeta("beta values must be positive");
    if (!out.empty() && !(b > out.back())) throw ValidationError("beta values must be ascending");
    out.push_back(b);
  }
  if (out.empty()) throw ValidationError("no beta values given");
  return out;
}

QuadratureOptions quad_options(const RunConfig& c) {
  if (!(c.tol > 0)) throw ValidationError("--tol must be positive");
  QuadratureOptions o;
  o.tol = c.tol;
  o.max_depth = c.quad_depth;
  return o;
}

Json config_json(const RunConfig& c) {
  return {{"command", c.command}, {"inputs", c.inputs}, {"p", c.p},         {"q", c.q},
          {"betas", c.betas},     {"tol", c.tol},       {"quad_depth", c.quad_depth},
          {"workers", c.workers}, {"seed", c.seed}};
}

std::string input_hash(const RunConfig& c) {
  std::string bytes;
  for (const auto& path : c.inputs) bytes += read_file(path);
  return content_hash(bytes);
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) std::cout << text;
  else write_file(c.out, text);
}

void report(const RunConfig& c, Json result) {
  Json j;
  j["config"] = config_json(c);
  j["input_hash"] = input_hash(c);
  j["result"] = std::move(result);
  emit(c, j.dump(2) + "\n");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv_field(fields[i]);
  return line + "\r\n";
}

std::string num(double x) { return Json(x).dump(); }

std::shared_ptr<const GapComplex> gap_from_file(const RunConfig& c) {
  return make_gap_complex(std::make_shared<const CwComplex>(load_complex(c.inputs.at(0))), c.p, c.q);
}

std::vector<double> weights_file(const std::string& path) {
  Json j = parse_json(read_file(path));
  if (!j.is_array()) throw ParseError("weights file must hold an array of numbers");
  std::vector<double> w;
  for (auto& x : j) {
    if (!x.is_number()) throw ParseError("weights file must hold an array of numbers");
    w.push_back(x.get<double>());
  }
  return w;
}

// Signed cell names, e.g. "e2- - e2+".
std::string chain_text(const CwComplex& x, int dim, const QMatrix& v) {
  std::string out;
  for (std::size_t i = 0; i < v.rows(); ++i) {
    const Rational& c = v(i, 0);
    if (c == 0) continue;
    bool neg = c < 0;
    Rational a = neg ? Rational(-c) : c;
    std::string coef = a == 1 ? "" : to_string(a) + " ";
    if (out.empty()) out = (neg ? "-" : "") + coef + x.cell_name(dim, i);
    else out += (neg ? " - " : " + ") + coef + x.cell_name(dim, i);
  }
  return out.empty() ? "0" : out;
}

Json dtree_json(const GapComplex& g, const DTree& t, const std::vector<double>* w) {
  Json cells = Json::array();
  for (auto k : t.cells) cells.push_back(g.parent().cell_name(t.level, k));
  Json j = {{"level", t.level}, {"kind", t.kind == TreeKind::Tree ? "tree" : "cotree"}, {"cells", cells},
            {"torsion", t.torsion.get_str()}};
  if (w) j["weight"] = t.weight(*w);
  return j;
}

int cmd_complex(const RunConfig& c, bool betti) {
  CwComplex x = load_complex(c.inputs.at(0));
  Json r = {{"name", x.name()}, {"dimension", x.dimension()}, {"valid", true}};
  Json counts = Json::array();
  for (int j = 0; j <= x.dimension(); ++j) counts.push_back(x.count(j));
  r["cells"] = counts;
  if (betti) r["betti"] = x.betti_numbers();
  report(c, r);
  return 0;
}

int cmd_trees(const RunConfig& c, bool greedy) {
  auto g = gap_from_file(c);
  int level = c.level < 0 ? c.p : c.level;
  std::vector<double> w;
  if (!c.weights.empty()) w = weights_file(c.weights);
  Json r;
  if (greedy) {
    if (w.empty()) throw ValidationError("trees greedy needs --weights");
    r["tree"] = dtree_json(*g, greedy_dtree(*g, level, w), &w);
  } else {
    Json list = Json::array();
    for (auto& t : enumerate_dtrees(*g, level)) list.push_back(dtree_json(*g, t, w.empty() ? nullptr : &w));
    r["level"] = level;
    r["trees"] = list;
  }
  report(c, r);
  return 0;
}

int cmd_protocol(RunConfig c, bool strata) {
  SimplicialProtocol s = load_protocol(c.inputs.at(0));
  c.p = s.gap().p();
  c.q = s.gap().q();
  CellularProtocol cell = s.cellular();
  Smallness sm = smallness(cell);
  Json r = {{"vertices", s.vertex_count()}, {"simplices", s.simplices().size()}, {"dimension", s.dimension()},
            {"good", is_good(s, 3, c.seed)}, {"small", sm.small()}};
  if (strata) {
    Json verts = Json::array();
    for (std::size_t v = 0; v < s.vertex_count(); ++v) {
      Json inj = Json::array();
      WeightPoint w = s.vertex_weights(v);
      for (int j = w.p; j <= w.q(); ++j) {
        auto sorted = w.at(j);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) inj.push_back(j);
      }
      verts.push_back({{"id", s.vertex_ids()[v]}, {"injective_levels", inj}});
    }
    Json cells = Json::array();
    for (std::size_t i = 0; i < cell.cells.size(); ++i)
      cells.push_back({{"dim", cell.cells[i].dim}, {"certified", sm.certified[i]}, {"k", sm.k[i]}});
    r["vertex_strata"] = verts;
    r["cell_strata"] = cells;
  }
  report(c, r);
  return 0;
}

QMatrix class_vector(const RunConfig& c, const GapComplex& g) {
  if (c.class_file.empty()) return g.hp_embed().select_cols({0});
  Json j = parse_json(read_file(c.class_file));
  if (!j.is_array()) throw ParseError("class file must hold an array of entries");
  Json rows = Json::array();
  for (auto& e : j) rows.push_back(Json::array({e}));
  return rational_matrix_from_json(rows);
}

int cmd_topo(RunConfig c) {
  SimplicialProtocol s = load_protocol(c.inputs.at(0));
  const GapComplex& g = s.gap();
  c.p = g.p();
  c.q = g.q();
  CellularProtocol cell = s.cellular();
  TopologicalCochain j = hypercurrent_cochain(cell);
  if (g.hp_embed().cols() == 0 && c.class_file.empty()) throw ValidationError("H_p is zero; nothing to pair with");
  QMatrix pc = class_vector(c, g);
  HomologyPairing hp = hypercurrent_homology(cell, j, cell.fundamental, pc);
  Json r;
  r["cycle"] = "fundamental";
  r["p_cycle"] = rational_matrix_to_json(pc.transpose())[0];
  r["chain"] = rational_matrix_to_json(hp.chain.transpose())[0];
  r["chain_text"] = chain_text(g.parent(), g.q(), hp.chain);
  r["classes"] = rational_matrix_to_json(hp.classes.transpose())[0];
  r["matrix"] = rational_matrix_to_json(hypercurrent_matrix(cell, j, cell.fundamental));
  r["cochain_verified"] = verify_cochain(cell, j);
  report(c, r);
  return 0;
}

int cmd_ana(RunConfig c, bool axioms) {
  SimplicialProtocol s = load_protocol(c.inputs.at(0));
  c.p = s.gap().p();
  c.q = s.gap().q();
  AnalyticModel m(s.gap_ptr());
  auto betas = parse_betas(c.betas);
  Json runs = Json::array();
  for (double beta : betas) {
    if (axioms) {
      AxiomReport a = axioms_check(m, s, beta, c.samples, c.seed);
      runs.push_back({{"beta", beta}, {"samples", a.samples}, {"a1", a.a1}, {"a2", a.a2}, {"a3", a.a3},
                      {"zeta_independence", a.zeta_independence}});
    } else {
      AnalyticCochain ac = jan_cochain(m, s, beta, quad_options(c), c.workers);
      Json cells = Json::array();
      for (std::size_t i = 0; i < s.simplices().size(); ++i) {
        const auto& v = ac.values[i];
        if (!v.blocks.count(0)) continue;
        Json ids = Json::array();
        for (auto k : s.simplices()[i].vertices) ids.push_back(s.vertex_ids()[k]);
        cells.push_back({{"simplex", ids}, {"value", real_matrix_to_json(v.blocks.at(0))}, {"residual", ac.residual[i]}});
      }
      runs.push_back({{"beta", beta}, {"max_residual", ac.max_residual()}, {"cells", cells}});
    }
  }
  report(c, {{"runs", runs}});
  return 0;
}

std::string sweep_csv(const QuantizationReport& rep) {
  std::size_t k = rep.rows.empty() ? 0 : rep.rows[0].analytic.size();
  std::vector<std::string> head = {"beta"};
  for (std::size_t i = 0; i < k; ++i) head.push_back("analytic_" + std::to_string(i));
  for (std::size_t i = 0; i < k; ++i) head.push_back("topological_" + std::to_string(i));
  head.push_back("distance");
  head.push_back("max_residual");
  std::string out = csv_row(head);
  for (auto& r : rep.rows) {
    std::vector<std::string> f = {num(r.beta)};
    for (double x : r.analytic) f.push_back(num(x));
    for (double x : r.topological) f.push_back(num(x));
    f.push_back(num(r.distance));
    f.push_back(num(r.max_residual));
    out += csv_row(f);
  }
  return out;
}

Json sweep_json(const QuantizationReport& rep) {
  Json rows = Json::array();
  for (auto& r : rep.rows)
    rows.push_back({{"beta", r.beta}, {"analytic", r.analytic}, {"topological", r.topological},
                    {"distance", r.distance}, {"max_residual", r.max_residual}});
  return {{"rows", rows}, {"energy_gap", rep.energy_gap}, {"slope", rep.slope}, {"fit_lo", rep.fit_lo},
          {"fit_hi", rep.fit_hi}};
}

int cmd_quantize(RunConfig c) {
  SimplicialProtocol s = load_protocol(c.inputs.at(0));
  c.p = s.gap().p();
  c.q = s.gap().q();
  AnalyticModel m(s.gap_ptr());
  QMatrix pc = class_vector(c, s.gap());
  auto rep = quantization_sweep(m, s, s.fundamental_cycle(), pc, parse_betas(c.betas), quad_options(c), c.fit_lo,
                                c.fit_hi, c.workers);
  if (!c.out.empty() && c.out.size() > 4 && c.out.substr(c.out.size() - 4) == ".csv") {
    emit(c, sweep_csv(rep));
    return 0;
  }
  report(c, sweep_json(rep));
  return 0;
}

int cmd_weightspace(const RunConfig& c) {
  auto g = gap_from_file(c);
  RobustCounts rc = robust_counts(g, c.workers);
  Json cells = Json::array();
  for (auto& cell : rc.cells) {
    Json blocks = Json::array();
    for (std::size_t i = 0; i < cell.cell.blocks.size(); ++i) {
      Json lv = Json::array();
      for (auto& b : cell.cell.blocks[i]) {
        Json names = Json::array();
        for (auto k : b) names.push_back(g->parent().cell_name(g->p() + static_cast<int>(i), k));
        lv.push_back(names);
      }
      blocks.push_back(lv);
    }
    cells.push_back({{"height_data", blocks}, {"dimension", cell.dimension}, {"essential", cell.essential},
                     {"j_d", rational_matrix_to_json(cell.j_d)}});
  }
  report(c, {{"c", rc.good.c.get_str()}, {"contractible", rc.good.contractible}, {"cells", cells}, {"u", rc.u},
             {"d", rc.d.get_str()}});
  return 0;
}

int cmd_dyn(RunConfig c) {
  DynamicsDocument doc = dynamics_from_json(parse_json(read_file(c.inputs.at(0))), directory_of(c.inputs.at(0)));
  StateDiagram g = state_diagram(doc.graph);
  TimeProtocol gamma = piecewise_linear(doc.knots);
  Eigen::VectorXd p0;
  if (c.p0_file.empty()) {
    p0 = boltzmann(g, gamma.e(c.t0));
  } else {
    auto v = weights_file(c.p0_file);
    p0 = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    c.inputs.push_back(c.p0_file);
  }
  Trajectory tr = evolve(g, gamma, p0, c.t0, c.t1, c.steps);
  std::vector<std::string> head = {"t"};
  for (std::size_t i = 0; i < g.vertices; ++i) head.push_back(doc.graph.cell_name(0, i));
  head.push_back("mass");
  std::string out = csv_row(head);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    std::vector<std::string> f = {num(tr.times[k])};
    for (Eigen::Index i = 0; i < tr.states[k].size(); ++i) f.push_back(num(tr.states[k][i]));
    f.push_back(num(tr.states[k].sum()));
    out += csv_row(f);
  }
  emit(c, out);
  return 0;
}

int cmd_demo(RunConfig c) {
  std::vector<int> qs = c.demo_q > 0 ? std::vector<int>{c.demo_q} : std::vector<int>{1, 2};
  auto betas = parse_betas(c.betas);
  std::string csv = csv_row({"q", "beta", "analytic", "topological", "distance", "max_residual"});
  std::ostringstream table;
  for (int q : qs) {
    SimplicialProtocol s = q == 1 ? square_protocol() : cube_sphere_protocol(q);
    const GapComplex& g = s.gap();
    CellularProtocol cell = s.cellular();
    HomologyPairing hp = hypercurrent_homology(cell, hypercurrent_cochain(cell), cell.fundamental,
                                               g.hp_embed().select_cols({0}));
    AnalyticModel m(s.gap_ptr());
    auto rep = quantization_sweep(m, s, s.fundamental_cycle(), g.hp_embed().select_cols({0}), betas, quad_options(c),
                                  c.fit_lo, c.fit_hi, c.workers);
    char line[256];
    std::snprintf(line, sizeof line, "q=%d  class of fundamental cycle x vertex: %s\n", q,
                  chain_text(g.parent(), q, hp.chain).c_str());
    table << line;
    std::snprintf(line, sizeof line, "%8s %14s %14s %12s %12s\n", "beta", "analytic", "topological", "distance",
                  "residual");
    table << line;
    for (auto& r : rep.rows) {
      std::snprintf(line, sizeof line, "%8g %14.9f %14.9f %12.3e %12.3e\n", r.beta, r.analytic.at(0),
                    r.topological.at(0), r.distance, r.max_residual);
      table << line;
      csv += csv_row({std::to_string(q), num(r.beta), num(r.analytic.at(0)), num(r.topological.at(0)),
                      num(r.distance), num(r.max_residual)});
    }
    std::snprintf(line, sizeof line, "energy gap %g, fitted slope %.4f\n\n", rep.energy_gap, rep.slope);
    table << line;
  }
  std::cout << table.str();
  if (!c.out.empty()) write_file(c.out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypercurrents of CW complexes"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::function<int()> action;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--betas", cfg.betas, "comma-separated ascending inverse temperatures");
    sub->add_option("--tol", cfg.tol, "quadrature tolerance");
    sub->add_option("--quad-depth", cfg.quad_depth, "maximum quadrature refinement depth");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--workers", cfg.workers, "worker threads, 0 for all cores");
    sub->add_option("--seed", cfg.seed, "seed for sampled checks");
  };
  auto with_pq = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "lower gap degree");
    sub->add_option("--q", cfg.q, "upper gap degree");
  };
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, bool input,
                  std::function<int()> fn) {
    CLI::App* sub = parent->add_subcommand(name, help);
    if (input) sub->add_option("input", cfg.inputs, "input file")->required()->expected(1);
    common(sub);
    sub->callback([&, sub, fn, name] {
      cfg.command = (sub->get_parent() == &app ? "" : sub->get_parent()->get_name() + " ") + name;
      action = fn;
    });
    return sub;
  };

  CLI::App* complex = app.add_subcommand("complex", "validate a complex or compute Betti numbers");
  complex->require_subcommand(1);
  leaf(complex, "validate", "check shapes and d^2 = 0", true, [&] { return cmd_complex(cfg, false); });
  leaf(complex, "betti", "rational Betti numbers", true, [&] { return cmd_complex(cfg, true); });

  CLI::App* trees = app.add_subcommand("trees", "d-trees of a gap complex");
  trees->require_subcommand(1);
  for (bool greedy : {false, true}) {
    auto* t = leaf(trees, greedy ? "greedy" : "enumerate", greedy ? "minimum-weight d-tree" : "all d-trees", true,
                   [&, greedy] { return cmd_trees(cfg, greedy); });
    with_pq(t);
    t->add_option("--level", cfg.level, "level in [p, q] (default p)");
    t->add_option("--weights", cfg.weights, "JSON array of cell weights at the level");
  }

  CLI::App* protocol = app.add_subcommand("protocol", "inspect a protocol");
  protocol->require_subcommand(1);
  leaf(protocol, "check", "goodness and smallness", true, [&] { return cmd_protocol(cfg, false); });
  leaf(protocol, "strata", "injective levels per vertex and cell", true, [&] { return cmd_protocol(cfg, true); });

  CLI::App* topo = app.add_subcommand("topo", "topological hypercurrent");
  topo->require_subcommand(1);
  auto* cur = leaf(topo, "current", "class of the fundamental cycle", true, [&] { return cmd_topo(cfg); });
  cur->add_option("--cycle", cfg.weights, "parameter cycle (only 'fundamental')")->check(CLI::IsMember({"fundamental"}));
  cur->add_option("--class", cfg.class_file, "JSON array: p-cycle of X (default first H_p class)");

  CLI::App* ana = app.add_subcommand("ana", "analytical hypercurrent");
  ana->require_subcommand(1);
  leaf(ana, "integrate", "Stokes cochain and its residuals", true, [&] { return cmd_ana(cfg, false); });
  leaf(ana, "axioms", "sampled axiom residuals", true, [&] { return cmd_ana(cfg, true); })
      ->add_option("--samples", cfg.samples, "sample points per beta");

  auto* quant = leaf(&app, "quantize", "low-temperature sweep (CSV when --out ends in .csv)", true,
                     [&] { return cmd_quantize(cfg); });
  quant->add_option("--class", cfg.class_file, "JSON array: p-cycle of X");
  quant->add_option("--fit-lo", cfg.fit_lo, "start of the slope fit window");
  quant->add_option("--fit-hi", cfg.fit_hi, "end of the slope fit window");

  CLI::App* ws = app.add_subcommand("weightspace", "discriminant cells and robust counts");
  ws->require_subcommand(1);
  with_pq(leaf(ws, "report", "c, u, d and J_D per top cell", true, [&] { return cmd_weightspace(cfg); }));

  CLI::App* dyn = app.add_subcommand("dyn", "master-equation dynamics on a graph");
  dyn->require_subcommand(1);
  auto* ev = leaf(dyn, "evolve", "RK4 trajectory as CSV", true, [&] { return cmd_dyn(cfg); });
  ev->add_option("--p0", cfg.p0_file, "JSON array: initial distribution (default Boltzmann at t0)");
  ev->add_option("--t0", cfg.t0, "start time");
  ev->add_option("--t1", cfg.t1, "end time");
  ev->add_option("--steps", cfg.steps, "number of steps");

  auto* demo = leaf(&app, "demo", "sphere pipeline for q = 1 and 2", false, [&] { return cmd_demo(cfg); });
  demo->add_option("--q", cfg.demo_q, "run a single sphere dimension");
  demo->add_option("--fit-lo", cfg.fit_lo, "start of the slope fit window");
  demo->add_option("--fit-hi", cfg.fit_hi, "end of the slope fit window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return action ? action() : 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

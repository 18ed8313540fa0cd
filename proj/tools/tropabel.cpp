// tropabel: command-line front end. Every command writes one JSON report
// (or DOT for enumerate-jacobian --format dot) to --out or stdout.
//
// Exit codes: 0 success, 1 certified-negative result, 2 invalid input.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tropabel/abel.hpp"
#include "tropabel/error.hpp"
#include "tropabel/io.hpp"
#include "tropabel/jacobian.hpp"
#include "tropabel/quasistability.hpp"
#include "tropabel/selftest.hpp"
#include "tropabel/toric.hpp"
#include "tropabel/tropical.hpp"

namespace {

using namespace tropabel;
using io::Json;

struct Options {
  std::string graph_path;
  std::string pol = "zero";
  std::string div;
  std::string dref;
  std::string root;
  std::int64_t deg = 0;
  std::string f;
  bool staircase = false;
  std::string triangulation_path;
  std::string simplex;
  std::string route = "auto";
  std::string format = "json";
  std::size_t dim = 0;
  std::size_t samples = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
};

// Collects every input byte that influences the report, for the input hash.
class Inputs {
 public:
  void add(const std::string& label, const std::string& bytes) {
    buffer_ += label;
    buffer_ += '\0';
    buffer_ += bytes;
    buffer_ += '\0';
  }
  std::string hash() const { return io::fnv1a_hex(buffer_); }

 private:
  std::string buffer_;
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("TROPABEL_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw InputError("TROPABEL_SEED must be a non-negative integer");
  }
  return kDefaultSeed;
}

// Context shared by the graph-based commands.
struct Loaded {
  Graph g;
  Index root = 0;
  Polarization mu;
};

// A flag value names a file if one exists at that path; otherwise it is literal text.
std::string text_or_file(const std::string& value) {
  std::error_code ec;
  if (!value.empty() && value != "zero" && std::filesystem::is_regular_file(value, ec)) return io::read_file(value);
  return value;
}

Loaded load(const Options& o, Inputs& in) {
  if (o.graph_path.empty()) throw InputError("--graph is required");
  const std::string graph_text = io::read_file(o.graph_path);
  in.add("graph", graph_text);
  Loaded l{io::parse_graph(graph_text), 0, {}};
  l.root = o.root.empty() ? l.g.root() : l.g.vertex_index(o.root);
  in.add("root", l.g.vertex_id(l.root));
  const std::string pol_text = text_or_file(o.pol);
  in.add("pol", pol_text);
  l.mu = io::parse_polarization(l.g, pol_text);
  return l;
}

TropicalDivisor parse_any_divisor(const Graph& g, const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      return io::tropical_divisor_from_json(g, Json::parse(text));
    } catch (const Json::exception& e) {
      throw InputError(std::string("malformed divisor JSON: ") + e.what());
    }
  }
  return io::parse_divisor(g, text);
}

Divisor vertex_divisor(const Graph& g, const std::string& text, const char* flag) {
  const TropicalDivisor d = parse_any_divisor(g, text);
  if (!d.vertex_supported()) throw InputError(std::string(flag) + " must be supported on vertices");
  return d.vertex_part();
}

HypercubeSpec parse_spec(const Graph& g, const std::string& list) {
  if (list.empty()) throw InputError("--f is required");
  HypercubeSpec spec;
  std::stringstream ss(list);
  std::string id;
  while (std::getline(ss, id, ',')) spec.f.push_back(g.edge_index(id));
  return spec;
}

VertexPoint parse_vertex_point(std::size_t d, const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.size() < 2 || s[0] != 'Q') throw InputError("vertex label must look like Q<k>: " + s);
    try {
      return from_label(d, std::stoul(s.substr(1)));
    } catch (const std::logic_error&) {
      throw InputError("bad vertex label " + s);
    }
  }
  if (!j.is_array() || j.size() != d) throw InputError("vertex must be a label or a 0/1 array of length d");
  VertexPoint q;
  for (const auto& b : j) {
    if (!b.is_number_integer() || (b.get<int>() != 0 && b.get<int>() != 1))
      throw InputError("vertex coordinates must be 0 or 1");
    q.bits.push_back(b.get<int>());
  }
  return q;
}

Simplex parse_simplex(std::size_t d, const Json& j) {
  if (!j.is_array() || j.empty()) throw InputError("a simplex is a non-empty array of vertices");
  Simplex s;
  for (const auto& q : j) s.push_back(parse_vertex_point(d, q));
  return s;
}

std::vector<Simplex> triangulation_of(const Options& o, std::size_t d, Inputs& in) {
  if (o.staircase == !o.triangulation_path.empty())
    throw InputError("pass exactly one of --staircase and --triangulation");
  if (o.staircase) {
    in.add("triangulation", "staircase");
    return staircase_triangulation(HypercubeSpec{std::vector<Index>(d, 0)});
  }
  const std::string text = io::read_file(o.triangulation_path);
  in.add("triangulation", text);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed triangulation JSON: ") + e.what());
  }
  const Json& list = j.is_object() && j.contains("simplices") ? j.at("simplices") : j;
  if (!list.is_array()) throw InputError("triangulation must be an array of simplices");
  std::vector<Simplex> out;
  for (const auto& s : list) out.push_back(parse_simplex(d, s));
  return out;
}

TropicalRoute parse_route(const std::string& r) {
  if (r == "auto") return TropicalRoute::Auto;
  if (r == "subdivision") return TropicalRoute::Subdivision;
  if (r == "lattice") return TropicalRoute::Lattice;
  throw InputError("--route must be auto, subdivision or lattice");
}

Json index_set_json(const IndexSet& i) { return i.members; }

Json simplex_json(const Simplex& s) {
  Json labels = Json::array(), bits = Json::array();
  for (const auto& q : s) {
    labels.push_back(q_name(q));
    bits.push_back(q.bits);
  }
  return Json{{"labels", labels}, {"vertices", bits}};
}

Json cell_json(const Graph& g, const CellResult& c) {
  Json out{{"consistent", c.consistent}};
  if (!c.consistent) {
    out["reason"] = c.reason;
    return out;
  }
  out["type"] = io::pseudo_divisor_to_json(g, c.type);
  Json pos = Json::object();
  for (const auto& [e, i] : c.positions) pos[g.edge(e).id] = index_set_json(i);
  out["positions"] = std::move(pos);
  out["samples"] = c.samples.size();
  return out;
}

Json conditions_json(const Graph& g, const ConditionReport& r) {
  Json c1 = Json::array();
  for (const auto& v : r.cond1)
    c1.push_back({{"i", v.i}, {"j", v.j}, {"edge", g.edge(v.edge).id}, {"difference", v.difference}});
  Json c2 = Json::array();
  for (const auto& v : r.cond2) {
    Json w = Json::array();
    for (Index x : v.w) w.push_back(g.vertex_id(x));
    c2.push_back({{"W", w}, {"functions", v.functions}});
  }
  return Json{{"ok", r.ok()}, {"method", r.cond2_method}, {"condition1", c1}, {"condition2", c2}};
}

CellOptions cell_options(const Options& o, std::uint64_t seed) {
  return CellOptions{o.samples, seed, parse_route(o.route)};
}

AbelSetup abel_setup(const Options& o, Inputs& in, const Loaded& l) {
  if (o.dref.empty()) throw InputError("--dref is required");
  in.add("dref", o.dref);
  in.add("f", o.f);
  return AbelSetup(l.g, l.root, l.mu, vertex_divisor(l.g, text_or_file(o.dref), "--dref"), parse_spec(l.g, o.f));
}

struct Outcome {
  Outcome(Json r = {}, int c = 0, std::optional<std::string> payload = std::nullopt)
      : result(std::move(r)), code(c), raw(std::move(payload)) {}
  Json result;
  int code;
  std::optional<std::string> raw;  // non-JSON payload
};

Outcome cmd_reduce(const Options& o, Inputs& in) {
  Loaded l = load(o, in);
  if (o.div.empty()) throw InputError("--div is required");
  const std::string text = text_or_file(o.div);
  in.add("div", text);
  const TropicalDivisor d = parse_any_divisor(l.g, text);
  Json r;
  r["input"] = io::format_divisor(l.g, d);
  if (d.vertex_supported()) {
    const QsReduction red = qs_reduce(l.g, l.root, l.mu, d.vertex_part());
    r["divisor"] = io::format_divisor(l.g, red.divisor);
    r["values"] = io::divisor_to_json(l.g, red.divisor);
    r["potential"] = io::divisor_to_json(l.g, red.potential);
    r["firings"] = red.firings;
  } else {
    in.add("route", o.route);
    const TropicalReduction red = qs_reduce_tropical(l.g, l.root, l.mu, d, parse_route(o.route));
    r["divisor"] = io::format_divisor(l.g, red.divisor);
    r["type"] = io::pseudo_divisor_to_json(l.g, red.type);
    Json pos = Json::object();
    for (std::size_t i = 0; i < red.type.edges.size(); ++i) pos[l.g.edge(red.type.edges[i]).id] = to_string(red.positions[i]);
    r["positions"] = std::move(pos);
  }
  return {r};
}

Outcome cmd_enumerate(const Options& o, Inputs& in) {
  Loaded l = load(o, in);
  in.add("deg", std::to_string(o.deg));
  in.add("format", o.format);
  const JacobianComplex j = build_jacobian(l.g, l.root, l.mu, o.deg);
  if (o.format == "dot") return {Json{}, 0, export_complex(j, "dot")};
  if (o.format != "json") throw UnsupportedFormat("unsupported format " + o.format);
  return {Json::parse(export_complex(j, "json"))};
}

Outcome cmd_abel_cell(const Options& o, Inputs& in, std::uint64_t seed) {
  Loaded l = load(o, in);
  const AbelSetup s = abel_setup(o, in, l);
  if (o.simplex.empty()) throw InputError("--simplex is required (e.g. Q1,Q2,Q3,Q7)");
  in.add("simplex", o.simplex);
  Json list = Json::array();
  std::stringstream ss(o.simplex);
  std::string item;
  while (std::getline(ss, item, ',')) list.push_back(item);
  const Simplex simplex = parse_simplex(s.spec.d(), list);
  const CellResult cell = cell_of_simplex(s, simplex, cell_options(o, seed));
  const ConditionReport cond = check_conditions(s, simplex);
  Json r{{"simplex", simplex_json(simplex)}, {"cell", cell_json(s.g, cell)}, {"conditions", conditions_json(s.g, cond)}};
  return {r, cell.consistent ? 0 : 1};
}

Outcome cmd_certify(const Options& o, Inputs& in, std::uint64_t seed) {
  Loaded l = load(o, in);
  const AbelSetup s = abel_setup(o, in, l);
  const std::vector<Simplex> tri = triangulation_of(o, s.spec.d(), in);
  const Certificate cert = certify_compatibility(s, tri, cell_options(o, seed));
  Json entries = Json::array();
  for (const auto& e : cert.entries)
    entries.push_back({{"simplex", simplex_json(e.simplex)},
                       {"unimodular", e.unimodular},
                       {"volume", to_string(e.volume)},
                       {"cell", cell_json(s.g, e.cell)},
                       {"conditions", conditions_json(s.g, e.conditions)},
                       {"pass", e.pass()}});
  Json r{{"verdict", cert.compatible() ? "compatible" : "not compatible"},
         {"simplices", cert.entries.size()},
         {"volume_sum", to_string(cert.volume_sum)},
         {"entries", std::move(entries)}};
  return {r, cert.compatible() ? 0 : 1};
}

Outcome cmd_degree1(const Options& o, Inputs& in) {
  Loaded l = load(o, in);
  if (o.dref.empty()) throw InputError("--dref is required");
  in.add("dref", o.dref);
  const Divisor dref = vertex_divisor(l.g, text_or_file(o.dref), "--dref");
  Json cells = Json::object();
  for (Index e = 0; e < l.g.num_edges(); ++e) {
    const Degree1Result d1 = degree1_cell(l.g, l.root, l.mu, dref, e);
    Json vbar = Json::array();
    for (Index v : d1.vbar_on_graph) vbar.push_back(l.g.vertex_id(v));
    cells[l.g.edge(e).id] = {{"cell", io::pseudo_divisor_to_json(l.g, d1.cell)},
                             {"flat_branch", d1.flat_branch},
                             {"V", vbar}};
  }
  const InjectivityReport inj = degree1_injectivity(l.g, l.root, l.mu, dref);
  Json collisions = Json::array();
  for (const auto& [a, b] : inj.collisions) collisions.push_back({a, b});
  Json r{{"edges", std::move(cells)},
         {"injectivity",
          {{"applicable", inj.applicable},
           {"status", !inj.applicable ? "NotApplicable" : (inj.injective() ? "injective" : "collision")},
           {"collisions", collisions}}}};
  return {r, inj.injective() ? 0 : 1};
}

Outcome cmd_toric(const Options& o, Inputs& in) {
  std::size_t d = o.dim;
  if (!o.f.empty()) {
    Loaded l = load(o, in);
    in.add("f", o.f);
    d = parse_spec(l.g, o.f).d();
  }
  if (d == 0) throw InputError("pass --dim N or --graph with --f");
  in.add("dim", std::to_string(d));
  const std::vector<Simplex> tri = triangulation_of(o, d, in);
  Json charts = Json::array();
  int code = 0;
  for (const auto& s : tri) {
    try {
      const toric::Chart c = toric::unimodular_chart(lattice_simplex(s));
      charts.push_back({{"vertices", c.vertices}, {"u", c.u}, {"t_relation", "product of all U_i"}});
    } catch (const NotUnimodular& e) {
      charts.push_back({{"vertices", lattice_simplex(s)}, {"error", e.what()}});
      code = 1;
    } catch (const Degenerate& e) {
      charts.push_back({{"vertices", lattice_simplex(s)}, {"error", e.what()}});
      code = 1;
    }
  }
  const toric::ConePresentation p = toric::hypercube_cone_presentation(d);
  Json relations = Json::array();
  for (const auto& [i, j] : p.relations)
    relations.push_back(p.names[i] + "*" + p.names[i + d] + " = " + p.names[j] + "*" + p.names[j + d]);
  Json r{{"dim", d},
         {"cone", {{"generators", p.generators}, {"names", p.names}, {"relations", relations}}},
         {"charts", std::move(charts)}};
  return {r, code};
}

Outcome cmd_selftest(std::uint64_t seed) {
  const SelftestReport rep = run_selftest(seed);
  Json cases = Json::array();
  for (const auto& c : rep.cases) {
    Json item{{"name", c.name}, {"passed", c.passed}};
    if (!c.passed) item["detail"] = c.detail;
    cases.push_back(std::move(item));
  }
  return {Json{{"passed", rep.ok()}, {"cases", std::move(cases)}}, rep.ok() ? 0 : 1};
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError("cannot write " + o.out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasistable reduction, tropical Jacobians and Abel map certificates"};
  app.require_subcommand(1, 1);
  Options o;

  auto graph_opts = [&](CLI::App* c) {
    c->add_option("--graph", o.graph_path, "graph JSON file");
    c->add_option("--pol", o.pol, "polarization: \"zero\", JSON text or a JSON file")->capture_default_str();
    c->add_option("--root", o.root, "root vertex id (default: the graph's root)");
  };
  auto abel_opts = [&](CLI::App* c) {
    graph_opts(c);
    c->add_option("--dref", o.dref, "reference divisor D† (text grammar or JSON)");
    c->add_option("--f", o.f, "comma-separated edge ids f_1..f_d");
    c->add_option("--samples", o.samples, "extra seeded interior samples per simplex");
    c->add_option("--seed", o.seed, "seed for sampled checks (fallback: TROPABEL_SEED)");
    c->add_option("--route", o.route, "tropical reduction route: auto, subdivision, lattice")->capture_default_str();
  };
  auto tri_opts = [&](CLI::App* c) {
    c->add_flag("--staircase", o.staircase, "use the staircase triangulation");
    c->add_option("--triangulation", o.triangulation_path, "triangulation JSON file");
  };

  auto* reduce = app.add_subcommand("reduce", "quasistable representative of a divisor");
  graph_opts(reduce);
  reduce->add_option("--div", o.div, "divisor (text grammar or JSON)");
  reduce->add_option("--route", o.route, "tropical reduction route: auto, subdivision, lattice")->capture_default_str();

  auto* enumerate = app.add_subcommand("enumerate-jacobian", "cells of the tropical Jacobian");
  graph_opts(enumerate);
  enumerate->add_option("--deg", o.deg, "degree d")->capture_default_str();
  enumerate->add_option("--format", o.format, "json or dot")->capture_default_str();

  auto* abel_cell = app.add_subcommand("abel-cell", "Jacobian cell containing the image of an open simplex");
  abel_opts(abel_cell);
  abel_cell->add_option("--simplex", o.simplex, "comma-separated vertex labels Q_0..Q_n");

  auto* certify = app.add_subcommand("certify", "compatibility certificate for a triangulation of H_f");
  abel_opts(certify);
  tri_opts(certify);

  auto* degree1 = app.add_subcommand("degree1", "degree-1 Abel map cells and injectivity");
  graph_opts(degree1);
  degree1->add_option("--dref", o.dref, "reference divisor of degree deg(mu) + 1");

  auto* toric_cmd = app.add_subcommand("toric-charts", "unimodular charts of a triangulated hypercube");
  toric_cmd->add_option("--graph", o.graph_path, "graph JSON file (with --f)");
  toric_cmd->add_option("--f", o.f, "comma-separated edge ids");
  toric_cmd->add_option("--dim", o.dim, "hypercube dimension (without --f)");
  tri_opts(toric_cmd);

  auto* selftest = app.add_subcommand("selftest", "golden examples and invariant suites");
  selftest->add_option("--seed", o.seed, "seed for the random suites (fallback: TROPABEL_SEED)");

  for (auto* c : {reduce, enumerate, abel_cell, certify, degree1, toric_cmd, selftest})
    c->add_option("--out", o.out, "report file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const std::uint64_t seed = resolve_seed(o);
    Inputs in;
    Outcome out;
    std::string name;
    if (*reduce) {
      name = "reduce";
      out = cmd_reduce(o, in);
    } else if (*enumerate) {
      name = "enumerate-jacobian";
      out = cmd_enumerate(o, in);
    } else if (*abel_cell) {
      name = "abel-cell";
      in.add("seed", std::to_string(seed));
      out = cmd_abel_cell(o, in, seed);
    } else if (*certify) {
      name = "certify";
      in.add("seed", std::to_string(seed));
      out = cmd_certify(o, in, seed);
    } else if (*degree1) {
      name = "degree1";
      out = cmd_degree1(o, in);
    } else if (*toric_cmd) {
      name = "toric-charts";
      out = cmd_toric(o, in);
    } else {
      name = "selftest";
      in.add("seed", std::to_string(seed));
      out = cmd_selftest(seed);
    }
    if (out.raw) {
      emit(o, "// " + std::string(io::kToolVersion) + " " + name + " input " + in.hash() + "\n" + *out.raw);
    } else {
      Json report{{"tool", io::kToolVersion}, {"command", name}, {"input_hash", in.hash()}};
      if (name == "abel-cell" || name == "certify" || name == "selftest") report["seed"] = seed;
      report["result"] = std::move(out.result);
      emit(o, report.dump(2) + "\n");
    }
    return out.code;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const UnsupportedFormat& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const NotPrincipal& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const AssertionFailure& e) {
    std::cerr << "internal assertion failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
